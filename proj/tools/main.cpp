// hancnn: character-level convolutional text classification toolkit.
// Subcommands cover the full pipeline: dataset construction from news dumps,
// pinyin transliteration, alphabet construction, training, evaluation,
// parameter counting, and classical baselines.
//
// Conventions: machine-readable results go to stdout as tab-separated
// key-value lines, human/progress output goes to stderr. Exit codes:
// 0 success, 2 input errors, 1 internal errors.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "hancnn/hancnn.hpp"

namespace fs = std::filesystem;
using namespace hancnn;

namespace {

constexpr const char* kCliLayouts[] = {"CNN1-FC1", "CNN2-FC1", "CNN2-FC2", "CNN3-FC1",
                                       "CNN3-FC2"};

void check_cli_layout(const std::string& name) {
    for (const char* valid : kCliLayouts)
        if (name == valid) return;
    std::string all;
    for (const char* valid : kCliLayouts) {
        if (!all.empty()) all += ", ";
        all += valid;
    }
    throw std::invalid_argument("unknown layout '" + name + "'; valid layouts: " + all);
}

void require_input(const std::string& path) {
    if (!fs::exists(path)) throw IoError("cannot open: " + path);
}

// --set key=value overrides, applied onto a ModelConfig.
void apply_overrides(model::ModelConfig& config, const std::vector<std::string>& sets) {
    std::string text;
    for (const std::string& kv : sets) {
        if (kv.find('=') == std::string::npos)
            throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
        text += kv + "\n";
    }
    if (text.empty()) return;
    // reuse the checkpoint config parser; start from the current values
    std::string merged = model::serialize_config(config);
    merged += text;
    config = model::deserialize_config(merged);
}

encoding::Alphabet resolve_alphabet(const std::string& spec) {
    if (spec == "pinyin") return encoding::build_pinyin_alphabet();
    if (spec.rfind("file:", 0) == 0) {
        const std::string path = spec.substr(5);
        require_input(path);
        return encoding::load_alphabet(path);
    }
    throw std::invalid_argument("--alphabet expects 'pinyin' or 'file:PATH', got '" + spec +
                                "'");
}

std::vector<encoding::EncodedSample> encode_records(
    const std::vector<corpus::CorpusRecord>& records, const encoding::Alphabet& alphabet,
    const encoding::EncoderConfig& cfg) {
    std::vector<encoding::EncodedSample> out;
    out.reserve(records.size());
    for (const auto& rec : records) {
        encoding::EncodedSample s;
        s.indices = encoding::encode(std::string_view(rec.text), alphabet, cfg);
        s.label = rec.label;
        out.push_back(std::move(s));
    }
    return out;
}

int max_label(const std::vector<corpus::CorpusRecord>& records) {
    int m = -1;
    for (const auto& r : records) m = std::max(m, r.label);
    return m;
}

void print_eval(const model::EvalResult& result) {
    std::cout.precision(17);
    std::cout << "total\t" << result.total << "\n";
    std::cout << "correct\t" << result.correct << "\n";
    std::cout << "error_rate\t" << result.error_rate << "\n";
    for (std::size_t c = 0; c < result.confusion.size(); ++c) {
        std::cout << "confusion." << c;
        for (std::size_t k = 0; k < result.confusion[c].size(); ++k)
            std::cout << '\t' << result.confusion[c][k];
        std::cout << "\n";
    }
}

struct BaselineMode {
    bool tfidf = false;
    bool ngram = false;
};

BaselineMode parse_baseline_mode(const std::string& mode) {
    if (mode == "bow") return {false, false};
    if (mode == "ngram") return {false, true};
    if (mode == "tfidf-bow") return {true, false};
    if (mode == "tfidf-ngram") return {true, true};
    throw std::invalid_argument(
        "unknown baseline mode '" + mode +
        "'; valid modes: bow, ngram, tfidf-bow, tfidf-ngram");
}

int cmd_build_dataset(const std::string& dump_path, const std::string& map_path,
                      const std::string& out_dir, std::size_t min_len, double test_frac,
                      std::uint64_t seed) {
    require_input(dump_path);
    require_input(map_path);
    fs::create_directories(out_dir);

    corpus::DomainMap domain_map = corpus::load_domain_map(map_path);
    auto dump_in = open_input(dump_path);
    auto parsed = corpus::parse_dump(dump_in);

    std::size_t dropped_unlabeled = 0, dropped_short = 0;
    std::vector<corpus::CorpusRecord> kept;
    for (auto& rec : parsed.records) {
        auto labeled = corpus::label_by_domain(std::move(rec), domain_map);
        if (!labeled) {
            ++dropped_unlabeled;
            continue;
        }
        if (!corpus::filter_short(*labeled, min_len)) {
            ++dropped_short;
            continue;
        }
        labeled->url.clear();
        kept.push_back(std::move(*labeled));
    }
    if (kept.empty()) throw std::runtime_error("no labeled records survived the pipeline");

    auto splits = corpus::split(kept, test_frac, seed);
    corpus::write_csv(splits.train, (fs::path(out_dir) / "train.csv").string());
    corpus::write_csv(splits.test, (fs::path(out_dir) / "test.csv").string());
    auto manifest = corpus::make_manifest(domain_map.class_names(), splits.train,
                                          splits.test, "chinese");
    corpus::write_manifest(manifest, (fs::path(out_dir) / "manifest.tsv").string());

    std::cerr << "parsed " << parsed.records.size() << " docs (" << parsed.skipped
              << " malformed blocks skipped), dropped " << dropped_unlabeled
              << " unlabeled and " << dropped_short << " short; wrote "
              << splits.train.size() << " train / " << splits.test.size() << " test\n";

    std::cout << "docs_parsed\t" << parsed.records.size() << "\n";
    std::cout << "blocks_skipped\t" << parsed.skipped << "\n";
    std::cout << "dropped_unlabeled\t" << dropped_unlabeled << "\n";
    std::cout << "dropped_short\t" << dropped_short << "\n";
    std::cout << "train_total\t" << splits.train.size() << "\n";
    std::cout << "test_total\t" << splits.test.size() << "\n";
    for (std::size_t c = 0; c < manifest.classes.size(); ++c) {
        std::cout << "train." << manifest.classes[c] << "\t" << manifest.train_counts[c]
                  << "\n";
        std::cout << "test." << manifest.classes[c] << "\t" << manifest.test_counts[c]
                  << "\n";
    }
    return 0;
}

int cmd_build_alphabet(const std::vector<std::string>& csv_paths, const std::string& out) {
    std::vector<std::string> texts;
    for (const std::string& path : csv_paths) {
        require_input(path);
        for (auto& rec : corpus::read_csv(path)) texts.push_back(std::move(rec.text));
    }
    encoding::Alphabet alphabet = encoding::build_corpus_alphabet(texts);
    encoding::save_alphabet(alphabet, out);
    std::cerr << "alphabet of " << alphabet.size() << " symbols written to " << out << "\n";
    std::cout << "alphabet_size\t" << alphabet.size() << "\n";
    return 0;
}

int cmd_transliterate(const std::string& in_csv, const std::string& out_csv,
                      const std::string& table_path, const std::string& lexicon_path,
                      const std::string& format) {
    require_input(in_csv);
    require_input(table_path);
    require_input(lexicon_path);

    std::vector<std::string> warnings;
    pinyin::PinyinTable table = pinyin::load_pinyin_table(table_path, &warnings);
    for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
    pinyin::Lexicon lexicon = pinyin::load_lexicon(lexicon_path);

    auto records = corpus::read_csv(in_csv);
    std::vector<corpus::CorpusRecord> out;
    if (format == "both") {
        out = corpus::augment_pinyin(records, table, lexicon);
    } else {
        const pinyin::PinyinFormat fmt = pinyin::parse_format(format);
        out.reserve(records.size());
        for (const auto& rec : records) {
            corpus::CorpusRecord r = rec;
            r.text = pinyin::transliterate(std::string_view(rec.text), table, lexicon, fmt);
            out.push_back(std::move(r));
        }
    }
    corpus::write_csv(out, out_csv);
    std::cerr << "transliterated " << records.size() << " records into " << out.size()
              << "\n";
    std::cout << "records_in\t" << records.size() << "\n";
    std::cout << "records_out\t" << out.size() << "\n";
    return 0;
}

int cmd_train(const std::string& train_csv, const std::string& test_csv,
              const std::string& alphabet_spec, const std::string& layout,
              const std::string& out_path, std::optional<std::size_t> max_len,
              model::ModelConfig config, const std::vector<std::string>& sets,
              bool num_classes_set, const model::TrainConfig& train_cfg) {
    require_input(train_csv);
    if (!test_csv.empty()) require_input(test_csv);
    check_cli_layout(layout);
    model::apply_layout(config, layout);

    encoding::Alphabet alphabet = resolve_alphabet(alphabet_spec);
    config.alphabet_size = alphabet.size();
    config.max_length = max_len ? *max_len : (alphabet_spec == "pinyin" ? 1000 : 250);

    auto train_records = corpus::read_csv(train_csv);
    if (train_records.empty()) throw std::runtime_error("training CSV is empty");
    std::vector<corpus::CorpusRecord> test_records;
    if (!test_csv.empty()) test_records = corpus::read_csv(test_csv);

    if (!num_classes_set) {
        int top = std::max(max_label(train_records), max_label(test_records));
        config.num_classes = std::max<std::size_t>(2, static_cast<std::size_t>(top + 1));
    }
    apply_overrides(config, sets);
    config.validate();

    encoding::EncoderConfig enc_cfg(config.max_length);
    auto train_set = encode_records(train_records, alphabet, enc_cfg);
    auto test_set = encode_records(test_records, alphabet, enc_cfg);

    std::cerr << "training " << config.layout() << " (S=" << config.alphabet_size
              << ", E=" << config.embed_dim << ", L=" << config.max_length
              << ", maps=" << config.feature_maps << ") on " << train_set.size()
              << " records\n";

    Rng master(train_cfg.seed);
    model::ModelParams params = model::build(config, master.fork_seed());
    model::TrainConfig tc = train_cfg;
    tc.seed = master.fork_seed();
    auto log = model::train(params, config, tc, train_set, test_set);
    std::cout << log.to_tsv();

    model::save_checkpoint(params, config, out_path);
    std::cerr << "checkpoint written to " << out_path << "\n";
    return 0;
}

int cmd_eval(const std::string& ckpt_path, const std::string& csv_path,
             const std::string& alphabet_spec) {
    require_input(ckpt_path);
    require_input(csv_path);
    model::Checkpoint ck = model::load_checkpoint(ckpt_path);
    encoding::Alphabet alphabet = resolve_alphabet(alphabet_spec);
    if (alphabet.size() != ck.config.alphabet_size)
        throw std::invalid_argument(
            "alphabet size " + std::to_string(alphabet.size()) +
            " does not match checkpoint alphabet_size " +
            std::to_string(ck.config.alphabet_size));

    auto records = corpus::read_csv(csv_path);
    if (records.empty()) throw std::runtime_error("evaluation CSV is empty");
    encoding::EncoderConfig enc_cfg(ck.config.max_length);
    auto dataset = encode_records(records, alphabet, enc_cfg);
    auto result = model::evaluate(ck.params, ck.config, dataset);
    print_eval(result);
    return 0;
}

int cmd_params(const std::string& layout, model::ModelConfig config,
               const std::vector<std::string>& sets) {
    check_cli_layout(layout);
    model::apply_layout(config, layout);
    apply_overrides(config, sets);
    model::ParamCount pc = model::count_params(config);
    std::cout << "layout\t" << config.layout() << "\n";
    for (const auto& a : pc.arrays)
        std::cout << "param." << a.name << "\t" << a.rows << "\t" << a.cols << "\t"
                  << a.count << "\n";
    std::cout << "total\t" << pc.total << "\n";
    std::cout << "untrainable_pad_row\t" << pc.untrainable << "\n";
    std::cout << "trainable\t" << pc.trainable() << "\n";
    return 0;
}

int cmd_baseline(const std::string& train_csv, const std::string& test_csv,
                 const std::string& mode_name, std::size_t ngram_n, std::size_t vocab_size,
                 const std::string& lexicon_path, const baselines::LinearTrainConfig& cfg) {
    require_input(train_csv);
    require_input(test_csv);
    BaselineMode mode = parse_baseline_mode(mode_name);

    auto train_records = corpus::read_csv(train_csv);
    auto test_records = corpus::read_csv(test_csv);
    if (train_records.empty() || test_records.empty())
        throw std::runtime_error("baseline needs nonempty train and test CSVs");

    pinyin::Lexicon lexicon;
    if (!lexicon_path.empty()) {
        require_input(lexicon_path);
        lexicon = pinyin::load_lexicon(lexicon_path);
    }

    baselines::TermExtractor extractor;
    if (mode.ngram) {
        extractor = [ngram_n](const std::string& text) {
            return baselines::extract_ngrams(std::string_view(text), ngram_n);
        };
    } else if (!lexicon_path.empty()) {
        auto lex = std::make_shared<pinyin::Lexicon>(std::move(lexicon));
        extractor = [lex](const std::string& text) {
            return baselines::extract_segmented_words(decode_utf8(text), *lex);
        };
    } else {
        extractor = [](const std::string& text) {
            return baselines::extract_space_tokens(text);
        };
    }

    const auto weighting =
        mode.tfidf ? baselines::Weighting::tfidf : baselines::Weighting::count;
    baselines::FeatureVocab vocab = baselines::fit_vocab(train_records, extractor, vocab_size);

    auto featurize_all = [&](const std::vector<corpus::CorpusRecord>& records,
                             std::vector<baselines::SparseVec>& features,
                             std::vector<int>& labels) {
        for (const auto& r : records) {
            features.push_back(baselines::featurize(r.text, extractor, vocab, weighting));
            labels.push_back(r.label);
        }
    };
    std::vector<baselines::SparseVec> train_x, test_x;
    std::vector<int> train_y, test_y;
    featurize_all(train_records, train_x, train_y);
    featurize_all(test_records, test_x, test_y);

    const int classes = std::max(max_label(train_records), max_label(test_records)) + 1;
    if (classes < 2) throw std::runtime_error("baseline needs at least 2 classes");

    auto clf = baselines::train_linear(train_x, train_y, static_cast<std::size_t>(classes),
                                       cfg, vocab.size());

    auto error_on = [&](const std::vector<baselines::SparseVec>& xs,
                        const std::vector<int>& ys) {
        std::size_t wrong = 0;
        for (std::size_t i = 0; i < xs.size(); ++i)
            if (baselines::predict(clf, xs[i]) != static_cast<std::size_t>(ys[i])) ++wrong;
        return static_cast<double>(wrong) / static_cast<double>(xs.size());
    };

    std::cout.precision(17);
    std::cout << "mode\t" << mode_name << "\n";
    std::cout << "vocab_size\t" << vocab.size() << "\n";
    std::cout << "train_error\t" << error_on(train_x, train_y) << "\n";
    std::cout << "test_error\t" << error_on(test_x, test_y) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"character-level convolutional text classification toolkit"};
    app.require_subcommand(1);

    // build-dataset
    auto* build_ds = app.add_subcommand("build-dataset",
                                        "parse a news dump, label by URL domain, filter, "
                                        "split, and write train/test CSVs");
    std::string dump_path, map_path, out_dir = ".";
    std::size_t min_len = 20;
    double test_frac = 0.15;
    std::uint64_t ds_seed = 0;
    build_ds->add_option("dump", dump_path, "news dump file")->required();
    build_ds->add_option("--domain-map", map_path, "domain->class map file")->required();
    build_ds->add_option("--out-dir", out_dir, "output directory");
    build_ds->add_option("--min-len", min_len, "minimum text length in characters");
    build_ds->add_option("--test-frac", test_frac, "test split fraction");
    build_ds->add_option("--seed", ds_seed, "split shuffle seed");

    // build-alphabet
    auto* build_al = app.add_subcommand("build-alphabet",
                                        "collect the distinct characters of CSV datasets");
    std::vector<std::string> alphabet_csvs;
    std::string alphabet_out;
    build_al->add_option("csvs", alphabet_csvs, "input CSV files")->required();
    build_al->add_option("--out", alphabet_out, "output alphabet file")->required();

    // transliterate
    auto* transl = app.add_subcommand("transliterate",
                                      "render a Chinese-character CSV as pinyin");
    std::string tr_in, tr_out, tr_table, tr_lexicon, tr_format = "A";
    transl->add_option("input", tr_in, "input CSV")->required();
    transl->add_option("output", tr_out, "output CSV")->required();
    transl->add_option("--table", tr_table, "pinyin table file")->required();
    transl->add_option("--lexicon", tr_lexicon, "lexicon file")->required();
    transl->add_option("--format", tr_format, "A, B, or both");

    // train
    auto* train_cmd = app.add_subcommand("train", "train a model and write a checkpoint");
    std::string train_in, train_test, train_alphabet = "pinyin", train_layout = "CNN1-FC1";
    std::string train_out = "model.ckpt";
    model::ModelConfig train_config;
    model::TrainConfig train_tc;
    std::optional<std::size_t> train_max_len;
    std::vector<std::string> train_sets;
    bool train_classes_set = false;
    std::size_t train_classes = 5;
    train_cmd->add_option("train_csv", train_in, "training CSV")->required();
    train_cmd->add_option("--test", train_test, "test CSV for per-epoch error");
    train_cmd->add_option("--out", train_out, "checkpoint output path");
    train_cmd->add_option("--alphabet", train_alphabet, "pinyin | file:PATH");
    train_cmd->add_option("--layout", train_layout, "CNN{n}-FC{m} layout name");
    train_cmd->add_option("--max-len", train_max_len, "sequence length L");
    train_cmd->add_option("--embed-dim", train_config.embed_dim, "embedding width");
    train_cmd->add_option("--feature-maps", train_config.feature_maps, "conv feature maps");
    train_cmd->add_option("--fc-hidden", train_config.fc_hidden, "hidden dense width");
    train_cmd->add_option("--dropout", train_config.dropout_rate, "dropout rate");
    train_cmd->add_option("--l2", train_config.l2_coeff, "L2 coefficient");
    train_cmd->add_option("--lr", train_tc.lr, "learning rate");
    train_cmd->add_option("--batch", train_tc.batch_size, "batch size");
    train_cmd->add_option("--epochs", train_tc.epochs, "training epochs");
    train_cmd->add_option("--seed", train_tc.seed, "master seed");
    train_cmd->add_option("--num-classes", train_classes, "class count")
        ->each([&](const std::string&) { train_classes_set = true; });
    train_cmd->add_option("--set", train_sets, "config override key=value");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint on a CSV");
    std::string eval_ckpt, eval_csv, eval_alphabet = "pinyin";
    eval_cmd->add_option("checkpoint", eval_ckpt, "checkpoint file")->required();
    eval_cmd->add_option("csv", eval_csv, "dataset CSV")->required();
    eval_cmd->add_option("--alphabet", eval_alphabet, "pinyin | file:PATH");

    // params
    auto* params_cmd = app.add_subcommand("params", "count model parameters");
    std::string params_layout = "CNN1-FC1";
    model::ModelConfig params_config;
    std::vector<std::string> params_sets;
    params_cmd->add_option("--layout", params_layout, "CNN{n}-FC{m} layout name");
    params_cmd->add_option("--alphabet-size", params_config.alphabet_size, "S");
    params_cmd->add_option("--embed-dim", params_config.embed_dim, "embedding width");
    params_cmd->add_option("--feature-maps", params_config.feature_maps, "conv feature maps");
    params_cmd->add_option("--fc-hidden", params_config.fc_hidden, "hidden dense width");
    params_cmd->add_option("--num-classes", params_config.num_classes, "class count");
    params_cmd->add_option("--set", params_sets, "config override key=value");

    // baseline
    auto* base_cmd = app.add_subcommand("baseline",
                                        "bag-of-words / n-gram linear classifier");
    std::string base_train, base_test, base_mode = "tfidf-ngram", base_lexicon;
    std::size_t base_n = 5, base_vocab = 50000;
    baselines::LinearTrainConfig base_cfg;
    base_cmd->add_option("train_csv", base_train, "training CSV")->required();
    base_cmd->add_option("test_csv", base_test, "test CSV")->required();
    base_cmd->add_option("--mode", base_mode, "bow | ngram | tfidf-bow | tfidf-ngram");
    base_cmd->add_option("--ngram", base_n, "n-gram length");
    base_cmd->add_option("--vocab-size", base_vocab, "feature vocabulary size");
    base_cmd->add_option("--lexicon", base_lexicon, "lexicon for word segmentation");
    base_cmd->add_option("--epochs", base_cfg.epochs, "training epochs");
    base_cmd->add_option("--lr", base_cfg.lr, "learning rate");
    base_cmd->add_option("--l2", base_cfg.l2, "L2 coefficient");
    base_cmd->add_option("--batch", base_cfg.batch_size, "batch size");
    base_cmd->add_option("--seed", base_cfg.seed, "shuffle seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*build_ds)
            return cmd_build_dataset(dump_path, map_path, out_dir, min_len, test_frac,
                                     ds_seed);
        if (*build_al) return cmd_build_alphabet(alphabet_csvs, alphabet_out);
        if (*transl) return cmd_transliterate(tr_in, tr_out, tr_table, tr_lexicon, tr_format);
        if (*train_cmd) {
            if (train_classes_set) train_config.num_classes = train_classes;
            return cmd_train(train_in, train_test, train_alphabet, train_layout, train_out,
                             train_max_len, train_config, train_sets, train_classes_set,
                             train_tc);
        }
        if (*eval_cmd) return cmd_eval(eval_ckpt, eval_csv, eval_alphabet);
        if (*params_cmd) return cmd_params(params_layout, params_config, params_sets);
        if (*base_cmd)
            return cmd_baseline(base_train, base_test, base_mode, base_n, base_vocab,
                                base_lexicon, base_cfg);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

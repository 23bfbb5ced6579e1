#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hancnn/common.hpp"
#include "hancnn/corpus/record.hpp"
#include "hancnn/io.hpp"
#include "hancnn/nn/adam.hpp"
#include "hancnn/nn/loss.hpp"
#include "hancnn/pinyin/pinyin.hpp"
#include "hancnn/rng.hpp"
#include "hancnn/tensor.hpp"
#include "hancnn/utf8.hpp"

namespace hancnn::baselines {

using TermCounts = std::unordered_map<std::string, std::size_t>;

// All contiguous character n-grams of the text, with multiplicity. Terms are
// windows over code points, returned as UTF-8 strings.
inline TermCounts extract_ngrams(std::u32string_view text, std::size_t n) {
    if (n < 1) throw std::invalid_argument("extract_ngrams: n must be >= 1");
    TermCounts counts;
    if (text.size() < n) return counts;
    for (std::size_t i = 0; i + n <= text.size(); ++i)
        ++counts[encode_utf8(text.substr(i, n))];
    return counts;
}

inline TermCounts extract_ngrams(std::string_view utf8_text, std::size_t n) {
    return extract_ngrams(std::u32string(decode_utf8(utf8_text)), n);
}

// Whitespace-delimited tokens, for corpora that already carry word gaps
// (pinyin renderings).
inline TermCounts extract_space_tokens(std::string_view text) {
    TermCounts counts;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < text.size() && text[j] != ' ' && text[j] != '\t') ++j;
        if (j > i) ++counts[std::string(text.substr(i, j - i))];
        i = j;
    }
    return counts;
}

// Bag of words over the maximum-matching segmentation.
inline TermCounts extract_segmented_words(std::u32string_view text,
                                          const pinyin::Lexicon& lexicon) {
    TermCounts counts;
    for (const std::u32string& w : pinyin::segment(text, lexicon))
        ++counts[encode_utf8(w)];
    return counts;
}

using TermExtractor = std::function<TermCounts(const std::string&)>;

// Top-V terms of the training split with idf values. Fit on the training
// split only; featurize never updates document frequencies.
struct FeatureVocab {
    std::vector<std::string> terms;                       // column order
    std::unordered_map<std::string, std::size_t> index;   // term -> column
    std::vector<double> idf;                              // ln(N/(1+df)), clamped at 0

    std::size_t size() const { return terms.size(); }
};

// Ranks terms by total training-split frequency, ties broken lexicographically.
// idf(t) = max(0, ln(N / (1 + df(t)))) with N the training document count.
inline FeatureVocab fit_vocab(std::span<const corpus::CorpusRecord> train,
                              const TermExtractor& extract, std::size_t top_v) {
    if (top_v < 1) throw std::invalid_argument("fit_vocab: V must be >= 1");
    if (train.empty()) throw std::invalid_argument("fit_vocab: empty training split");
    std::unordered_map<std::string, std::size_t> freq;
    std::unordered_map<std::string, std::size_t> df;
    for (const auto& rec : train) {
        TermCounts counts = extract(rec.text);
        for (const auto& [term, count] : counts) {
            freq[term] += count;
            df[term] += 1;
        }
    }
    std::vector<std::pair<std::string, std::size_t>> ranked(freq.begin(), freq.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (ranked.size() > top_v) ranked.resize(top_v);

    FeatureVocab vocab;
    const double n_docs = static_cast<double>(train.size());
    for (const auto& [term, _] : ranked) {
        vocab.index.emplace(term, vocab.terms.size());
        vocab.terms.push_back(term);
        const double raw = std::log(n_docs / (1.0 + static_cast<double>(df[term])));
        vocab.idf.push_back(std::max(0.0, raw));
    }
    return vocab;
}

enum class Weighting { count, tfidf };

// Sparse feature vector: (column, value) pairs sorted by column.
using SparseVec = std::vector<std::pair<std::size_t, double>>;

inline SparseVec featurize(const TermCounts& counts, const FeatureVocab& vocab,
                           Weighting weighting) {
    SparseVec features;
    for (const auto& [term, count] : counts) {
        auto it = vocab.index.find(term);
        if (it == vocab.index.end()) continue;   // unseen terms have no column
        double value = static_cast<double>(count);
        if (weighting == Weighting::tfidf) value *= vocab.idf[it->second];
        features.emplace_back(it->second, value);
    }
    std::sort(features.begin(), features.end());
    return features;
}

inline SparseVec featurize(const std::string& text, const TermExtractor& extract,
                           const FeatureVocab& vocab, Weighting weighting) {
    return featurize(extract(text), vocab, weighting);
}

// Multinomial logistic regression over sparse features.
struct LinearClassifier {
    Tensor2D weights;            // V x C
    std::vector<double> bias;    // C
    bool trained = false;

    std::size_t num_classes() const { return bias.size(); }
};

inline std::vector<double> scores(const LinearClassifier& clf, const SparseVec& features) {
    std::vector<double> out(clf.bias);
    for (const auto& [col, value] : features) {
        if (col >= clf.weights.rows) throw ShapeError("scores: feature column out of range");
        const double* w = clf.weights.row(col);
        for (std::size_t c = 0; c < out.size(); ++c) out[c] += value * w[c];
    }
    return out;
}

inline std::size_t predict(const LinearClassifier& clf, const SparseVec& features) {
    std::vector<double> s = scores(clf, features);
    std::size_t best = 0;
    for (std::size_t c = 1; c < s.size(); ++c)
        if (s[c] > s[best]) best = c;
    return best;
}

struct LinearTrainConfig {
    std::size_t epochs = 50;
    double lr = 0.01;
    double l2 = 1e-5;
    std::size_t batch_size = 32;
    std::uint64_t seed = 0;
};

// Softmax regression by shuffled mini-batch gradient descent (Adam updates,
// shared with the network optimizer), L2 on the weight matrix.
inline LinearClassifier train_linear(std::span<const SparseVec> features,
                                     std::span<const int> labels, std::size_t num_classes,
                                     const LinearTrainConfig& cfg, std::size_t vocab_size) {
    if (features.size() != labels.size())
        throw ShapeError("train_linear: features/labels size mismatch");
    if (features.empty()) throw std::invalid_argument("train_linear: empty training set");
    if (num_classes < 2) throw std::invalid_argument("train_linear: need >= 2 classes");

    LinearClassifier clf;
    clf.weights = Tensor2D(vocab_size, num_classes);
    clf.bias.assign(num_classes, 0.0);

    nn::AdamState w_state(clf.weights.size(), cfg.lr);
    nn::AdamState b_state(clf.bias.size(), cfg.lr);

    Rng rng(cfg.seed);
    std::vector<std::size_t> order(features.size());
    std::iota(order.begin(), order.end(), 0);

    Tensor2D w_grad(vocab_size, num_classes);
    std::vector<double> b_grad(num_classes);

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t end = std::min(order.size(), start + cfg.batch_size);
            w_grad.fill(0.0);
            std::fill(b_grad.begin(), b_grad.end(), 0.0);
            for (std::size_t k = start; k < end; ++k) {
                const SparseVec& x = features[order[k]];
                const int y = labels[order[k]];
                if (y < 0 || static_cast<std::size_t>(y) >= num_classes)
                    throw std::invalid_argument("train_linear: label out of range");
                auto sm = nn::softmax_xent(scores(clf, x), static_cast<std::size_t>(y));
                for (std::size_t c = 0; c < num_classes; ++c) b_grad[c] += sm.grad_logits[c];
                for (const auto& [col, value] : x) {
                    double* gw = w_grad.row(col);
                    for (std::size_t c = 0; c < num_classes; ++c)
                        gw[c] += value * sm.grad_logits[c];
                }
            }
            const double inv = 1.0 / static_cast<double>(end - start);
            for (double& g : w_grad.data) g *= inv;
            for (double& g : b_grad) g *= inv;
            if (cfg.l2 != 0.0) {
                const double two_l2 = 2.0 * cfg.l2;
                for (std::size_t i = 0; i < w_grad.data.size(); ++i)
                    w_grad.data[i] += two_l2 * clf.weights.data[i];
            }
            nn::adam_step(clf.weights.data, w_grad.data, w_state);
            nn::adam_step(clf.bias, b_grad, b_state);
        }
    }
    clf.trained = true;
    return clf;
}

// Vocab file: UTF-8, one term per line, optional tab-separated idf column.
inline void save_vocab(const FeatureVocab& vocab, const std::string& path) {
    atomic_write_file(path, [&](std::ostream& out) {
        out.precision(17);
        for (std::size_t i = 0; i < vocab.terms.size(); ++i)
            out << vocab.terms[i] << '\t' << vocab.idf[i] << '\n';
    });
}

}  // namespace hancnn::baselines

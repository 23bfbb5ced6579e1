#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "hancnn/model/checkpoint.hpp"
#include "hancnn/model/config.hpp"
#include "hancnn/model/network.hpp"
#include "hancnn/model/train.hpp"
#include "hancnn/nn/grad_check.hpp"

using namespace hancnn;
using namespace hancnn::model;
using hancnn::encoding::EncodedSample;
using Catch::Approx;

namespace {

ModelConfig tiny_config(std::size_t conv_layers = 1, std::size_t fc_layers = 1) {
    ModelConfig cfg;
    cfg.alphabet_size = 7;
    cfg.embed_dim = 3;
    cfg.max_length = 10;
    cfg.conv_layers = conv_layers;
    cfg.feature_maps = 4;
    cfg.kernel_size = 3;
    cfg.fc_layers = fc_layers;
    cfg.fc_hidden = 6;
    cfg.num_classes = 3;
    cfg.dropout_rate = 0.0;   // keeps the loss deterministic for gradient checks
    cfg.l2_coeff = 0.0;
    return cfg;
}

std::vector<std::uint32_t> random_indices(const ModelConfig& cfg, Rng& rng) {
    std::vector<std::uint32_t> idx(cfg.max_length);
    for (auto& v : idx) v = static_cast<std::uint32_t>(rng.below(cfg.alphabet_size + 1));
    return idx;
}

// Flattens every parameter array, runs the loss closure under grad_check,
// and verifies the full backward pass in one sweep.
bool full_model_grad_check(const ModelConfig& cfg, std::uint64_t seed, double tolerance,
                           double* max_err = nullptr) {
    ModelParams params = build(cfg, seed);
    Rng rng(seed + 1);
    std::vector<std::uint32_t> indices = random_indices(cfg, rng);
    const std::size_t target = rng.below(cfg.num_classes);

    ForwardCache cache;
    forward(params, cfg, indices, Mode::train, &rng, &cache);
    auto sm = nn::softmax_xent(cache.logits, target);
    ModelGrads grads = backward(params, cfg, indices, cache, sm.grad_logits);

    auto arrays = param_arrays(params);
    auto grad_spans = grad_arrays(grads);

    std::vector<double> flat, flat_grad;
    std::vector<std::size_t> offsets;
    for (std::size_t a = 0; a < arrays.size(); ++a) {
        offsets.push_back(flat.size());
        flat.insert(flat.end(), arrays[a].data.begin(), arrays[a].data.end());
        flat_grad.insert(flat_grad.end(), grad_spans[a].begin(), grad_spans[a].end());
    }

    auto loss = [&](std::span<const double> x) {
        ModelParams probe = build(cfg, seed);
        auto probe_arrays = param_arrays(probe);
        for (std::size_t a = 0; a < probe_arrays.size(); ++a)
            for (std::size_t i = 0; i < probe_arrays[a].data.size(); ++i)
                probe_arrays[a].data[i] = x[offsets[a] + i];
        std::vector<double> logits = forward(probe, cfg, indices, Mode::eval);
        return nn::softmax_xent(logits, target).loss;
    };

    // the embedding pad row is untrainable; skip its coordinates
    auto skip = [&](std::size_t i) { return i < cfg.embed_dim; };
    auto rep = nn::grad_check(loss, flat, flat_grad, tolerance, 1e-3, skip);
    if (max_err) *max_err = rep.max_rel_error;
    return rep.pass;
}

std::vector<EncodedSample> tiny_dataset(const ModelConfig& cfg, std::size_t count,
                                        Rng& rng) {
    std::vector<EncodedSample> data;
    for (std::size_t i = 0; i < count; ++i) {
        EncodedSample s;
        s.indices = random_indices(cfg, rng);
        s.label = static_cast<int>(rng.below(cfg.num_classes));
        data.push_back(std::move(s));
    }
    return data;
}

}  // namespace

TEST_CASE("build produces the documented shapes") {
    ModelConfig cfg;
    cfg.alphabet_size = 5;
    cfg.embed_dim = 2;
    cfg.max_length = 8;
    cfg.conv_layers = 1;
    cfg.feature_maps = 3;
    cfg.kernel_size = 3;
    cfg.fc_layers = 1;
    cfg.num_classes = 2;
    ModelParams p = build(cfg, 1);
    CHECK(p.embedding.weights.rows == 6);
    CHECK(p.embedding.weights.cols == 2);
    CHECK(p.convs.size() == 1);
    CHECK(p.convs[0].weights.rows == 3);
    CHECK(p.convs[0].weights.cols == 2 * 3);
    CHECK(p.convs[0].bias.size() == 3);
    CHECK(p.dense.size() == 1);
    CHECK(p.dense[0].weights.rows == 3);
    CHECK(p.dense[0].weights.cols == 2);
    CHECK(p.dense[0].bias.size() == 2);
    for (double b : p.convs[0].bias) CHECK(b == 0.0);
}

TEST_CASE("build is deterministic per seed") {
    ModelConfig cfg = tiny_config(2, 2);
    ModelParams a = build(cfg, 99);
    ModelParams b = build(cfg, 99);
    auto aa = param_arrays(a);
    auto bb = param_arrays(b);
    for (std::size_t i = 0; i < aa.size(); ++i)
        CHECK(std::vector<double>(aa[i].data.begin(), aa[i].data.end()) ==
              std::vector<double>(bb[i].data.begin(), bb[i].data.end()));
}

TEST_CASE("build rejects invalid configs by field") {
    ModelConfig cfg = tiny_config();
    cfg.conv_layers = 0;
    CHECK_THROWS_WITH(build(cfg, 1), Catch::Matchers::ContainsSubstring("conv_layers"));
    cfg = tiny_config();
    cfg.num_classes = 1;
    CHECK_THROWS_WITH(build(cfg, 1), Catch::Matchers::ContainsSubstring("num_classes"));
    cfg = tiny_config();
    cfg.kernel_size = 4;
    CHECK_THROWS_WITH(build(cfg, 1), Catch::Matchers::ContainsSubstring("kernel_size"));
}

TEST_CASE("layout names parse and invalids are rejected") {
    ModelConfig cfg;
    apply_layout(cfg, "CNN3-FC2");
    CHECK(cfg.conv_layers == 3);
    CHECK(cfg.fc_layers == 2);
    CHECK(cfg.layout() == "CNN3-FC2");
    CHECK_THROWS_WITH(apply_layout(cfg, "CNN4-FC1"),
                      Catch::Matchers::ContainsSubstring("CNN3-FC2"));
    CHECK_THROWS_AS(apply_layout(cfg, "cnn1-fc1"), std::invalid_argument);
}

TEST_CASE("forward on all-pad input with zero weights yields the output bias") {
    ModelConfig cfg = tiny_config();
    ModelParams p = build(cfg, 3);
    for (ParamArrayRef& a : param_arrays(p))
        for (double& x : a.data) x = 0.0;
    p.dense.back().bias = {0.5, -0.25, 1.5};
    std::vector<std::uint32_t> pads(cfg.max_length, 0);
    auto logits = forward(p, cfg, pads, Mode::eval);
    CHECK(logits == std::vector<double>{0.5, -0.25, 1.5});
}

TEST_CASE("logits length equals num_classes for every layout") {
    Rng rng(5);
    for (std::size_t n = 1; n <= 3; ++n) {
        for (std::size_t m = 1; m <= 2; ++m) {
            ModelConfig cfg = tiny_config(n, m);
            ModelParams p = build(cfg, 11);
            auto idx = random_indices(cfg, rng);
            CHECK(forward(p, cfg, idx, Mode::eval).size() == cfg.num_classes);
        }
    }
}

TEST_CASE("full-model gradient check on a tiny config") {
    double err = 0.0;
    CHECK(full_model_grad_check(tiny_config(1, 1), 17, 1e-4, &err));
    INFO("max rel error " << err);
    CHECK(full_model_grad_check(tiny_config(2, 2), 18, 1e-4));
}

TEST_CASE("train with lr 0 leaves parameters unchanged") {
    ModelConfig cfg = tiny_config();
    ModelParams p = build(cfg, 7);
    std::vector<double> before;
    for (const ParamArrayRef& a : param_arrays(p))
        before.insert(before.end(), a.data.begin(), a.data.end());

    Rng rng(8);
    auto data = tiny_dataset(cfg, 12, rng);
    TrainConfig tc;
    tc.batch_size = 4;
    tc.epochs = 2;
    tc.lr = 0.0;
    auto log = train(p, cfg, tc, data);

    std::vector<double> after;
    for (const ParamArrayRef& a : param_arrays(p))
        after.insert(after.end(), a.data.begin(), a.data.end());
    CHECK(before == after);
    CHECK(log.epochs[0].mean_loss == Approx(log.epochs[1].mean_loss));
}

TEST_CASE("a single repeated sample is memorized") {
    ModelConfig cfg = tiny_config();
    ModelParams p = build(cfg, 21);
    Rng rng(22);
    EncodedSample s;
    s.indices = random_indices(cfg, rng);
    s.label = 1;
    std::vector<EncodedSample> data(8, s);

    TrainConfig tc;
    tc.batch_size = 8;
    tc.epochs = 200;   // one Adam step per epoch
    tc.seed = 1;
    tc.lr = 0.01;
    auto log = train(p, cfg, tc, data);
    CHECK(log.epochs.back().mean_loss < 0.01);
    CHECK(log.epochs.back().train_error == 0.0);
}

TEST_CASE("training loss on a repeated sample is eventually monotone") {
    ModelConfig cfg = tiny_config();
    ModelParams p = build(cfg, 31);
    Rng rng(32);
    EncodedSample s;
    s.indices = random_indices(cfg, rng);
    s.label = 0;
    std::vector<EncodedSample> data(4, s);
    TrainConfig tc;
    tc.batch_size = 4;
    tc.epochs = 120;
    auto log = train(p, cfg, tc, data);
    for (std::size_t i = 21; i < log.epochs.size(); ++i)
        CHECK(log.epochs[i].mean_loss <= log.epochs[i - 1].mean_loss + 1e-12);
}

TEST_CASE("training log is bit-identical across identical seeds") {
    ModelConfig cfg = tiny_config(1, 2);
    cfg.dropout_rate = 0.1;
    Rng rng(41);
    auto data = tiny_dataset(cfg, 20, rng);
    TrainConfig tc;
    tc.batch_size = 8;
    tc.epochs = 3;
    tc.seed = 123;

    ModelParams p1 = build(cfg, 5);
    ModelParams p2 = build(cfg, 5);
    auto log1 = train(p1, cfg, tc, data);
    auto log2 = train(p2, cfg, tc, data);
    CHECK(log1.to_tsv() == log2.to_tsv());
}

TEST_CASE("evaluate counts errors and fills the confusion matrix") {
    ModelConfig cfg = tiny_config();
    ModelParams p = build(cfg, 51);
    Rng rng(52);
    auto data = tiny_dataset(cfg, 30, rng);
    auto result = evaluate(p, cfg, data);
    CHECK(result.total == 30);
    CHECK(result.error_rate ==
          Approx(static_cast<double>(30 - result.correct) / 30.0));

    std::vector<std::size_t> class_counts(cfg.num_classes, 0);
    for (const auto& s : data) class_counts[s.label] += 1;
    for (std::size_t c = 0; c < cfg.num_classes; ++c) {
        std::size_t row_sum = 0;
        for (std::size_t k = 0; k < cfg.num_classes; ++k) row_sum += result.confusion[c][k];
        CHECK(row_sum == class_counts[c]);
    }

    auto again = evaluate(p, cfg, data);
    CHECK(again.error_rate == result.error_rate);
}

TEST_CASE("prediction is invariant under constant logit shifts") {
    std::vector<double> logits = {0.3, -0.2, 0.9, 0.1};
    std::size_t base = argmax_class(logits);
    for (double& v : logits) v += 1234.5;
    CHECK(argmax_class(logits) == base);
}

TEST_CASE("count_params matches hand counts") {
    // S=5, E=2, conv 2->3 K=3, output 3->2: 12 + 21 + 8 = 41
    ModelConfig cfg;
    cfg.alphabet_size = 5;
    cfg.embed_dim = 2;
    cfg.max_length = 8;
    cfg.conv_layers = 1;
    cfg.feature_maps = 3;
    cfg.kernel_size = 3;
    cfg.fc_layers = 1;
    cfg.num_classes = 2;
    ParamCount pc = count_params(cfg);
    CHECK(pc.total == 41);
    CHECK(pc.untrainable == 2);
    CHECK(pc.trainable() == 39);

    // embedding-only contribution for S=42, E=16
    ModelConfig cfg2 = cfg;
    cfg2.alphabet_size = 42;
    cfg2.embed_dim = 16;
    ParamCount pc2 = count_params(cfg2);
    CHECK(pc2.arrays[0].count == 43 * 16);
}

TEST_CASE("count_params equals the scalars moved by one training step") {
    ModelConfig cfg = tiny_config(2, 2);
    ModelParams p = build(cfg, 61);

    // instrumented update: gradients nonzero everywhere except the pad row,
    // exactly as embed_backward guarantees
    ModelGrads grads = zero_grads(cfg);
    for (auto span : grad_arrays(grads))
        for (double& g : span) g = 1.0;
    for (std::size_t e = 0; e < cfg.embed_dim; ++e) grads.embedding(0, e) = 0.0;

    std::vector<double> before;
    for (const ParamArrayRef& a : param_arrays(p))
        before.insert(before.end(), a.data.begin(), a.data.end());

    auto arrays = param_arrays(p);
    auto grad_spans = grad_arrays(grads);
    for (std::size_t a = 0; a < arrays.size(); ++a)
        nn::adam_step(arrays[a].data, grad_spans[a], p.adam[a]);

    std::vector<double> after;
    for (const ParamArrayRef& a : param_arrays(p))
        after.insert(after.end(), a.data.begin(), a.data.end());
    std::size_t changed = 0;
    for (std::size_t i = 0; i < before.size(); ++i)
        if (before[i] != after[i]) ++changed;
    CHECK(changed == count_params(cfg).trainable());

    // a real training step can only ever move trainable scalars
    ModelParams q = build(cfg, 61);
    Rng rng(62);
    auto data = tiny_dataset(cfg, 8, rng);
    TrainConfig tc;
    tc.batch_size = 8;
    tc.epochs = 1;
    train(q, cfg, tc, data);
    std::vector<double> q_before;
    ModelParams q0 = build(cfg, 61);
    for (const ParamArrayRef& a : param_arrays(q0))
        q_before.insert(q_before.end(), a.data.begin(), a.data.end());
    std::vector<double> q_after;
    for (const ParamArrayRef& a : param_arrays(q))
        q_after.insert(q_after.end(), a.data.begin(), a.data.end());
    std::size_t moved = 0;
    for (std::size_t i = 0; i < q_before.size(); ++i)
        if (q_before[i] != q_after[i]) ++moved;
    CHECK(moved <= count_params(cfg).trainable());
    for (std::size_t e = 0; e < cfg.embed_dim; ++e)
        CHECK(q.embedding.weights(0, e) == 0.0);   // pad row pinned at zero
}

TEST_CASE("checkpoint round trip preserves config and evaluation") {
    ModelConfig cfg = tiny_config(2, 2);
    ModelParams p = build(cfg, 71);
    Rng rng(72);
    auto data = tiny_dataset(cfg, 10, rng);
    TrainConfig tc;
    tc.batch_size = 4;
    tc.epochs = 2;
    tc.seed = 3;
    train(p, cfg, tc, data);

    const std::string path =
        (std::filesystem::temp_directory_path() / "hancnn_ckpt_test.bin").string();
    save_checkpoint(p, cfg, path);
    Checkpoint ck = load_checkpoint(path);

    CHECK(serialize_config(ck.config) == serialize_config(cfg));
    // reload is f32-rounded, so compare predictions instead of raw params
    auto before = evaluate(p, cfg, data);
    auto after = evaluate(ck.params, ck.config, data);
    CHECK(before.error_rate == after.error_rate);

    // stored arrays match to f32 precision
    auto orig = param_arrays(p);
    auto loaded = param_arrays(ck.params);
    for (std::size_t a = 0; a < orig.size(); ++a)
        for (std::size_t i = 0; i < orig[a].data.size(); ++i)
            CHECK(static_cast<float>(orig[a].data[i]) ==
                  static_cast<float>(loaded[a].data[i]));
    std::filesystem::remove(path);
}

TEST_CASE("checkpoint rejects corruption and future versions") {
    ModelConfig cfg = tiny_config();
    ModelParams p = build(cfg, 81);
    const auto dir = std::filesystem::temp_directory_path();
    const std::string path = (dir / "hancnn_ckpt_bad.bin").string();
    save_checkpoint(p, cfg, path);

    {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.write("XXXX", 4);
    }
    CHECK_THROWS_WITH(load_checkpoint(path), Catch::Matchers::ContainsSubstring("magic"));

    save_checkpoint(p, cfg, path);
    {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(4);
        const unsigned char future[4] = {0xFF, 0, 0, 0};
        f.write(reinterpret_cast<const char*>(future), 4);
    }
    CHECK_THROWS_WITH(load_checkpoint(path), Catch::Matchers::ContainsSubstring("version"));

    save_checkpoint(p, cfg, path);
    {
        std::error_code ec;
        std::filesystem::resize_file(path, std::filesystem::file_size(path) / 2, ec);
    }
    CHECK_THROWS_WITH(load_checkpoint(path), Catch::Matchers::ContainsSubstring("truncated"));
    std::filesystem::remove(path);
}

TEST_CASE("config serialization round trips") {
    ModelConfig cfg = tiny_config(3, 2);
    cfg.dropout_rate = 0.1;
    cfg.l2_coeff = 2.5e-4;
    ModelConfig back = deserialize_config(serialize_config(cfg));
    CHECK(serialize_config(back) == serialize_config(cfg));
    CHECK_THROWS_AS(deserialize_config("nonsense"), ParseError);
}

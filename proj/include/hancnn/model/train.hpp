#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "hancnn/encoding/encoder.hpp"
#include "hancnn/model/network.hpp"

namespace hancnn::model {

struct TrainConfig {
    std::size_t batch_size = 128;
    std::size_t epochs = 5;
    std::uint64_t seed = 0;
    double lr = 0.001;
    bool shuffle = true;

    void validate() const {
        if (batch_size == 0) throw std::invalid_argument("TrainConfig: batch_size must be >= 1");
    }
};

struct EpochLog {
    std::size_t epoch = 0;   // 1-based
    double mean_loss = 0.0;
    double train_error = 0.0;
    std::optional<double> test_error;
};

struct TrainLog {
    std::vector<EpochLog> epochs;

    // Tab-separated lines: epoch, mean loss, train error[, test error].
    std::string to_tsv() const {
        std::ostringstream out;
        out.precision(17);
        for (const EpochLog& e : epochs) {
            out << e.epoch << '\t' << e.mean_loss << '\t' << e.train_error;
            if (e.test_error) out << '\t' << *e.test_error;
            out << '\n';
        }
        return out.str();
    }
};

struct EvalResult {
    std::size_t total = 0;
    std::size_t correct = 0;
    double error_rate = 0.0;
    std::vector<std::vector<std::size_t>> confusion;   // [true][predicted]
};

inline std::size_t argmax_class(std::span<const double> logits) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < logits.size(); ++i)
        if (logits[i] > logits[best]) best = i;
    return best;
}

// Dropout-free eval-mode forward over the whole set.
inline EvalResult evaluate(const ModelParams& params, const ModelConfig& config,
                           std::span<const encoding::EncodedSample> dataset) {
    if (dataset.empty()) throw std::invalid_argument("evaluate: empty dataset");
    EvalResult r;
    r.confusion.assign(config.num_classes, std::vector<std::size_t>(config.num_classes, 0));
    for (const auto& sample : dataset) {
        std::vector<double> logits = forward(params, config, sample.indices, Mode::eval);
        const std::size_t pred = argmax_class(logits);
        ++r.total;
        if (pred == static_cast<std::size_t>(sample.label)) ++r.correct;
        r.confusion[sample.label][pred] += 1;
    }
    r.error_rate = static_cast<double>(r.total - r.correct) / static_cast<double>(r.total);
    return r;
}

// Mini-batch training: per-epoch shuffle, batch gradient is the mean of the
// per-sample gradients (each already carrying its L2 term), one Adam step per
// batch, final short batch kept. Loss and train error come from the
// train-mode forward passes. Deterministic for a fixed seed.
inline TrainLog train(ModelParams& params, const ModelConfig& config,
                      const TrainConfig& train_cfg,
                      std::span<const encoding::EncodedSample> train_set,
                      std::span<const encoding::EncodedSample> test_set = {}) {
    config.validate();
    train_cfg.validate();
    if (train_set.empty()) throw std::invalid_argument("train: empty training set");
    for (const auto& s : train_set)
        if (s.label < 0 || static_cast<std::size_t>(s.label) >= config.num_classes)
            throw std::invalid_argument("train: sample label out of range");

    for (nn::AdamState& st : params.adam) st.lr = train_cfg.lr;

    Rng order_rng(train_cfg.seed);
    Rng dropout_rng(order_rng.fork_seed());

    TrainLog log;
    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), 0);

    for (std::size_t epoch = 1; epoch <= train_cfg.epochs; ++epoch) {
        if (train_cfg.shuffle) order_rng.shuffle(order);
        double loss_sum = 0.0;
        std::size_t wrong = 0;

        for (std::size_t start = 0; start < order.size(); start += train_cfg.batch_size) {
            const std::size_t end = std::min(order.size(), start + train_cfg.batch_size);
            ModelGrads batch_grads = zero_grads(config);
            for (std::size_t k = start; k < end; ++k) {
                const auto& sample = train_set[order[k]];
                ForwardCache cache;
                std::vector<double> logits = forward(params, config, sample.indices,
                                                     Mode::train, &dropout_rng, &cache);
                auto sm = nn::softmax_xent(logits, static_cast<std::size_t>(sample.label));
                loss_sum += sm.loss;
                if (argmax_class(logits) != static_cast<std::size_t>(sample.label)) ++wrong;
                batch_grads.accumulate(
                    backward(params, config, sample.indices, cache, sm.grad_logits));
            }
            batch_grads.scale(1.0 / static_cast<double>(end - start));
            auto grads = grad_arrays(batch_grads);
            auto arrays = param_arrays(params);
            for (std::size_t a = 0; a < arrays.size(); ++a)
                nn::adam_step(arrays[a].data, grads[a], params.adam[a]);
        }

        EpochLog entry;
        entry.epoch = epoch;
        entry.mean_loss = loss_sum / static_cast<double>(train_set.size());
        entry.train_error =
            static_cast<double>(wrong) / static_cast<double>(train_set.size());
        if (!test_set.empty())
            entry.test_error = evaluate(params, config, test_set).error_rate;
        log.epochs.push_back(entry);
    }
    return log;
}

}  // namespace hancnn::model

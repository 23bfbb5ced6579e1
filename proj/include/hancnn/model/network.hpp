#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hancnn/common.hpp"
#include "hancnn/encoding/embedding.hpp"
#include "hancnn/model/config.hpp"
#include "hancnn/nn/activations.hpp"
#include "hancnn/nn/adam.hpp"
#include "hancnn/nn/conv.hpp"
#include "hancnn/nn/dense.hpp"
#include "hancnn/nn/dropout.hpp"
#include "hancnn/nn/init.hpp"
#include "hancnn/nn/loss.hpp"
#include "hancnn/nn/pooling.hpp"
#include "hancnn/rng.hpp"

namespace hancnn::model {

// Trainable arrays plus their Adam moment state, one state per array in
// canonical order (embedding, conv w/b pairs, dense w/b pairs).
struct ModelParams {
    encoding::EmbeddingTable embedding;
    std::vector<nn::ConvLayer> convs;
    std::vector<nn::DenseLayer> dense;   // [hidden when fc_layers==2,] output
    std::vector<nn::AdamState> adam;
};

struct ParamArrayRef {
    std::string name;
    std::span<double> data;
    std::size_t rows;
    std::size_t cols;
};

// Canonical enumeration of all parameter arrays; checkpointing, Adam, and
// the gradient checks all share this order.
inline std::vector<ParamArrayRef> param_arrays(ModelParams& p) {
    std::vector<ParamArrayRef> arrays;
    arrays.push_back({"embedding", p.embedding.weights.data, p.embedding.weights.rows,
                      p.embedding.weights.cols});
    for (std::size_t i = 0; i < p.convs.size(); ++i) {
        auto& c = p.convs[i];
        const std::string base = "conv" + std::to_string(i + 1);
        arrays.push_back({base + ".weights", c.weights.data, c.weights.rows, c.weights.cols});
        arrays.push_back({base + ".bias", c.bias, 1, c.bias.size()});
    }
    for (std::size_t i = 0; i < p.dense.size(); ++i) {
        auto& d = p.dense[i];
        const bool is_output = (i + 1 == p.dense.size());
        const std::string base = is_output ? "output" : "fc" + std::to_string(i + 1);
        arrays.push_back({base + ".weights", d.weights.data, d.weights.rows, d.weights.cols});
        arrays.push_back({base + ".bias", d.bias, 1, d.bias.size()});
    }
    return arrays;
}

// He-normal weights (fan_in: in_channels*K for conv, in_dim for dense, E for
// embedding rows), zero biases, pad row zeroed. Deterministic per seed.
inline ModelParams build(const ModelConfig& config, std::uint64_t seed) {
    config.validate();
    Rng rng(seed);
    ModelParams p;
    p.embedding = encoding::make_embedding(config.alphabet_size, config.embed_dim, rng);
    std::size_t in_ch = config.embed_dim;
    for (std::size_t i = 0; i < config.conv_layers; ++i) {
        nn::ConvLayer layer(in_ch, config.feature_maps, config.kernel_size, config.l2_coeff);
        layer.weights = nn::he_normal_init(layer.weights.rows, layer.weights.cols,
                                           in_ch * config.kernel_size, rng);
        p.convs.push_back(std::move(layer));
        in_ch = config.feature_maps;
    }
    if (config.fc_layers == 2) {
        nn::DenseLayer hidden(config.feature_maps, config.fc_hidden, config.l2_coeff);
        hidden.weights =
            nn::he_normal_init(hidden.in_dim, hidden.out_dim, hidden.in_dim, rng);
        p.dense.push_back(std::move(hidden));
    }
    const std::size_t out_in = config.fc_layers == 2 ? config.fc_hidden : config.feature_maps;
    nn::DenseLayer output(out_in, config.num_classes, config.l2_coeff);
    output.weights = nn::he_normal_init(output.in_dim, output.out_dim, output.in_dim, rng);
    p.dense.push_back(std::move(output));

    for (const ParamArrayRef& a : param_arrays(p)) p.adam.emplace_back(a.data.size());
    return p;
}

struct ForwardCache {
    std::vector<Tensor2D> conv_inputs;   // input to conv i (embedded, then relu outputs)
    std::vector<Tensor2D> conv_pre;      // pre-activation conv outputs
    nn::MaxPoolResult pool;
    std::vector<double> pooled;
    std::vector<double> fc_pre;          // fc_layers == 2 only
    nn::DropoutResult drop;              // fc_layers == 2 only
    std::vector<double> final_input;     // input to the output layer
    std::vector<double> logits;
};

// embed -> (conv -> ReLU) x n -> global max-pool ->
// [fc -> ReLU -> dropout when fc_layers == 2] -> output logits.
// dropout_rng is only consulted in train mode with a nonzero dropout rate.
inline std::vector<double> forward(const ModelParams& params, const ModelConfig& config,
                                   std::span<const std::uint32_t> indices, Mode mode,
                                   Rng* dropout_rng = nullptr,
                                   ForwardCache* cache = nullptr) {
    if (indices.size() != config.max_length)
        throw ShapeError("forward: sequence length != config.max_length");
    ForwardCache local;
    ForwardCache& c = cache ? *cache : local;
    c.conv_inputs.clear();
    c.conv_pre.clear();

    c.conv_inputs.push_back(encoding::embed_forward(indices, params.embedding));
    for (std::size_t i = 0; i < params.convs.size(); ++i) {
        c.conv_pre.push_back(nn::conv1d_forward(c.conv_inputs.back(), params.convs[i]));
        if (i + 1 < params.convs.size())
            c.conv_inputs.push_back(nn::relu(c.conv_pre.back()));
    }
    Tensor2D activated = nn::relu(c.conv_pre.back());
    c.pool = nn::global_max_pool(activated);
    c.pooled = c.pool.values;

    if (config.fc_layers == 2) {
        c.fc_pre = nn::dense_forward(c.pooled, params.dense[0]);
        std::vector<double> fc_act = nn::relu(std::span<const double>(c.fc_pre));
        if (mode == Mode::train && config.dropout_rate > 0.0) {
            if (dropout_rng == nullptr)
                throw std::invalid_argument("forward: train-mode dropout needs an rng");
            c.drop = nn::dropout(fc_act, config.dropout_rate, Mode::train, *dropout_rng);
        } else {
            Rng unused(0);
            c.drop = nn::dropout(fc_act, config.dropout_rate, Mode::eval, unused);
        }
        c.final_input = c.drop.output;
    } else {
        c.final_input = c.pooled;
    }
    c.logits = nn::dense_forward(c.final_input, params.dense.back());
    return c.logits;
}

// Gradients mirroring the trainable arrays, in the same canonical order.
struct ModelGrads {
    Tensor2D embedding;
    std::vector<Tensor2D> conv_weights;
    std::vector<std::vector<double>> conv_bias;
    std::vector<Tensor2D> dense_weights;
    std::vector<std::vector<double>> dense_bias;

    void accumulate(const ModelGrads& other) {
        embedding += other.embedding;
        for (std::size_t i = 0; i < conv_weights.size(); ++i) {
            conv_weights[i] += other.conv_weights[i];
            for (std::size_t j = 0; j < conv_bias[i].size(); ++j)
                conv_bias[i][j] += other.conv_bias[i][j];
        }
        for (std::size_t i = 0; i < dense_weights.size(); ++i) {
            dense_weights[i] += other.dense_weights[i];
            for (std::size_t j = 0; j < dense_bias[i].size(); ++j)
                dense_bias[i][j] += other.dense_bias[i][j];
        }
    }

    void scale(double s) {
        embedding *= s;
        for (auto& t : conv_weights) t *= s;
        for (auto& b : conv_bias)
            for (double& x : b) x *= s;
        for (auto& t : dense_weights) t *= s;
        for (auto& b : dense_bias)
            for (double& x : b) x *= s;
    }
};

inline std::vector<std::span<double>> grad_arrays(ModelGrads& g) {
    std::vector<std::span<double>> arrays;
    arrays.emplace_back(g.embedding.data);
    for (std::size_t i = 0; i < g.conv_weights.size(); ++i) {
        arrays.emplace_back(g.conv_weights[i].data);
        arrays.emplace_back(g.conv_bias[i]);
    }
    for (std::size_t i = 0; i < g.dense_weights.size(); ++i) {
        arrays.emplace_back(g.dense_weights[i].data);
        arrays.emplace_back(g.dense_bias[i]);
    }
    return arrays;
}

// Backpropagates grad_logits through the cached forward pass. Per-layer L2
// terms are included by the layer backward calls.
inline ModelGrads backward(const ModelParams& params, const ModelConfig& config,
                           std::span<const std::uint32_t> indices, const ForwardCache& cache,
                           std::span<const double> grad_logits) {
    ModelGrads g;
    auto out_grads = nn::dense_backward(cache.final_input, params.dense.back(), grad_logits);

    std::vector<double> pooled_grad;
    if (config.fc_layers == 2) {
        std::vector<double> drop_grad = nn::dropout_backward(cache.drop.mask, out_grads.input);
        std::vector<double> fc_act_grad =
            nn::relu_backward(std::span<const double>(cache.fc_pre), drop_grad);
        auto fc_grads = nn::dense_backward(cache.pooled, params.dense[0], fc_act_grad);
        g.dense_weights.push_back(std::move(fc_grads.weights));
        g.dense_bias.push_back(std::move(fc_grads.bias));
        pooled_grad = std::move(fc_grads.input);
    } else {
        pooled_grad = std::move(out_grads.input);
    }
    g.dense_weights.push_back(std::move(out_grads.weights));
    g.dense_bias.push_back(std::move(out_grads.bias));

    const Tensor2D& last_pre = cache.conv_pre.back();
    Tensor2D grad_act =
        nn::global_max_pool_backward(cache.pool, last_pre.rows, last_pre.cols, pooled_grad);
    Tensor2D grad_pre = nn::relu_backward(last_pre, grad_act);

    g.conv_weights.resize(params.convs.size());
    g.conv_bias.resize(params.convs.size());
    for (std::size_t i = params.convs.size(); i-- > 0;) {
        auto conv_grads = nn::conv1d_backward(cache.conv_inputs[i], params.convs[i], grad_pre);
        g.conv_weights[i] = std::move(conv_grads.weights);
        g.conv_bias[i] = std::move(conv_grads.bias);
        if (i > 0)
            grad_pre = nn::relu_backward(cache.conv_pre[i - 1], conv_grads.input);
        else
            g.embedding = encoding::embed_backward(indices, conv_grads.input,
                                                   params.embedding.vocab_size());
    }
    return g;
}

inline ModelGrads zero_grads(const ModelConfig& config) {
    ModelGrads g;
    g.embedding = Tensor2D(config.alphabet_size + 1, config.embed_dim);
    std::size_t in_ch = config.embed_dim;
    for (std::size_t i = 0; i < config.conv_layers; ++i) {
        g.conv_weights.emplace_back(config.feature_maps, in_ch * config.kernel_size);
        g.conv_bias.emplace_back(config.feature_maps, 0.0);
        in_ch = config.feature_maps;
    }
    if (config.fc_layers == 2) {
        g.dense_weights.emplace_back(config.feature_maps, config.fc_hidden);
        g.dense_bias.emplace_back(config.fc_hidden, 0.0);
    }
    const std::size_t out_in = config.fc_layers == 2 ? config.fc_hidden : config.feature_maps;
    g.dense_weights.emplace_back(out_in, config.num_classes);
    g.dense_bias.emplace_back(config.num_classes, 0.0);
    return g;
}

struct ArrayCount {
    std::string name;
    std::size_t rows;
    std::size_t cols;
    std::size_t count;
};

// Exact scalar counts per array. total includes the embedding pad row, which
// is reported separately as untrainable.
struct ParamCount {
    std::vector<ArrayCount> arrays;
    std::size_t total = 0;
    std::size_t untrainable = 0;   // the embedding pad row
    std::size_t trainable() const { return total - untrainable; }
};

inline ParamCount count_params(const ModelConfig& config) {
    config.validate();
    ParamCount pc;
    auto add = [&](const std::string& name, std::size_t rows, std::size_t cols) {
        pc.arrays.push_back({name, rows, cols, rows * cols});
        pc.total += rows * cols;
    };
    add("embedding", config.alphabet_size + 1, config.embed_dim);
    pc.untrainable = config.embed_dim;
    std::size_t in_ch = config.embed_dim;
    for (std::size_t i = 0; i < config.conv_layers; ++i) {
        const std::string base = "conv" + std::to_string(i + 1);
        add(base + ".weights", config.feature_maps, in_ch * config.kernel_size);
        add(base + ".bias", 1, config.feature_maps);
        in_ch = config.feature_maps;
    }
    if (config.fc_layers == 2) {
        add("fc1.weights", config.feature_maps, config.fc_hidden);
        add("fc1.bias", 1, config.fc_hidden);
    }
    const std::size_t out_in = config.fc_layers == 2 ? config.fc_hidden : config.feature_maps;
    add("output.weights", out_in, config.num_classes);
    add("output.bias", 1, config.num_classes);
    return pc;
}

}  // namespace hancnn::model

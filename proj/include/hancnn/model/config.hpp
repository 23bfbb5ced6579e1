#pragma once

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "hancnn/common.hpp"

namespace hancnn::model {

// Architecture hyper-parameters. Layouts are named CNN{n}-FC{m}: n stacked
// conv+ReLU blocks, then global max-pool, then m fully-connected layers
// (the last always emits num_classes logits; with m=2 a hidden layer of
// fc_hidden units plus dropout sits in between).
struct ModelConfig {
    std::size_t alphabet_size = 42;   // S (pad index excluded)
    std::size_t embed_dim = 16;       // E
    std::size_t max_length = 1000;    // L
    std::size_t conv_layers = 1;      // n, 1..3
    std::size_t feature_maps = 128;
    std::size_t kernel_size = 3;
    std::size_t fc_layers = 1;        // m, 1..2
    std::size_t fc_hidden = 100;
    std::size_t num_classes = 5;
    double dropout_rate = 0.1;
    double l2_coeff = 1e-4;

    std::string layout() const {
        return "CNN" + std::to_string(conv_layers) + "-FC" + std::to_string(fc_layers);
    }

    void validate() const {
        if (alphabet_size == 0) throw std::invalid_argument("ModelConfig: alphabet_size must be >= 1");
        if (embed_dim == 0) throw std::invalid_argument("ModelConfig: embed_dim must be >= 1");
        if (max_length == 0) throw std::invalid_argument("ModelConfig: max_length must be >= 1");
        if (conv_layers < 1 || conv_layers > 3)
            throw std::invalid_argument("ModelConfig: conv_layers must be in 1..3");
        if (feature_maps == 0) throw std::invalid_argument("ModelConfig: feature_maps must be >= 1");
        if (kernel_size == 0 || kernel_size % 2 == 0)
            throw std::invalid_argument("ModelConfig: kernel_size must be odd");
        if (fc_layers < 1 || fc_layers > 2)
            throw std::invalid_argument("ModelConfig: fc_layers must be 1 or 2");
        if (fc_layers == 2 && fc_hidden == 0)
            throw std::invalid_argument("ModelConfig: fc_hidden must be >= 1");
        if (num_classes < 2) throw std::invalid_argument("ModelConfig: num_classes must be >= 2");
        if (dropout_rate < 0.0 || dropout_rate >= 1.0)
            throw std::invalid_argument("ModelConfig: dropout_rate must be in [0, 1)");
        if (l2_coeff < 0.0) throw std::invalid_argument("ModelConfig: l2_coeff must be >= 0");
    }
};

// Accepts CNN{1..3}-FC{1..2} and fills conv_layers/fc_layers.
inline void apply_layout(ModelConfig& config, const std::string& name) {
    if (name.size() == 8 && name.compare(0, 3, "CNN") == 0 &&
        name.compare(4, 3, "-FC") == 0 && name[3] >= '1' && name[3] <= '3' &&
        name[7] >= '1' && name[7] <= '2') {
        config.conv_layers = static_cast<std::size_t>(name[3] - '0');
        config.fc_layers = static_cast<std::size_t>(name[7] - '0');
        return;
    }
    throw std::invalid_argument(
        "unknown layout '" + name +
        "'; valid layouts: CNN1-FC1, CNN2-FC1, CNN2-FC2, CNN3-FC1, CNN3-FC2");
}

inline std::string serialize_config(const ModelConfig& c) {
    std::ostringstream out;
    out << "alphabet_size=" << c.alphabet_size << "\n"
        << "embed_dim=" << c.embed_dim << "\n"
        << "max_length=" << c.max_length << "\n"
        << "conv_layers=" << c.conv_layers << "\n"
        << "feature_maps=" << c.feature_maps << "\n"
        << "kernel_size=" << c.kernel_size << "\n"
        << "fc_layers=" << c.fc_layers << "\n"
        << "fc_hidden=" << c.fc_hidden << "\n"
        << "num_classes=" << c.num_classes << "\n";
    out.precision(17);
    out << "dropout_rate=" << c.dropout_rate << "\n"
        << "l2_coeff=" << c.l2_coeff << "\n";
    return out.str();
}

inline ModelConfig deserialize_config(const std::string& text) {
    ModelConfig c;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("config line has no '='", line_no);
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        try {
            if (key == "alphabet_size") c.alphabet_size = std::stoull(value);
            else if (key == "embed_dim") c.embed_dim = std::stoull(value);
            else if (key == "max_length") c.max_length = std::stoull(value);
            else if (key == "conv_layers") c.conv_layers = std::stoull(value);
            else if (key == "feature_maps") c.feature_maps = std::stoull(value);
            else if (key == "kernel_size") c.kernel_size = std::stoull(value);
            else if (key == "fc_layers") c.fc_layers = std::stoull(value);
            else if (key == "fc_hidden") c.fc_hidden = std::stoull(value);
            else if (key == "num_classes") c.num_classes = std::stoull(value);
            else if (key == "dropout_rate") c.dropout_rate = std::stod(value);
            else if (key == "l2_coeff") c.l2_coeff = std::stod(value);
            else throw ParseError("unknown config key: " + key, line_no);
        } catch (const std::invalid_argument&) {
            throw ParseError("bad value for " + key, line_no);
        }
    }
    c.validate();
    return c;
}

}  // namespace hancnn::model

#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "hancnn/common.hpp"
#include "hancnn/rng.hpp"

namespace hancnn::nn {

struct DropoutResult {
    std::vector<double> output;
    std::vector<double> mask;   // per-unit multiplier: 0 or 1/(1-rate)
};

// Inverted dropout: each unit is zeroed with probability `rate` at train
// time and survivors are scaled by 1/(1-rate), so eval mode is the identity.
inline DropoutResult dropout(std::span<const double> input, double rate, Mode mode,
                             Rng& rng) {
    if (rate < 0.0 || rate >= 1.0)
        throw std::invalid_argument("dropout: rate must be in [0, 1)");
    DropoutResult r;
    r.output.resize(input.size());
    r.mask.resize(input.size());
    if (mode == Mode::eval || rate == 0.0) {
        for (std::size_t i = 0; i < input.size(); ++i) {
            r.mask[i] = 1.0;
            r.output[i] = input[i];
        }
        return r;
    }
    const double scale = 1.0 / (1.0 - rate);
    for (std::size_t i = 0; i < input.size(); ++i) {
        const double m = rng.bernoulli(rate) ? 0.0 : scale;
        r.mask[i] = m;
        r.output[i] = input[i] * m;
    }
    return r;
}

inline DropoutResult dropout(std::span<const double> input, double rate, Mode mode,
                             std::uint64_t seed) {
    Rng rng(seed);
    return dropout(input, rate, mode, rng);
}

inline std::vector<double> dropout_backward(std::span<const double> mask,
                                            std::span<const double> grad_out) {
    if (mask.size() != grad_out.size()) throw ShapeError("dropout_backward: shape mismatch");
    std::vector<double> g(mask.size());
    for (std::size_t i = 0; i < mask.size(); ++i) g[i] = mask[i] * grad_out[i];
    return g;
}

}  // namespace hancnn::nn

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "hancnn/rng.hpp"
#include "hancnn/tensor.hpp"

namespace hancnn::nn {

// Zero-mean Gaussian with std sqrt(2 / fan_in), drawn from the given stream.
inline Tensor2D he_normal_init(std::size_t rows, std::size_t cols, std::size_t fan_in,
                               Rng& rng) {
    if (fan_in == 0) throw std::invalid_argument("he_normal_init: fan_in must be >= 1");
    Tensor2D t(rows, cols);
    double std_dev = std::sqrt(2.0 / static_cast<double>(fan_in));
    for (double& x : t.data) x = rng.normal() * std_dev;
    return t;
}

inline Tensor2D he_normal_init(std::size_t rows, std::size_t cols, std::size_t fan_in,
                               std::uint64_t seed) {
    Rng rng(seed);
    return he_normal_init(rows, cols, fan_in, rng);
}

}  // namespace hancnn::nn

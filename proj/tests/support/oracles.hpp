#pragma once

// Independent reference implementations used to freeze expected values.
// These deliberately avoid the library's computation paths.

#include <cstddef>
#include <vector>

#include "hancnn/nn/adam.hpp"
#include "hancnn/nn/conv.hpp"
#include "hancnn/tensor.hpp"

namespace oracles {

// Brute-force 1-D convolution: materializes an explicitly zero-padded copy
// of the input and accumulates over it.
inline hancnn::Tensor2D conv1d_naive(const hancnn::Tensor2D& input,
                                     const hancnn::nn::ConvLayer& layer) {
    const std::size_t len = input.cols;
    const std::size_t k = layer.kernel_size;
    const std::size_t half = k / 2;
    hancnn::Tensor2D padded(input.rows, len + k - 1, 0.0);
    for (std::size_t ch = 0; ch < input.rows; ++ch)
        for (std::size_t i = 0; i < len; ++i) padded(ch, i + half) = input(ch, i);

    hancnn::Tensor2D out(layer.out_channels, len);
    for (std::size_t c = 0; c < layer.out_channels; ++c) {
        for (std::size_t i = 0; i < len; ++i) {
            double acc = layer.bias[c];
            for (std::size_t ch = 0; ch < input.rows; ++ch)
                for (std::size_t j = 0; j < k; ++j)
                    acc += layer.weights(c, ch * k + j) * padded(ch, i + j);
            out(c, i) = acc;
        }
    }
    return out;
}

// Linear-scan max with first-index tie break.
inline void max_scan(const hancnn::Tensor2D& input, std::vector<double>& values,
                     std::vector<std::size_t>& argmax) {
    values.assign(input.rows, 0.0);
    argmax.assign(input.rows, 0);
    for (std::size_t c = 0; c < input.rows; ++c) {
        double best = input(c, 0);
        std::size_t best_i = 0;
        for (std::size_t i = 1; i < input.cols; ++i)
            if (input(c, i) > best) {
                best = input(c, i);
                best_i = i;
            }
        values[c] = best;
        argmax[c] = best_i;
    }
}

// Hand-unrolled Adam recurrence on a scalar parameter.
struct AdamScalarTrace {
    std::vector<double> params;   // value after each step
};

inline AdamScalarTrace adam_scalar_unrolled(double theta0, const std::vector<double>& grads,
                                            double lr = 0.001, double beta1 = 0.9,
                                            double beta2 = 0.999, double eps = 1e-8) {
    AdamScalarTrace trace;
    double theta = theta0, m = 0.0, v = 0.0;
    double b1t = 1.0, b2t = 1.0;
    for (double g : grads) {
        m = beta1 * m + (1.0 - beta1) * g;
        v = beta2 * v + (1.0 - beta2) * g * g;
        b1t *= beta1;
        b2t *= beta2;
        const double mhat = m / (1.0 - b1t);
        const double vhat = v / (1.0 - b2t);
        theta -= lr * mhat / (std::sqrt(vhat) + eps);
        trace.params.push_back(theta);
    }
    return trace;
}

}  // namespace oracles

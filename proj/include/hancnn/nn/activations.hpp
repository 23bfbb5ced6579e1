#pragma once

#include <span>
#include <vector>

#include "hancnn/common.hpp"
#include "hancnn/tensor.hpp"

namespace hancnn::nn {

inline Tensor2D relu(const Tensor2D& input) {
    Tensor2D out(input.rows, input.cols);
    for (std::size_t i = 0; i < input.data.size(); ++i)
        out.data[i] = input.data[i] > 0.0 ? input.data[i] : 0.0;
    return out;
}

// Gradient passes where input > 0; the subgradient at exactly 0 is 0.
inline Tensor2D relu_backward(const Tensor2D& input, const Tensor2D& grad_out) {
    if (!input.same_shape(grad_out)) throw ShapeError("relu_backward: shape mismatch");
    Tensor2D g(input.rows, input.cols);
    for (std::size_t i = 0; i < input.data.size(); ++i)
        g.data[i] = input.data[i] > 0.0 ? grad_out.data[i] : 0.0;
    return g;
}

inline std::vector<double> relu(std::span<const double> input) {
    std::vector<double> out(input.size());
    for (std::size_t i = 0; i < input.size(); ++i)
        out[i] = input[i] > 0.0 ? input[i] : 0.0;
    return out;
}

inline std::vector<double> relu_backward(std::span<const double> input,
                                         std::span<const double> grad_out) {
    if (input.size() != grad_out.size()) throw ShapeError("relu_backward: shape mismatch");
    std::vector<double> g(input.size());
    for (std::size_t i = 0; i < input.size(); ++i)
        g[i] = input[i] > 0.0 ? grad_out[i] : 0.0;
    return g;
}

}  // namespace hancnn::nn

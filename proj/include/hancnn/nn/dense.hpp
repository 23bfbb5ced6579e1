#pragma once

#include <span>
#include <string>
#include <vector>

#include "hancnn/common.hpp"
#include "hancnn/tensor.hpp"

namespace hancnn::nn {

// Affine layer, weights in_dim x out_dim: out = x^T W + b.
struct DenseLayer {
    std::size_t in_dim;
    std::size_t out_dim;
    Tensor2D weights;           // in x out
    std::vector<double> bias;   // out
    double l2_coeff = 0.0;

    DenseLayer(std::size_t in, std::size_t out, double l2 = 0.0)
        : in_dim(in), out_dim(out), weights(in, out), bias(out, 0.0), l2_coeff(l2) {
        if (in == 0 || out == 0)
            throw std::invalid_argument("DenseLayer: dimensions must be >= 1");
    }
};

inline std::vector<double> dense_forward(std::span<const double> input,
                                         const DenseLayer& layer) {
    if (input.size() != layer.in_dim)
        throw ShapeError("dense_forward: input length " + std::to_string(input.size()) +
                         " != in_dim " + std::to_string(layer.in_dim));
    std::vector<double> out(layer.bias);
    for (std::size_t i = 0; i < layer.in_dim; ++i) {
        const double xi = input[i];
        const double* w = layer.weights.row(i);
        for (std::size_t o = 0; o < layer.out_dim; ++o) out[o] += xi * w[o];
    }
    return out;
}

struct DenseGrads {
    std::vector<double> input;
    Tensor2D weights;           // includes the L2 term
    std::vector<double> bias;
};

inline DenseGrads dense_backward(std::span<const double> input, const DenseLayer& layer,
                                 std::span<const double> grad_out) {
    if (input.size() != layer.in_dim || grad_out.size() != layer.out_dim)
        throw ShapeError("dense_backward: shape mismatch");
    DenseGrads g;
    g.input.assign(layer.in_dim, 0.0);
    g.weights = Tensor2D(layer.in_dim, layer.out_dim);
    g.bias.assign(grad_out.begin(), grad_out.end());
    for (std::size_t i = 0; i < layer.in_dim; ++i) {
        const double xi = input[i];
        const double* w = layer.weights.row(i);
        double* gw = g.weights.row(i);
        double acc = 0.0;
        for (std::size_t o = 0; o < layer.out_dim; ++o) {
            gw[o] = xi * grad_out[o];
            acc += w[o] * grad_out[o];
        }
        g.input[i] = acc;
    }
    if (layer.l2_coeff != 0.0) {
        const double two_l2 = 2.0 * layer.l2_coeff;
        for (std::size_t i = 0; i < g.weights.data.size(); ++i)
            g.weights.data[i] += two_l2 * layer.weights.data[i];
    }
    return g;
}

}  // namespace hancnn::nn

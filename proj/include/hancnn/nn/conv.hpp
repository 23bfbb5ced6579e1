#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "hancnn/common.hpp"
#include "hancnn/tensor.hpp"

namespace hancnn::nn {

// 1-D convolution (cross-correlation, no kernel flip) with same-padding.
// Weights are laid out out_channels x (in_channels * kernel_size):
// weights(c, ch*K + j) multiplies input(ch, i + j - K/2).
struct ConvLayer {
    std::size_t in_channels;
    std::size_t out_channels;
    std::size_t kernel_size;
    Tensor2D weights;           // out x (in * K)
    std::vector<double> bias;   // out
    double l2_coeff = 0.0;

    ConvLayer(std::size_t in, std::size_t out, std::size_t k = 3, double l2 = 0.0)
        : in_channels(in), out_channels(out), kernel_size(k),
          weights(out, in * k), bias(out, 0.0), l2_coeff(l2) {
        if (k % 2 == 0)
            throw std::invalid_argument("ConvLayer: kernel_size must be odd, got " +
                                        std::to_string(k));
        if (in == 0 || out == 0)
            throw std::invalid_argument("ConvLayer: channel counts must be >= 1");
    }
};

// out(c, i) = bias[c] + sum_ch sum_j weights(c, ch*K+j) * input(ch, i + j - K/2),
// positions outside [0, L) contribute zero. Output length equals input length.
inline Tensor2D conv1d_forward(const Tensor2D& input, const ConvLayer& layer) {
    if (input.rows != layer.in_channels)
        throw ShapeError("conv1d_forward: input has " + std::to_string(input.rows) +
                         " channels, layer expects " + std::to_string(layer.in_channels));
    const std::size_t len = input.cols;
    if (len == 0) throw std::invalid_argument("conv1d_forward: empty input");
    const std::size_t k = layer.kernel_size;
    const std::size_t half = k / 2;
    Tensor2D out(layer.out_channels, len);
    for (std::size_t c = 0; c < layer.out_channels; ++c) {
        const double* w = layer.weights.row(c);
        for (std::size_t i = 0; i < len; ++i) {
            double acc = layer.bias[c];
            std::size_t jlo = half > i ? half - i : 0;
            std::size_t jhi = std::min(k, len + half - i);
            for (std::size_t ch = 0; ch < layer.in_channels; ++ch) {
                const double* in = input.row(ch);
                const double* wch = w + ch * k;
                for (std::size_t j = jlo; j < jhi; ++j)
                    acc += wch[j] * in[i + j - half];
            }
            out(c, i) = acc;
        }
    }
    return out;
}

struct ConvGrads {
    Tensor2D input;             // in x L
    Tensor2D weights;           // out x (in * K), includes the L2 term
    std::vector<double> bias;   // out
};

// Gradients of sum(grad_out .* output) w.r.t. input, weights, and bias.
// 2 * l2_coeff * weights is folded into the weight gradient.
inline ConvGrads conv1d_backward(const Tensor2D& input, const ConvLayer& layer,
                                 const Tensor2D& grad_out) {
    if (input.rows != layer.in_channels)
        throw ShapeError("conv1d_backward: input channel mismatch");
    if (grad_out.rows != layer.out_channels || grad_out.cols != input.cols)
        throw ShapeError("conv1d_backward: grad_out shape mismatch");
    const std::size_t len = input.cols;
    const std::size_t k = layer.kernel_size;
    const std::size_t half = k / 2;

    ConvGrads g;
    g.input = Tensor2D(layer.in_channels, len);
    g.weights = Tensor2D(layer.out_channels, layer.in_channels * k);
    g.bias.assign(layer.out_channels, 0.0);

    for (std::size_t c = 0; c < layer.out_channels; ++c) {
        const double* go = grad_out.row(c);
        const double* w = layer.weights.row(c);
        double* gw = g.weights.row(c);
        double bsum = 0.0;
        for (std::size_t i = 0; i < len; ++i) bsum += go[i];
        g.bias[c] = bsum;
        for (std::size_t i = 0; i < len; ++i) {
            const double gi = go[i];
            std::size_t jlo = half > i ? half - i : 0;
            std::size_t jhi = std::min(k, len + half - i);
            for (std::size_t ch = 0; ch < layer.in_channels; ++ch) {
                const double* in = input.row(ch);
                double* gin = g.input.row(ch);
                const double* wch = w + ch * k;
                double* gwch = gw + ch * k;
                for (std::size_t j = jlo; j < jhi; ++j) {
                    const std::size_t p = i + j - half;
                    gwch[j] += gi * in[p];
                    gin[p] += gi * wch[j];
                }
            }
        }
    }
    if (layer.l2_coeff != 0.0) {
        const double two_l2 = 2.0 * layer.l2_coeff;
        for (std::size_t i = 0; i < g.weights.data.size(); ++i)
            g.weights.data[i] += two_l2 * layer.weights.data[i];
    }
    return g;
}

}  // namespace hancnn::nn

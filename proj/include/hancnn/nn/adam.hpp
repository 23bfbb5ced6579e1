#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "hancnn/common.hpp"

namespace hancnn::nn {

// Moment state for one parameter array. One state per array, single writer.
struct AdamState {
    std::size_t step = 0;
    std::vector<double> m;
    std::vector<double> v;
    double lr = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;

    AdamState() = default;
    explicit AdamState(std::size_t n, double lr_ = 0.001) : m(n, 0.0), v(n, 0.0), lr(lr_) {}
};

// t <- t+1; m <- b1 m + (1-b1) g; v <- b2 v + (1-b2) g^2;
// theta <- theta - lr * mhat / (sqrt(vhat) + eps) with bias-corrected moments.
inline void adam_step(std::span<double> params, std::span<const double> grads,
                      AdamState& state) {
    if (params.size() != grads.size() || params.size() != state.m.size() ||
        params.size() != state.v.size())
        throw ShapeError("adam_step: parameter/gradient/state size mismatch");
    state.step += 1;
    const double b1 = state.beta1, b2 = state.beta2;
    const double bc1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        state.m[i] = b1 * state.m[i] + (1.0 - b1) * g;
        state.v[i] = b2 * state.v[i] + (1.0 - b2) * g * g;
        const double mhat = state.m[i] / bc1;
        const double vhat = state.v[i] / bc2;
        params[i] -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
    }
}

}  // namespace hancnn::nn

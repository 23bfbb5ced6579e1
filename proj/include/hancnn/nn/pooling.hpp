#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "hancnn/common.hpp"
#include "hancnn/tensor.hpp"

namespace hancnn::nn {

struct MaxPoolResult {
    std::vector<double> values;   // one per feature map
    std::vector<std::size_t> argmax;
};

// Max over the full temporal axis, one value per feature map.
// Ties break to the smallest index so the backward routing is deterministic.
inline MaxPoolResult global_max_pool(const Tensor2D& input) {
    if (input.cols == 0) throw std::invalid_argument("global_max_pool: empty length axis");
    MaxPoolResult r;
    r.values.resize(input.rows);
    r.argmax.resize(input.rows);
    for (std::size_t c = 0; c < input.rows; ++c) {
        const double* row = input.row(c);
        double best = row[0];
        std::size_t best_i = 0;
        for (std::size_t i = 1; i < input.cols; ++i) {
            if (row[i] > best) {
                best = row[i];
                best_i = i;
            }
        }
        r.values[c] = best;
        r.argmax[c] = best_i;
    }
    return r;
}

// Routes each feature map's gradient to its argmax position.
inline Tensor2D global_max_pool_backward(const MaxPoolResult& pooled, std::size_t rows,
                                         std::size_t cols,
                                         std::span<const double> grad_values) {
    if (pooled.argmax.size() != rows || grad_values.size() != rows)
        throw ShapeError("global_max_pool_backward: shape mismatch");
    Tensor2D g(rows, cols);
    for (std::size_t c = 0; c < rows; ++c) g(c, pooled.argmax[c]) = grad_values[c];
    return g;
}

}  // namespace hancnn::nn

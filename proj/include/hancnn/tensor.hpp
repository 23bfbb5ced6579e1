#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "hancnn/common.hpp"

namespace hancnn {

// Dense row-major 2-D array of doubles. Rows/columns carry the layer
// semantics (channels x length, vocab x embedding dim, in x out, ...).
struct Tensor2D {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Tensor2D() = default;
    Tensor2D(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    double* row(std::size_t r) { return data.data() + r * cols; }
    const double* row(std::size_t r) const { return data.data() + r * cols; }

    std::size_t size() const { return data.size(); }

    bool same_shape(const Tensor2D& other) const {
        return rows == other.rows && cols == other.cols;
    }

    bool all_finite() const {
        for (double x : data)
            if (!std::isfinite(x)) return false;
        return true;
    }

    void fill(double v) { data.assign(data.size(), v); }

    Tensor2D& operator+=(const Tensor2D& other) {
        if (!same_shape(other)) throw ShapeError("Tensor2D += shape mismatch");
        for (std::size_t i = 0; i < data.size(); ++i) data[i] += other.data[i];
        return *this;
    }

    Tensor2D& operator*=(double s) {
        for (double& x : data) x *= s;
        return *this;
    }
};

}  // namespace hancnn

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

#include "hancnn/nn/init.hpp"
#include "hancnn/rng.hpp"
#include "hancnn/tensor.hpp"

namespace hancnn::encoding {

// Trainable lookup table, (S+1) x E. Row 0 belongs to the padding index:
// it stays all-zero and receives no gradient.
struct EmbeddingTable {
    std::size_t dim;        // E
    Tensor2D weights;       // (S+1) x E

    EmbeddingTable() : dim(0) {}
    EmbeddingTable(std::size_t vocab_size, std::size_t embed_dim)
        : dim(embed_dim), weights(vocab_size + 1, embed_dim) {
        if (embed_dim == 0)
            throw std::invalid_argument("EmbeddingTable: embed_dim must be >= 1");
    }

    std::size_t vocab_size() const { return weights.rows - 1; }   // S

    void zero_pad_row() {
        for (std::size_t e = 0; e < dim; ++e) weights(0, e) = 0.0;
    }
};

// He-normal rows (fan_in = E) with the pad row zeroed.
inline EmbeddingTable make_embedding(std::size_t vocab_size, std::size_t embed_dim, Rng& rng) {
    EmbeddingTable t(vocab_size, embed_dim);
    t.weights = nn::he_normal_init(vocab_size + 1, embed_dim, embed_dim, rng);
    t.zero_pad_row();
    return t;
}

// Column i of the output is table row indices[i]; output is E x L.
inline Tensor2D embed_forward(std::span<const std::uint32_t> indices,
                              const EmbeddingTable& table) {
    Tensor2D out(table.dim, indices.size());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (indices[i] > table.vocab_size())
            throw std::invalid_argument("embed_forward: index " +
                                        std::to_string(indices[i]) + " exceeds vocab size " +
                                        std::to_string(table.vocab_size()));
        const double* row = table.weights.row(indices[i]);
        for (std::size_t e = 0; e < table.dim; ++e) out(e, i) = row[e];
    }
    return out;
}

// Accumulates grad columns into their rows; the pad row's gradient is discarded.
inline Tensor2D embed_backward(std::span<const std::uint32_t> indices,
                               const Tensor2D& grad_out, std::size_t vocab_size) {
    if (grad_out.cols != indices.size())
        throw ShapeError("embed_backward: grad_out column count != index count");
    Tensor2D g(vocab_size + 1, grad_out.rows);
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (indices[i] == 0) continue;
        double* row = g.row(indices[i]);
        for (std::size_t e = 0; e < grad_out.rows; ++e) row[e] += grad_out(e, i);
    }
    return g;
}

}  // namespace hancnn::encoding

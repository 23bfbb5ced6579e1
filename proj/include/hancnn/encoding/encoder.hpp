#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "hancnn/encoding/alphabet.hpp"
#include "hancnn/utf8.hpp"

namespace hancnn::encoding {

struct EncoderConfig {
    std::size_t max_length;   // L: 1000 for pinyin, 250 for Chinese characters
    bool reverse = true;

    explicit EncoderConfig(std::size_t L, bool rev = true) : max_length(L), reverse(rev) {
        if (L == 0) throw std::invalid_argument("EncoderConfig: max_length must be >= 1");
    }
};

// Fixed-length index sequence plus class label.
struct EncodedSample {
    std::vector<std::uint32_t> indices;
    int label = -1;
};

// Quantise text: keep the first L characters, map each to its index
// (OOV -> blank), reverse, and right-pad with 0 up to L.
inline std::vector<std::uint32_t> encode(std::u32string_view text, const Alphabet& alphabet,
                                         const EncoderConfig& config) {
    const std::size_t L = config.max_length;
    const std::size_t n = std::min(text.size(), L);
    std::vector<std::uint32_t> out(L, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t pos = config.reverse ? n - 1 - i : i;
        out[pos] = static_cast<std::uint32_t>(alphabet.encode_char(text[i]));
    }
    return out;
}

inline std::vector<std::uint32_t> encode(std::string_view utf8_text, const Alphabet& alphabet,
                                         const EncoderConfig& config) {
    return encode(decode_utf8(utf8_text), alphabet, config);
}

// Inverse of encode on the clean subset (length <= L, all in-alphabet):
// strips trailing pads, undoes the reversal, and maps indices back.
inline std::u32string decode(std::span<const std::uint32_t> indices, const Alphabet& alphabet,
                             bool reversed = true) {
    std::size_t n = indices.size();
    while (n > 0 && indices[n - 1] == Alphabet::pad_index) --n;
    std::u32string out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t pos = reversed ? n - 1 - i : i;
        out.push_back(alphabet.symbol(indices[pos]));
    }
    return out;
}

}  // namespace hancnn::encoding

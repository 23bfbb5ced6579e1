#pragma once

#include <algorithm>
#include <istream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "hancnn/common.hpp"
#include "hancnn/io.hpp"
#include "hancnn/utf8.hpp"

namespace hancnn::encoding {

// Ordered symbol set. Symbols get indices 1..S; index 0 is reserved for
// padding and names no symbol. The blank symbol stands in for any
// out-of-alphabet character.
class Alphabet {
public:
    Alphabet(std::vector<char32_t> symbols, std::size_t blank_index_1based)
        : symbols_(std::move(symbols)), blank_index_(blank_index_1based) {
        if (blank_index_ == 0 || blank_index_ > symbols_.size())
            throw std::invalid_argument("Alphabet: blank index out of range");
        for (std::size_t i = 0; i < symbols_.size(); ++i) {
            auto [it, inserted] = lookup_.emplace(symbols_[i], i + 1);
            if (!inserted)
                throw std::invalid_argument("Alphabet: duplicate symbol " +
                                            encode_utf8(symbols_[i]));
        }
    }

    std::size_t size() const { return symbols_.size(); }   // S, excluding pad
    std::size_t blank_index() const { return blank_index_; }
    char32_t blank_symbol() const { return symbols_[blank_index_ - 1]; }
    static constexpr std::size_t pad_index = 0;

    bool contains(char32_t c) const { return lookup_.count(c) != 0; }

    std::optional<std::size_t> index_of(char32_t c) const {
        auto it = lookup_.find(c);
        if (it == lookup_.end()) return std::nullopt;
        return it->second;
    }

    // Index for encoding: the symbol's index, or the blank index when OOV.
    std::size_t encode_char(char32_t c) const {
        auto it = lookup_.find(c);
        return it == lookup_.end() ? blank_index_ : it->second;
    }

    // 1-based; index 0 (padding) names no symbol.
    char32_t symbol(std::size_t index) const {
        if (index == 0 || index > symbols_.size())
            throw std::invalid_argument("Alphabet::symbol: index out of range");
        return symbols_[index - 1];
    }

    const std::vector<char32_t>& symbols() const { return symbols_; }

private:
    std::vector<char32_t> symbols_;
    std::size_t blank_index_;
    std::unordered_map<char32_t, std::size_t> lookup_;
};

// Canonical 42-symbol pinyin alphabet: a-z, 0-9, the four punctuation marks,
// the space, then the blank. No upper-case letters.
inline Alphabet build_pinyin_alphabet() {
    std::vector<char32_t> symbols;
    for (char32_t c = U'a'; c <= U'z'; ++c) symbols.push_back(c);
    for (char32_t c = U'0'; c <= U'9'; ++c) symbols.push_back(c);
    symbols.push_back(U',');
    symbols.push_back(U'.');
    symbols.push_back(U'!');
    symbols.push_back(U'?');
    symbols.push_back(U' ');
    symbols.push_back(kReplacementChar);   // blank
    const std::size_t blank = symbols.size();
    return Alphabet(std::move(symbols), blank);
}

// All distinct characters of the corpus, sorted by code point, with the
// blank appended last. Deterministic and order-independent.
inline Alphabet build_corpus_alphabet(const std::vector<std::string>& texts,
                                      char32_t blank = kReplacementChar) {
    std::set<char32_t> chars;
    for (const std::string& t : texts)
        for (char32_t c : decode_utf8(t)) chars.insert(c);
    chars.erase(blank);
    if (chars.empty())
        throw std::invalid_argument("build_corpus_alphabet: empty corpus");
    std::vector<char32_t> symbols(chars.begin(), chars.end());
    symbols.push_back(blank);
    const std::size_t blank_index = symbols.size();
    return Alphabet(std::move(symbols), blank_index);
}

inline Alphabet build_corpus_alphabet(std::istream& corpus,
                                      char32_t blank = kReplacementChar) {
    std::ostringstream all;
    all << corpus.rdbuf();
    return build_corpus_alphabet(std::vector<std::string>{all.str()}, blank);
}

// File format: UTF-8, one symbol per line, line 1 <-> index 1, LF endings,
// no BOM; the blank symbol's line carries a trailing "\tBLANK".
inline void save_alphabet(const Alphabet& alphabet, const std::string& path) {
    atomic_write_file(path, [&](std::ostream& out) {
        for (std::size_t i = 1; i <= alphabet.size(); ++i) {
            char32_t c = alphabet.symbol(i);
            if (c == U'\n' || c == U'\r' || c == U'\t')
                throw IoError("save_alphabet: symbol not representable in line format");
            out << encode_utf8(c);
            if (i == alphabet.blank_index()) out << "\tBLANK";
            out << '\n';
        }
    });
}

inline Alphabet load_alphabet(std::istream& in) {
    std::vector<char32_t> symbols;
    std::size_t blank = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        bool is_blank = false;
        if (line.size() >= 6 && line.compare(line.size() - 6, 6, "\tBLANK") == 0) {
            is_blank = true;
            line.resize(line.size() - 6);
        }
        std::u32string sym = decode_utf8(line);
        if (sym.size() != 1)
            throw ParseError("alphabet line is not a single symbol", line_no);
        symbols.push_back(sym[0]);
        if (is_blank) {
            if (blank != 0) throw ParseError("second BLANK marker", line_no);
            blank = symbols.size();
        }
    }
    if (symbols.empty()) throw ParseError("empty alphabet file", 1);
    if (blank == 0) throw ParseError("alphabet file has no BLANK marker", line_no);
    return Alphabet(std::move(symbols), blank);
}

inline Alphabet load_alphabet(const std::string& path) {
    auto in = open_input(path);
    return load_alphabet(in);
}

}  // namespace hancnn::encoding

#pragma once

#include <algorithm>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hancnn/common.hpp"
#include "hancnn/encoding/alphabet.hpp"
#include "hancnn/io.hpp"
#include "hancnn/utf8.hpp"

namespace hancnn::pinyin {

struct PinyinEntry {
    std::string syllable;   // lowercase ASCII letters
    int tone = 0;           // 0 = neutral, 1-4 = tone marks
};

class PinyinTable {
public:
    void insert(char32_t c, PinyinEntry entry) { entries_[c] = std::move(entry); }

    std::optional<PinyinEntry> lookup(char32_t c) const {
        auto it = entries_.find(c);
        if (it == entries_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t size() const { return entries_.size(); }

private:
    std::unordered_map<char32_t, PinyinEntry> entries_;
};

class Lexicon {
public:
    void insert(std::u32string word) {
        if (word.empty()) return;
        max_word_len_ = std::max(max_word_len_, word.size());
        words_.insert(std::move(word));
    }

    bool contains(const std::u32string& word) const { return words_.count(word) != 0; }
    std::size_t max_word_len() const { return max_word_len_; }
    std::size_t size() const { return words_.size(); }

private:
    std::unordered_set<std::u32string> words_;
    std::size_t max_word_len_ = 0;
};

// Greedy forward maximum matching: at each position take the longest lexicon
// word starting there, else emit the single character. The concatenated
// output always equals the input.
inline std::vector<std::u32string> segment(std::u32string_view text, const Lexicon& lexicon) {
    std::vector<std::u32string> words;
    std::size_t i = 0;
    while (i < text.size()) {
        std::size_t best = 1;
        const std::size_t cap = std::min(lexicon.max_word_len(), text.size() - i);
        for (std::size_t len = cap; len >= 2; --len) {
            if (lexicon.contains(std::u32string(text.substr(i, len)))) {
                best = len;
                break;
            }
        }
        words.emplace_back(text.substr(i, best));
        i += best;
    }
    return words;
}

enum class PinyinFormat { A, B };   // A fuses the tone digit, B separates it

inline PinyinFormat parse_format(std::string_view s) {
    if (s == "A" || s == "a") return PinyinFormat::A;
    if (s == "B" || s == "b") return PinyinFormat::B;
    throw std::invalid_argument("unknown pinyin format: " + std::string(s) +
                                " (expected A or B)");
}

// Renders text as pinyin. Characters covered by the table become
// syllable+tone ("ma3" in format A, "ma 3" in format B); characters absent
// from the table pass through if they belong to the pinyin alphabet and
// otherwise become the blank symbol. Word gaps from the segmentation are
// single spaces.
inline std::string transliterate(std::u32string_view text, const PinyinTable& table,
                                 const Lexicon& lexicon, PinyinFormat format) {
    static const encoding::Alphabet pinyin_alphabet = encoding::build_pinyin_alphabet();
    std::string out;
    bool first_word = true;
    for (const std::u32string& word : segment(text, lexicon)) {
        if (!first_word) out.push_back(' ');
        first_word = false;
        for (char32_t c : word) {
            if (auto entry = table.lookup(c)) {
                out += entry->syllable;
                if (format == PinyinFormat::B) out.push_back(' ');
                out.push_back(static_cast<char>('0' + entry->tone));
            } else if (pinyin_alphabet.contains(c)) {
                append_utf8(out, c);
            } else {
                append_utf8(out, pinyin_alphabet.blank_symbol());
            }
        }
    }
    return out;
}

inline std::string transliterate(std::string_view utf8_text, const PinyinTable& table,
                                 const Lexicon& lexicon, PinyinFormat format) {
    return transliterate(decode_utf8(utf8_text), table, lexicon, format);
}

// Tab-separated table file: char \t syllable \t tone, LF endings, '#'
// comment lines. Duplicate characters: last entry wins, with a warning.
inline PinyinTable load_pinyin_table(std::istream& in,
                                     std::vector<std::string>* warnings = nullptr) {
    PinyinTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const std::size_t t1 = line.find('\t');
        const std::size_t t2 = t1 == std::string::npos ? std::string::npos
                                                       : line.find('\t', t1 + 1);
        if (t1 == std::string::npos || t2 == std::string::npos)
            throw ParseError("pinyin table line needs 3 tab-separated columns", line_no);
        std::u32string ch = decode_utf8(line.substr(0, t1));
        if (ch.size() != 1)
            throw ParseError("pinyin table: first column must be one character", line_no);
        PinyinEntry entry;
        entry.syllable = line.substr(t1 + 1, t2 - t1 - 1);
        if (entry.syllable.empty() ||
            !std::all_of(entry.syllable.begin(), entry.syllable.end(),
                         [](char c) { return c >= 'a' && c <= 'z'; }))
            throw ParseError("pinyin table: syllable must be lowercase ASCII letters",
                             line_no);
        const std::string tone_str = line.substr(t2 + 1);
        if (tone_str.size() != 1 || tone_str[0] < '0' || tone_str[0] > '4')
            throw ParseError("pinyin table: tone must be a digit in [0, 4]", line_no);
        entry.tone = tone_str[0] - '0';
        if (table.lookup(ch[0]) && warnings)
            warnings->push_back("duplicate entry for " + encode_utf8(ch[0]) + " at line " +
                                std::to_string(line_no) + "; last wins");
        table.insert(ch[0], std::move(entry));
    }
    return table;
}

inline PinyinTable load_pinyin_table(const std::string& path,
                                     std::vector<std::string>* warnings = nullptr) {
    auto in = open_input(path);
    return load_pinyin_table(in, warnings);
}

// Lexicon file: one word per line.
inline Lexicon load_lexicon(std::istream& in) {
    Lexicon lexicon;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        lexicon.insert(decode_utf8(line));
    }
    return lexicon;
}

inline Lexicon load_lexicon(const std::string& path) {
    auto in = open_input(path);
    return load_lexicon(in);
}

}  // namespace hancnn::pinyin

#pragma once

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hancnn/common.hpp"
#include "hancnn/corpus/record.hpp"
#include "hancnn/io.hpp"
#include "hancnn/pinyin/pinyin.hpp"
#include "hancnn/rng.hpp"
#include "hancnn/utf8.hpp"

namespace hancnn::corpus {

// Maps a URL's first hostname label (the subdomain token) to a class index.
class DomainMap {
public:
    // Assigns class indices by first appearance of each class name.
    void add(const std::string& domain_token, const std::string& class_name) {
        auto it = class_index_.find(class_name);
        int idx;
        if (it == class_index_.end()) {
            idx = static_cast<int>(class_names_.size());
            class_index_.emplace(class_name, idx);
            class_names_.push_back(class_name);
        } else {
            idx = it->second;
        }
        token_to_class_[domain_token] = idx;
    }

    std::optional<int> lookup(const std::string& token) const {
        auto it = token_to_class_.find(token);
        if (it == token_to_class_.end()) return std::nullopt;
        return it->second;
    }

    const std::vector<std::string>& class_names() const { return class_names_; }
    std::size_t num_classes() const { return class_names_.size(); }
    bool empty() const { return token_to_class_.empty(); }

private:
    std::unordered_map<std::string, int> token_to_class_;
    std::unordered_map<std::string, int> class_index_;
    std::vector<std::string> class_names_;
};

// Domain map file: lines of domain_token \t class_name; '#' comments.
inline DomainMap load_domain_map(std::istream& in) {
    DomainMap map;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 == line.size())
            throw ParseError("domain map line needs token<TAB>class", line_no);
        map.add(line.substr(0, tab), line.substr(tab + 1));
    }
    return map;
}

inline DomainMap load_domain_map(const std::string& path) {
    auto in = open_input(path);
    return load_domain_map(in);
}

// First hostname label of a URL, lowercased: "http://sports.x.com/p" -> "sports".
inline std::optional<std::string> url_domain_token(const std::string& url) {
    std::size_t host_begin = 0;
    const std::size_t scheme = url.find("://");
    if (scheme == std::string::npos) return std::nullopt;
    host_begin = scheme + 3;
    std::size_t host_end = url.find_first_of("/:?#", host_begin);
    if (host_end == std::string::npos) host_end = url.size();
    if (host_end == host_begin) return std::nullopt;
    std::string host = url.substr(host_begin, host_end - host_begin);
    std::size_t dot = host.find('.');
    std::string token = dot == std::string::npos ? host : host.substr(0, dot);
    if (token.empty()) return std::nullopt;
    std::transform(token.begin(), token.end(), token.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return token;
}

// Labels the record from its URL's subdomain token; unmapped or unparsable
// URLs drop the document.
inline std::optional<CorpusRecord> label_by_domain(CorpusRecord record,
                                                   const DomainMap& map) {
    if (map.empty()) throw std::invalid_argument("label_by_domain: empty domain map");
    auto token = url_domain_token(record.url);
    if (!token) return std::nullopt;
    auto cls = map.lookup(*token);
    if (!cls) return std::nullopt;
    record.label = *cls;
    return record;
}

// Keep iff the text has at least min_len characters (code points).
inline bool filter_short(const CorpusRecord& record, std::size_t min_len = 20) {
    if (min_len == 0) return true;
    return decode_utf8(record.text).size() >= min_len;
}

struct SplitResult {
    std::vector<CorpusRecord> train;
    std::vector<CorpusRecord> test;
};

// Per-class stratified shuffle split. Each class contributes
// clamp(round(n * test_fraction), 1, n-1) test records, so proportions hold
// within one record per class and both splits are nonempty per class.
// Record order within each split follows the input order.
inline SplitResult split(const std::vector<CorpusRecord>& records, double test_fraction,
                         std::uint64_t seed) {
    if (records.empty()) throw std::invalid_argument("split: empty dataset");
    if (test_fraction <= 0.0 || test_fraction >= 1.0)
        throw std::invalid_argument("split: test_fraction must be in (0, 1)");
    std::unordered_map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < records.size(); ++i)
        by_class[records[i].label].push_back(i);

    std::vector<int> classes;
    for (const auto& [label, _] : by_class) classes.push_back(label);
    std::sort(classes.begin(), classes.end());

    std::vector<bool> is_test(records.size(), false);
    Rng rng(seed);
    for (int label : classes) {
        std::vector<std::size_t>& idx = by_class[label];
        if (idx.size() < 2)
            throw std::runtime_error("split: class " + std::to_string(label) +
                                     " has fewer than 2 records");
        const auto n = static_cast<double>(idx.size());
        auto test_n = static_cast<std::size_t>(std::llround(n * test_fraction));
        test_n = std::clamp<std::size_t>(test_n, 1, idx.size() - 1);
        rng.shuffle(idx);
        for (std::size_t k = 0; k < test_n; ++k) is_test[idx[k]] = true;
    }

    SplitResult result;
    for (std::size_t i = 0; i < records.size(); ++i)
        (is_test[i] ? result.test : result.train).push_back(records[i]);
    return result;
}

// Replaces each Chinese-character record with its format-A and format-B
// pinyin transliterations (same label, adjacent). Output size is exactly 2x.
inline std::vector<CorpusRecord> augment_pinyin(const std::vector<CorpusRecord>& records,
                                                const pinyin::PinyinTable& table,
                                                const pinyin::Lexicon& lexicon) {
    std::vector<CorpusRecord> out;
    out.reserve(records.size() * 2);
    for (const CorpusRecord& rec : records) {
        std::u32string text = decode_utf8(rec.text);
        CorpusRecord a = rec;
        a.text = pinyin::transliterate(text, table, lexicon, pinyin::PinyinFormat::A);
        CorpusRecord b = rec;
        b.text = pinyin::transliterate(text, table, lexicon, pinyin::PinyinFormat::B);
        out.push_back(std::move(a));
        out.push_back(std::move(b));
    }
    return out;
}

}  // namespace hancnn::corpus

#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "hancnn/corpus/record.hpp"

namespace hancnn::corpus {

namespace detail {

// Content of <tag>...</tag> if the trimmed line carries exactly that element.
inline std::optional<std::string> tag_content(const std::string& line, const char* tag) {
    const std::string open = std::string("<") + tag + ">";
    const std::string close = std::string("</") + tag + ">";
    std::size_t b = line.find(open);
    if (b == std::string::npos) return std::nullopt;
    std::size_t e = line.rfind(close);
    if (e == std::string::npos || e < b + open.size()) return std::nullopt;
    return line.substr(b + open.size(), e - b - open.size());
}

}  // namespace detail

struct DumpParseResult {
    std::vector<CorpusRecord> records;
    std::size_t skipped = 0;   // doc blocks missing url or content
};

// Parses SGML-like news dumps: <doc> blocks holding a <url> line and a
// <content> line. Unknown tags are ignored; blocks missing either field are
// counted and skipped, never fatal. Record order equals input order.
inline DumpParseResult parse_dump(std::istream& in) {
    DumpParseResult result;
    std::string line;
    bool in_doc = false;
    std::optional<std::string> url, content;
    auto flush = [&]() {
        if (url && content) {
            CorpusRecord rec;
            rec.url = std::move(*url);
            rec.text = std::move(*content);
            result.records.push_back(std::move(rec));
        } else {
            ++result.skipped;
        }
        url.reset();
        content.reset();
    };
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find("<doc>") != std::string::npos) {
            if (in_doc) flush();   // unterminated previous block
            in_doc = true;
            continue;
        }
        if (line.find("</doc>") != std::string::npos) {
            if (in_doc) flush();
            in_doc = false;
            continue;
        }
        if (!in_doc) continue;
        if (auto u = detail::tag_content(line, "url")) {
            url = std::move(u);
        } else if (auto c = detail::tag_content(line, "content")) {
            content = std::move(c);
        }
    }
    if (in_doc) flush();
    return result;
}

}  // namespace hancnn::corpus

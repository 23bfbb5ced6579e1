#pragma once

#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "hancnn/common.hpp"
#include "hancnn/corpus/record.hpp"
#include "hancnn/io.hpp"

namespace hancnn::corpus {

// Dataset CSV: UTF-8, LF, one record per row as label,"text". Labels are
// 1-based on disk; text is always quoted, with embedded quotes doubled.
inline void write_csv(const std::vector<CorpusRecord>& records, std::ostream& out) {
    for (const CorpusRecord& rec : records) {
        out << (rec.label + 1) << ",\"";
        for (char c : rec.text) {
            if (c == '"') out << "\"\"";
            else out << c;
        }
        out << "\"\n";
    }
}

inline void write_csv(const std::vector<CorpusRecord>& records, const std::string& path) {
    atomic_write_file(path, [&](std::ostream& out) { write_csv(records, out); });
}

inline std::vector<CorpusRecord> read_csv(std::istream& in) {
    std::vector<CorpusRecord> records;
    std::size_t row = 0;
    while (true) {
        int c = in.peek();
        if (c == std::char_traits<char>::eof()) break;
        ++row;
        // label
        std::string label_str;
        while ((c = in.get()) != std::char_traits<char>::eof() && c != ',') {
            if (c == '\n') throw ParseError("row has no comma", row);
            label_str.push_back(static_cast<char>(c));
        }
        if (c != ',') throw ParseError("row has no comma", row);
        if (label_str.empty()) throw ParseError("empty label", row);
        long label = 0;
        for (char d : label_str) {
            if (d < '0' || d > '9') throw ParseError("label is not a positive integer", row);
            label = label * 10 + (d - '0');
        }
        if (label < 1) throw ParseError("label must be >= 1 on disk", row);
        // quoted text; quotes are doubled inside, newlines may be embedded
        if (in.get() != '"') throw ParseError("text field must be quoted", row);
        std::string text;
        while (true) {
            c = in.get();
            if (c == std::char_traits<char>::eof())
                throw ParseError("unterminated quoted field", row);
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get();
                    text.push_back('"');
                    continue;
                }
                break;
            }
            text.push_back(static_cast<char>(c));
        }
        c = in.get();
        if (c != '\n' && c != std::char_traits<char>::eof())
            throw ParseError("trailing bytes after closing quote", row);
        CorpusRecord rec;
        rec.label = static_cast<int>(label - 1);
        rec.text = std::move(text);
        records.push_back(std::move(rec));
    }
    return records;
}

inline std::vector<CorpusRecord> read_csv(const std::string& path) {
    auto in = open_input(path, /*binary=*/true);
    return read_csv(in);
}

}  // namespace hancnn::corpus

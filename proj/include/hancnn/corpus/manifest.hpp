#pragma once

#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "hancnn/common.hpp"
#include "hancnn/corpus/record.hpp"
#include "hancnn/io.hpp"

namespace hancnn::corpus {

// Sidecar description of an emitted dataset: class names, per-split counts,
// and the encoding tag (chinese | pinyinA | pinyinB | augmented).
struct DatasetManifest {
    std::string encoding;
    std::vector<std::string> classes;
    std::vector<std::size_t> train_counts;
    std::vector<std::size_t> test_counts;

    std::size_t train_total() const {
        std::size_t s = 0;
        for (auto c : train_counts) s += c;
        return s;
    }
    std::size_t test_total() const {
        std::size_t s = 0;
        for (auto c : test_counts) s += c;
        return s;
    }
};

inline DatasetManifest make_manifest(const std::vector<std::string>& classes,
                                     const std::vector<CorpusRecord>& train,
                                     const std::vector<CorpusRecord>& test,
                                     const std::string& encoding) {
    DatasetManifest m;
    m.encoding = encoding;
    m.classes = classes;
    m.train_counts.assign(classes.size(), 0);
    m.test_counts.assign(classes.size(), 0);
    for (const auto& r : train)
        if (r.label >= 0 && static_cast<std::size_t>(r.label) < classes.size())
            ++m.train_counts[r.label];
    for (const auto& r : test)
        if (r.label >= 0 && static_cast<std::size_t>(r.label) < classes.size())
            ++m.test_counts[r.label];
    return m;
}

inline void write_manifest(const DatasetManifest& m, std::ostream& out) {
    out << "encoding\t" << m.encoding << "\n";
    for (std::size_t i = 0; i < m.classes.size(); ++i)
        out << "class\t" << m.classes[i] << "\t" << m.train_counts[i] << "\t"
            << m.test_counts[i] << "\n";
    out << "total\t-\t" << m.train_total() << "\t" << m.test_total() << "\n";
}

inline void write_manifest(const DatasetManifest& m, const std::string& path) {
    atomic_write_file(path, [&](std::ostream& out) { write_manifest(m, out); });
}

inline DatasetManifest read_manifest(std::istream& in) {
    DatasetManifest m;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream row(line);
        std::string kind;
        std::getline(row, kind, '\t');
        if (kind == "encoding") {
            std::getline(row, m.encoding, '\t');
        } else if (kind == "class") {
            std::string name, train_s, test_s;
            if (!std::getline(row, name, '\t') || !std::getline(row, train_s, '\t') ||
                !std::getline(row, test_s, '\t'))
                throw ParseError("manifest class row needs name, train, test", line_no);
            m.classes.push_back(name);
            m.train_counts.push_back(std::stoull(train_s));
            m.test_counts.push_back(std::stoull(test_s));
        } else if (kind == "total" || kind.empty()) {
            continue;
        } else {
            throw ParseError("unknown manifest row kind: " + kind, line_no);
        }
    }
    return m;
}

inline DatasetManifest read_manifest(const std::string& path) {
    auto in = open_input(path);
    return read_manifest(in);
}

}  // namespace hancnn::corpus

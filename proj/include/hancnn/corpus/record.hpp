#pragma once

#include <string>

namespace hancnn::corpus {

// Labeled document. label is 0-based in memory (1-based on disk); -1 means
// not yet labeled. url is kept for labeling and may be empty afterwards.
struct CorpusRecord {
    int label = -1;
    std::string text;
    std::string url;

    bool operator==(const CorpusRecord& other) const {
        return label == other.label && text == other.text;
    }
};

}  // namespace hancnn::corpus

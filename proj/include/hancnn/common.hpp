#pragma once

#include <stdexcept>
#include <string>

namespace hancnn {

// Thrown when tensor/layer dimensions do not line up.
struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Thrown by file-format readers; carries the 1-based line (or row) number.
struct ParseError : std::runtime_error {
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line(line) {}
    std::size_t line;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Mode { train, eval };

}  // namespace hancnn

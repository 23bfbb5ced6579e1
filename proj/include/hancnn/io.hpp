#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>

#include "hancnn/common.hpp"

namespace hancnn {

// Writes through a temp file in the same directory and renames on success,
// so a failed run never leaves a partial output behind.
inline void atomic_write_file(const std::string& path,
                              const std::function<void(std::ostream&)>& writer,
                              bool binary = false) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    try {
        std::ofstream out(tmp, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
        if (!out) throw IoError("cannot open for writing: " + tmp.string());
        writer(out);
        out.flush();
        if (!out) throw IoError("write failed: " + tmp.string());
    } catch (...) {
        std::error_code ec;
        fs::remove(tmp, ec);
        throw;
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("rename failed for: " + target.string());
    }
}

inline std::ifstream open_input(const std::string& path, bool binary = false) {
    std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
    if (!in) throw IoError("cannot open: " + path);
    return in;
}

}  // namespace hancnn

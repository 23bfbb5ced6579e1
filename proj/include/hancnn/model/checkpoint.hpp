#pragma once

#include <cstdint>
#include <cstring>
#include <istream>
#include <string>
#include <vector>

#include "hancnn/io.hpp"
#include "hancnn/model/network.hpp"

namespace hancnn::model {

// Checkpoint layout (little-endian throughout):
//   magic "HCNV" | version u32 | config-block length u32 | config text |
//   per array, in canonical order:
//     name length u32 | name bytes | rows u32 | cols u32 | rows*cols f32
// Arrays store f32; optimizer moments are not persisted.
inline constexpr char kCheckpointMagic[4] = {'H', 'C', 'N', 'V'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

namespace detail {

inline void write_u32(std::ostream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xFF),
                          static_cast<unsigned char>((v >> 8) & 0xFF),
                          static_cast<unsigned char>((v >> 16) & 0xFF),
                          static_cast<unsigned char>((v >> 24) & 0xFF)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

inline std::uint32_t read_u32(std::istream& in) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4))
        throw IoError("checkpoint truncated while reading u32");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) |
           (static_cast<std::uint32_t>(b[3]) << 24);
}

inline void write_f32(std::ostream& out, float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    write_u32(out, bits);
}

inline float read_f32(std::istream& in) {
    std::uint32_t bits = read_u32(in);
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
}

}  // namespace detail

inline void save_checkpoint(ModelParams& params, const ModelConfig& config,
                            const std::string& path) {
    atomic_write_file(
        path,
        [&](std::ostream& out) {
            out.write(kCheckpointMagic, 4);
            detail::write_u32(out, kCheckpointVersion);
            const std::string cfg = serialize_config(config);
            detail::write_u32(out, static_cast<std::uint32_t>(cfg.size()));
            out.write(cfg.data(), static_cast<std::streamsize>(cfg.size()));
            for (const ParamArrayRef& a : param_arrays(params)) {
                detail::write_u32(out, static_cast<std::uint32_t>(a.name.size()));
                out.write(a.name.data(), static_cast<std::streamsize>(a.name.size()));
                detail::write_u32(out, static_cast<std::uint32_t>(a.rows));
                detail::write_u32(out, static_cast<std::uint32_t>(a.cols));
                for (double v : a.data) detail::write_f32(out, static_cast<float>(v));
            }
        },
        /*binary=*/true);
}

struct Checkpoint {
    ModelConfig config;
    ModelParams params;
};

inline Checkpoint load_checkpoint(std::istream& in) {
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kCheckpointMagic, 4) != 0)
        throw IoError("not a checkpoint file (bad magic)");
    const std::uint32_t version = detail::read_u32(in);
    if (version > kCheckpointVersion)
        throw IoError("checkpoint version " + std::to_string(version) +
                      " is newer than supported version " +
                      std::to_string(kCheckpointVersion));
    const std::uint32_t cfg_len = detail::read_u32(in);
    std::string cfg_text(cfg_len, '\0');
    if (!in.read(cfg_text.data(), cfg_len)) throw IoError("checkpoint truncated in config");

    Checkpoint ck;
    ck.config = deserialize_config(cfg_text);
    ck.params = build(ck.config, /*seed=*/0);
    for (const ParamArrayRef& a : param_arrays(ck.params)) {
        const std::uint32_t name_len = detail::read_u32(in);
        std::string name(name_len, '\0');
        if (!in.read(name.data(), name_len)) throw IoError("checkpoint truncated in name");
        if (name != a.name)
            throw IoError("checkpoint array order mismatch: expected " + a.name + ", got " +
                          name);
        const std::uint32_t rows = detail::read_u32(in);
        const std::uint32_t cols = detail::read_u32(in);
        if (rows != a.rows || cols != a.cols)
            throw IoError("checkpoint array " + name + " has unexpected shape");
        for (double& v : a.data) v = static_cast<double>(detail::read_f32(in));
    }
    return ck;
}

inline Checkpoint load_checkpoint(const std::string& path) {
    auto in = open_input(path, /*binary=*/true);
    return load_checkpoint(in);
}

}  // namespace hancnn::model

#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "uag/graph.hpp"

namespace uag {
namespace detail {

inline void write_u32(std::ostream& os, std::uint32_t v) {
    const std::array<char, 4> b{static_cast<char>(v & 0xff),
                                static_cast<char>((v >> 8) & 0xff),
                                static_cast<char>((v >> 16) & 0xff),
                                static_cast<char>((v >> 24) & 0xff)};
    os.write(b.data(), 4);
}

inline void write_u64(std::ostream& os, std::uint64_t v) {
    write_u32(os, static_cast<std::uint32_t>(v & 0xffffffffULL));
    write_u32(os, static_cast<std::uint32_t>(v >> 32));
}

inline std::uint32_t read_u32(std::istream& is) {
    std::array<unsigned char, 4> b{};
    is.read(reinterpret_cast<char*>(b.data()), 4);
    if (!is) throw std::runtime_error("graph dump truncated");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) |
           (static_cast<std::uint32_t>(b[3]) << 24);
}

inline std::uint64_t read_u64(std::istream& is) {
    const std::uint64_t lo = read_u32(is);
    const std::uint64_t hi = read_u32(is);
    return lo | (hi << 32);
}

}  // namespace detail

inline constexpr std::array<char, 4> kGraphDumpMagic{'U', 'A', 'G', '1'};
inline constexpr std::uint32_t kGraphDumpVersion = 1;

// Binary dump: magic, version, n, m, seed, then the recipient array as
// little-endian 32-bit words in slot order.
inline void write_graph(std::ostream& os, const AttachmentGraph& g) {
    os.write(kGraphDumpMagic.data(), kGraphDumpMagic.size());
    detail::write_u32(os, kGraphDumpVersion);
    detail::write_u32(os, g.n);
    detail::write_u32(os, g.m);
    detail::write_u64(os, g.seed);
    for (Vertex r : g.slots) detail::write_u32(os, r);
    if (!os) throw std::runtime_error("graph dump write failed");
}

inline AttachmentGraph read_graph(std::istream& is) {
    std::array<char, 4> magic{};
    is.read(magic.data(), magic.size());
    if (!is || magic != kGraphDumpMagic)
        throw std::runtime_error("not a graph dump (bad magic)");
    const std::uint32_t version = detail::read_u32(is);
    if (version != kGraphDumpVersion)
        throw std::runtime_error("unsupported graph dump version");
    AttachmentGraph g;
    g.n = detail::read_u32(is);
    g.m = detail::read_u32(is);
    g.seed = detail::read_u64(is);
    check_model_params(g.n, g.m);
    g.slots.resize(static_cast<std::size_t>(g.n - 1) * g.m);
    std::size_t idx = 0;
    for (Vertex j = 2; j <= g.n; ++j)
        for (Label a = 1; a <= g.m; ++a) {
            const std::uint32_t r = detail::read_u32(is);
            if (r < 1 || r >= j) throw std::runtime_error("graph dump recipient out of range");
            g.slots[idx++] = r;
        }
    return g;
}

}  // namespace uag

#pragma once

#include <cstdint>

namespace uag {

// SplitMix64 finalizer; bijective on 64-bit words.
inline constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

// Counter-based generator keyed by (master seed, vertex, label).  Evaluating
// a slot never touches shared state, so replicas parallelize freely and a
// graph extended to more vertices keeps its prefix bit for bit.
class SlotRng {
public:
    explicit constexpr SlotRng(std::uint64_t seed) noexcept
        : base_(mix64(seed + 0x9e3779b97f4a7c15ULL)) {}

    constexpr std::uint64_t vertex_state(std::uint32_t vertex) const noexcept {
        return mix64(base_ ^ (vertex * 0xd6e8feb86659fd93ULL));
    }

    static constexpr std::uint64_t label_bits(std::uint64_t vertex_state,
                                              std::uint32_t label) noexcept {
        return mix64(vertex_state ^ (label * 0xa0761d6478bd642fULL));
    }

    constexpr std::uint64_t bits(std::uint32_t vertex, std::uint32_t label) const noexcept {
        return label_bits(vertex_state(vertex), label);
    }

private:
    std::uint64_t base_;
};

// Maps 64 uniform bits onto [1, bound]; multiply-shift, bias below bound/2^64.
inline constexpr std::uint32_t bounded_index(std::uint64_t bits, std::uint32_t bound) noexcept {
    return 1u + static_cast<std::uint32_t>(
                    (static_cast<unsigned __int128>(bits) * bound) >> 64);
}

inline constexpr double to_unit_double(std::uint64_t bits) noexcept {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Independent stream seed for replica `index` under one master seed.
inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return mix64(mix64(master ^ 0x2545f4914f6cdd1dULL) + index * 0x9e3779b97f4a7c15ULL);
}

}  // namespace uag

#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "uag/rng.hpp"

namespace uag {

using Vertex = std::uint32_t;
using Label = std::uint32_t;

// Labelled edge j -> i of the ambient multigraph: lower < upper, label in [1, m].
struct LabeledEdge {
    Vertex upper = 0;
    Label label = 0;
    Vertex lower = 0;

    friend constexpr auto operator<=>(const LabeledEdge&, const LabeledEdge&) = default;
};

// Uniform attachment graph on vertices 1..n.  Vertex j >= 2 owns m labelled
// slots; slot (j, a) holds the recipient of edge a, uniform on [1, j-1] and
// independent across slots.  Treat as immutable once built.
struct AttachmentGraph {
    std::uint32_t n = 1;
    std::uint32_t m = 1;
    std::uint64_t seed = 0;
    std::vector<Vertex> slots;  // index (j-2)*m + (a-1)

    Vertex recipient(Vertex j, Label a) const {
        return slots[static_cast<std::size_t>(j - 2) * m + (a - 1)];
    }
    Vertex& recipient_ref(Vertex j, Label a) {
        return slots[static_cast<std::size_t>(j - 2) * m + (a - 1)];
    }
    std::size_t edge_count() const { return slots.size(); }

    bool has_edge(const LabeledEdge& e) const {
        return e.upper >= 2 && e.upper <= n && e.label >= 1 && e.label <= m &&
               e.lower < e.upper && recipient(e.upper, e.label) == e.lower;
    }
};

inline void check_model_params(std::uint32_t n, std::uint32_t m) {
    if (n < 1) throw std::invalid_argument("attachment graph needs n >= 1");
    if (m < 1) throw std::invalid_argument("attachment graph needs m >= 1");
}

// Regenerates g in place; hot path for Monte Carlo replicas.
inline void regenerate(AttachmentGraph& g, std::uint32_t n, std::uint32_t m,
                       std::uint64_t seed) {
    check_model_params(n, m);
    g.n = n;
    g.m = m;
    g.seed = seed;
    g.slots.resize(static_cast<std::size_t>(n - 1) * m);
    const SlotRng rng(seed);
    std::size_t idx = 0;
    for (Vertex j = 2; j <= n; ++j) {
        const std::uint64_t vs = rng.vertex_state(j);
        for (Label a = 1; a <= m; ++a)
            g.slots[idx++] = bounded_index(SlotRng::label_bits(vs, a), j - 1);
    }
}

inline AttachmentGraph generate(std::uint32_t n, std::uint32_t m, std::uint64_t seed) {
    AttachmentGraph g;
    regenerate(g, n, m, seed);
    return g;
}

// Grows g to new_n vertices.  Existing slots are untouched; new slots are
// fresh draws keyed by `seed`, so extend(generate(k, m, s), n, s) equals
// generate(n, m, s) exactly.
inline AttachmentGraph extend(const AttachmentGraph& g, std::uint32_t new_n,
                              std::uint64_t seed) {
    if (new_n < g.n) throw std::invalid_argument("extend cannot shrink the graph");
    AttachmentGraph out = g;
    out.n = new_n;
    out.slots.resize(static_cast<std::size_t>(new_n - 1) * g.m);
    const SlotRng rng(seed);
    std::size_t idx = static_cast<std::size_t>(g.n - 1) * g.m;
    for (Vertex j = g.n + 1; j <= new_n; ++j) {
        const std::uint64_t vs = rng.vertex_state(j);
        for (Label a = 1; a <= g.m; ++a)
            out.slots[idx++] = bounded_index(SlotRng::label_bits(vs, a), j - 1);
    }
    return out;
}

// Parallel edges between u and v; all of them are slots of max(u, v).
inline std::uint32_t multiplicity(const AttachmentGraph& g, Vertex u, Vertex v) {
    if (u == v) return 0;
    const Vertex hi = std::max(u, v), lo = std::min(u, v);
    if (hi < 2 || hi > g.n) return 0;
    std::uint32_t c = 0;
    for (Label a = 1; a <= g.m; ++a) c += (g.recipient(hi, a) == lo);
    return c;
}

// In-degrees of vertices 1..vmax counting only slots of vertices <= vmax
// (vmax = 0 means all of g).
inline std::vector<std::uint32_t> in_degrees(const AttachmentGraph& g, Vertex vmax = 0) {
    if (vmax == 0 || vmax > g.n) vmax = g.n;
    std::vector<std::uint32_t> indeg(vmax + 1, 0);
    for (Vertex j = 2; j <= vmax; ++j)
        for (Label a = 1; a <= g.m; ++a) ++indeg[g.recipient(j, a)];
    return indeg;
}

}  // namespace uag

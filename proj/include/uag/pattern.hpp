#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "uag/graph.hpp"

namespace uag {

// Target multigraph H on vertices 1..h: loop-free, connected, parallel edges
// allowed.  Edges are stored normalized (u < v) and sorted.
struct PatternGraph {
    std::uint32_t h = 0;
    std::vector<std::pair<Vertex, Vertex>> edges;
    std::string name;

    std::size_t edge_count() const { return edges.size(); }
};

namespace detail {

inline bool pattern_connected(std::uint32_t h,
                              const std::vector<std::pair<Vertex, Vertex>>& edges) {
    if (h == 0) return false;
    std::vector<std::vector<Vertex>> adj(h + 1);
    for (auto [u, v] : edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    std::vector<char> seen(h + 1, 0);
    std::vector<Vertex> stack{1};
    seen[1] = 1;
    std::uint32_t cnt = 0;
    while (!stack.empty()) {
        const Vertex v = stack.back();
        stack.pop_back();
        ++cnt;
        for (Vertex w : adj[v])
            if (!seen[w]) {
                seen[w] = 1;
                stack.push_back(w);
            }
    }
    return cnt == h;
}

}  // namespace detail

inline PatternGraph make_pattern(std::uint32_t h,
                                 std::vector<std::pair<Vertex, Vertex>> edges,
                                 std::string name = {}) {
    if (h < 1) throw std::invalid_argument("pattern needs at least one vertex");
    for (auto& [u, v] : edges) {
        if (u < 1 || v < 1 || u > h || v > h)
            throw std::invalid_argument("pattern edge endpoint out of range");
        if (u == v) throw std::invalid_argument("pattern has a loop");
        if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    if (!detail::pattern_connected(h, edges))
        throw std::invalid_argument("pattern must be connected");
    return PatternGraph{h, std::move(edges), std::move(name)};
}

inline std::vector<std::uint32_t> degrees(const PatternGraph& p) {
    std::vector<std::uint32_t> d(p.h + 1, 0);
    for (auto [u, v] : p.edges) {
        ++d[u];
        ++d[v];
    }
    return d;
}

inline std::vector<std::vector<std::uint8_t>> mult_matrix(const PatternGraph& p) {
    std::vector<std::vector<std::uint8_t>> mm(p.h + 1,
                                              std::vector<std::uint8_t>(p.h + 1, 0));
    for (auto [u, v] : p.edges) {
        ++mm[u][v];
        ++mm[v][u];
    }
    return mm;
}

// ---------------------------------------------------------------------------
// Named patterns

inline PatternGraph pattern_cycle(std::uint32_t len) {
    if (len < 2) throw std::invalid_argument("cycle length must be >= 2");
    std::vector<std::pair<Vertex, Vertex>> e;
    if (len == 2) {
        e = {{1, 2}, {1, 2}};
    } else {
        for (Vertex i = 1; i < len; ++i) e.push_back({i, i + 1});
        e.push_back({1, len});
    }
    return make_pattern(len, std::move(e), "cycle:" + std::to_string(len));
}

inline PatternGraph pattern_path(std::uint32_t len) {
    if (len < 1) throw std::invalid_argument("path length must be >= 1");
    std::vector<std::pair<Vertex, Vertex>> e;
    for (Vertex i = 1; i <= len; ++i) e.push_back({i, i + 1});
    return make_pattern(len + 1, std::move(e), "path:" + std::to_string(len));
}

inline PatternGraph pattern_star(std::uint32_t len) {
    if (len < 1) throw std::invalid_argument("star size must be >= 1");
    std::vector<std::pair<Vertex, Vertex>> e;
    for (Vertex i = 2; i <= len + 1; ++i) e.push_back({1, i});
    return make_pattern(len + 1, std::move(e), "star:" + std::to_string(len));
}

inline PatternGraph pattern_k4() {
    return make_pattern(4, {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}}, "k4");
}

inline PatternGraph pattern_k4_minus_edge() {
    return make_pattern(4, {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}}, "k4-minus-edge");
}

// Two 2-cycles glued at vertex 2 (the middle).
inline PatternGraph pattern_double_2cycle() {
    return make_pattern(3, {{1, 2}, {1, 2}, {2, 3}, {2, 3}}, "double-2-cycle");
}

// Adds a fresh vertex joined to `at` by a single edge.
inline PatternGraph with_pendant(const PatternGraph& p, Vertex at) {
    if (at < 1 || at > p.h) throw std::invalid_argument("pendant attach vertex out of range");
    auto edges = p.edges;
    edges.push_back({at, p.h + 1});
    std::string nm = p.name.empty() ? std::string("pattern") : p.name;
    return make_pattern(p.h + 1, std::move(edges),
                        nm + "+pendant@" + std::to_string(at));
}

// Pattern file: first line h, then one "u v" pair per edge.
inline PatternGraph read_pattern(std::istream& is, std::string name = {}) {
    std::uint32_t h = 0;
    if (!(is >> h)) throw std::invalid_argument("pattern file: missing vertex count");
    std::vector<std::pair<Vertex, Vertex>> edges;
    Vertex u, v;
    while (is >> u >> v) edges.push_back({u, v});
    return make_pattern(h, std::move(edges), std::move(name));
}

// Accepts: edge | cycle:L | triangle | path:L | star:L | k4 | k4-minus-edge |
// double-2-cycle | theta | @file, optionally followed by +pendant@V.
inline PatternGraph parse_pattern(const std::string& spec) {
    std::string base = spec;
    std::vector<Vertex> pendants;
    for (;;) {
        const auto pos = base.rfind("+pendant@");
        if (pos == std::string::npos) break;
        const std::string arg = base.substr(pos + 9);
        base = base.substr(0, pos);
        std::size_t used = 0;
        unsigned long at = 0;
        try {
            at = std::stoul(arg, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad pendant vertex in pattern '" + spec + "'");
        }
        if (used != arg.size() || at == 0)
            throw std::invalid_argument("bad pendant vertex in pattern '" + spec + "'");
        pendants.push_back(static_cast<Vertex>(at));
    }
    std::reverse(pendants.begin(), pendants.end());

    PatternGraph p;
    auto parse_count = [&](const std::string& arg) -> std::uint32_t {
        std::size_t used = 0;
        unsigned long l = 0;
        try {
            l = std::stoul(arg, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad pattern size in '" + spec + "'");
        }
        if (used != arg.size() || l == 0 || l > 1000000)
            throw std::invalid_argument("bad pattern size in '" + spec + "'");
        return static_cast<std::uint32_t>(l);
    };
    if (!base.empty() && base[0] == '@') {
        std::ifstream in(base.substr(1));
        if (!in) throw std::invalid_argument("cannot open pattern file '" + base.substr(1) + "'");
        p = read_pattern(in, base);
    } else if (base == "edge") {
        p = pattern_path(1);
        p.name = "edge";
    } else if (base == "triangle") {
        p = pattern_cycle(3);
    } else if (base == "k4") {
        p = pattern_k4();
    } else if (base == "k4-minus-edge") {
        p = pattern_k4_minus_edge();
    } else if (base == "double-2-cycle" || base == "theta") {
        p = pattern_double_2cycle();
    } else if (base.rfind("cycle:", 0) == 0) {
        p = pattern_cycle(parse_count(base.substr(6)));
    } else if (base.rfind("path:", 0) == 0) {
        p = pattern_path(parse_count(base.substr(5)));
    } else if (base.rfind("star:", 0) == 0) {
        p = pattern_star(parse_count(base.substr(5)));
    } else {
        throw std::invalid_argument("unknown pattern '" + spec + "'");
    }
    for (Vertex at : pendants) p = with_pendant(p, at);
    if (!pendants.empty()) p.name = spec;
    return p;
}

// ---------------------------------------------------------------------------
// Isomorphism (exhaustive, small h)

// Counts bijections of [1..h] mapping a's edge multiset onto b's.  Degree
// pruning keeps the search tame for h <= 10.
inline std::uint64_t count_isomorphisms(const PatternGraph& a, const PatternGraph& b,
                                        bool stop_at_first = false) {
    if (a.h != b.h || a.edges.size() != b.edges.size()) return 0;
    const auto da = degrees(a);
    const auto db = degrees(b);
    {
        auto sa = da, sb = db;
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        if (sa != sb) return 0;
    }
    const auto ma = mult_matrix(a);
    const auto mb = mult_matrix(b);
    std::vector<Vertex> img(a.h + 1, 0);
    std::vector<char> used(b.h + 1, 0);
    std::uint64_t found = 0;
    auto rec = [&](auto&& self, Vertex u) -> bool {
        if (u > a.h) {
            ++found;
            return stop_at_first;
        }
        for (Vertex c = 1; c <= b.h; ++c) {
            if (used[c] || da[u] != db[c]) continue;
            bool ok = true;
            for (Vertex w = 1; w < u && ok; ++w) ok = (ma[u][w] == mb[c][img[w]]);
            if (!ok) continue;
            used[c] = 1;
            img[u] = c;
            if (self(self, u + 1)) return true;
            used[c] = 0;
        }
        return false;
    };
    rec(rec, 1);
    return found;
}

inline bool isomorphic(const PatternGraph& a, const PatternGraph& b) {
    return count_isomorphisms(a, b, /*stop_at_first=*/true) > 0;
}

inline std::uint64_t automorphism_count(const PatternGraph& p) {
    return count_isomorphisms(p, p);
}

// ---------------------------------------------------------------------------
// Classification

enum class PatternKind { tree, unicyclic, multicyclic };

struct PatternClass {
    PatternKind kind = PatternKind::tree;
    std::uint32_t cycle_length = 0;     // unicyclic only: vertices on the core cycle
    bool leaf_free = false;             // min degree >= 2
    PatternGraph core;                  // 2-core relabeled to 1..core.h; h == 0 for trees
    std::vector<Vertex> core_vertices;  // original labels, ascending
    std::uint32_t t = 0;                // edges outside the core
    std::uint32_t s = 0;                // distinct core vertices carrying pendant trees
    std::uint32_t min_m_value = 0;      // smallest m admitting potential copies
};

// Smallest m for which H has a potential copy: minimize, over vertex
// orderings, the maximum number of edges a vertex sends to earlier vertices.
// Subset DP over <= 2^h states.
inline std::uint32_t min_m(const PatternGraph& p, std::uint32_t limit = 10) {
    if (p.h > limit || p.h > 16) throw std::invalid_argument("min_m: vertex limit exceeded");
    if (p.h == 1) return 0;
    const auto mm = mult_matrix(p);
    const std::uint32_t full = (1u << p.h) - 1;
    std::vector<std::uint32_t> f(full + 1, 0);
    for (std::uint32_t S = 1; S <= full; ++S) {
        if ((S & (S - 1)) == 0) continue;  // singleton: out-degree 0
        std::uint32_t best = UINT32_MAX;
        for (std::uint32_t v = 0; v < p.h; ++v) {
            if (!(S & (1u << v))) continue;
            std::uint32_t into = 0;
            for (std::uint32_t w = 0; w < p.h; ++w)
                if (w != v && (S & (1u << w))) into += mm[v + 1][w + 1];
            best = std::min(best, std::max(f[S ^ (1u << v)], into));
        }
        f[S] = best;
    }
    return f[full];
}

// 2-core by repeated leaf removal, plus derived shape data.
inline PatternClass classify(const PatternGraph& p) {
    PatternClass out;
    const std::size_t e = p.edges.size();
    if (e + 1 < p.h)
        throw std::invalid_argument("pattern must be connected");  // unreachable for valid inputs
    out.kind = (e == p.h - 1)  ? PatternKind::tree
               : (e == p.h)   ? PatternKind::unicyclic
                              : PatternKind::multicyclic;
    const auto deg0 = degrees(p);
    out.leaf_free = true;
    for (Vertex v = 1; v <= p.h; ++v)
        if (deg0[v] < 2) out.leaf_free = false;

    // strip degree-1 vertices
    auto mm = mult_matrix(p);
    auto deg = deg0;
    std::vector<char> alive(p.h + 1, 1);
    std::vector<Vertex> queue;
    for (Vertex v = 1; v <= p.h; ++v)
        if (deg[v] == 1) queue.push_back(v);
    std::vector<char> had_stripped_neighbor(p.h + 1, 0);
    while (!queue.empty()) {
        const Vertex v = queue.back();
        queue.pop_back();
        if (!alive[v] || deg[v] != 1) continue;
        alive[v] = 0;
        for (Vertex w = 1; w <= p.h; ++w) {
            if (!mm[v][w]) continue;
            // exactly one incident edge remains
            --mm[v][w];
            --mm[w][v];
            --deg[w];
            deg[v] = 0;
            had_stripped_neighbor[w] = 1;
            if (alive[w] && deg[w] == 1) queue.push_back(w);
            break;
        }
    }
    for (Vertex v = 1; v <= p.h; ++v)
        if (alive[v] && deg[v] == 0) alive[v] = 0;  // isolated leftover of a tree

    std::vector<Vertex> core_vs;
    for (Vertex v = 1; v <= p.h; ++v)
        if (alive[v]) core_vs.push_back(v);
    out.core_vertices = core_vs;
    if (!core_vs.empty()) {
        std::vector<Vertex> relabel(p.h + 1, 0);
        for (std::size_t i = 0; i < core_vs.size(); ++i) relabel[core_vs[i]] = static_cast<Vertex>(i + 1);
        // rebuild from the residual multiplicity matrix to respect stripping
        std::vector<std::pair<Vertex, Vertex>> core_edges;
        for (Vertex u = 1; u <= p.h; ++u)
            for (Vertex v = u + 1; v <= p.h; ++v)
                for (std::uint8_t k = 0; k < mm[u][v]; ++k)
                    core_edges.push_back({relabel[u], relabel[v]});
        out.core = PatternGraph{static_cast<std::uint32_t>(core_vs.size()),
                                std::move(core_edges), p.name + "/core"};
        std::sort(out.core.edges.begin(), out.core.edges.end());
        out.t = static_cast<std::uint32_t>(e - out.core.edges.size());
        for (Vertex v : core_vs) out.s += had_stripped_neighbor[v] ? 1 : 0;
        if (out.kind == PatternKind::unicyclic)
            out.cycle_length = static_cast<std::uint32_t>(core_vs.size());
    } else {
        out.core = PatternGraph{};  // empty: tree
        out.t = static_cast<std::uint32_t>(e);
        out.s = 0;
    }
    out.min_m_value = min_m(p);
    return out;
}

// ---------------------------------------------------------------------------
// Directed realizations on ordered positions

// One directed realization of H on positions 1..h (edges point to lower
// positions).  Distinct realizations = vertex bijections modulo Aut(H).
struct LabeledVersion {
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> out;  // [pos] -> {(lower pos, mult)}
    std::vector<std::uint32_t> marks;                                       // [pos]; marks[0] unused, marks[1] == 0

    // (b_1..b_h) as a plain 0-indexed sequence, same shape mark_sequence() of
    // a potential copy uses: element 0 is b_1 == 0.
    std::vector<std::uint32_t> mark_sequence() const {
        return {marks.begin() + 1, marks.end()};
    }
};

inline std::vector<LabeledVersion> labeled_versions(const PatternGraph& p) {
    if (p.h > 10) throw std::invalid_argument("labeled_versions supports h <= 10");
    std::vector<Vertex> at(p.h);  // at[k] = vertex placed at position k+1
    std::iota(at.begin(), at.end(), 1);
    std::set<std::vector<std::uint32_t>> seen;
    std::vector<LabeledVersion> versions;
    std::vector<Vertex> posof(p.h + 1);
    do {
        for (std::uint32_t k = 0; k < p.h; ++k) posof[at[k]] = k + 1;
        std::vector<std::vector<std::uint32_t>> mm(p.h + 1,
                                                   std::vector<std::uint32_t>(p.h + 1, 0));
        for (auto [u, v] : p.edges) {
            const std::uint32_t hi = std::max(posof[u], posof[v]);
            const std::uint32_t lo = std::min(posof[u], posof[v]);
            ++mm[hi][lo];
        }
        std::vector<std::uint32_t> key;
        for (std::uint32_t i = 2; i <= p.h; ++i)
            for (std::uint32_t j = 1; j < i; ++j) key.push_back(mm[i][j]);
        if (!seen.insert(key).second) continue;
        LabeledVersion lv;
        lv.out.assign(p.h + 1, {});
        lv.marks.assign(p.h + 1, 0);
        for (std::uint32_t i = 2; i <= p.h; ++i)
            for (std::uint32_t j = 1; j < i; ++j)
                if (mm[i][j]) {
                    lv.out[i].push_back({j, mm[i][j]});
                    lv.marks[i] += mm[i][j];
                }
        versions.push_back(std::move(lv));
    } while (std::next_permutation(at.begin(), at.end()));
    return versions;
}

// Ways to put distinct labels from [1..m] on the out-edges of every position;
// parallel edges to one target are unordered.
inline double label_assignments(const LabeledVersion& v, std::uint32_t m) {
    double total = 1.0;
    for (std::size_t i = 1; i < v.marks.size(); ++i) {
        const std::uint32_t b = v.marks[i];
        if (b == 0) continue;
        if (b > m) return 0.0;
        double ways = 1.0;
        for (std::uint32_t k = 0; k < b; ++k) ways *= static_cast<double>(m - k);
        for (const auto& [target, mult] : v.out[i])
            for (std::uint32_t k = 2; k <= mult; ++k) ways /= static_cast<double>(k);
        total *= ways;
    }
    return total;
}

}  // namespace uag

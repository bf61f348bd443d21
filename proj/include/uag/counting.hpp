#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "uag/graph.hpp"
#include "uag/pattern.hpp"

namespace uag {

// Undirected adjacency of an attachment graph: per vertex, sorted distinct
// neighbors with parallel-edge multiplicities, plus labelled degrees.
struct NeighborIndex {
    std::uint32_t n = 0;
    std::vector<std::size_t> offset;     // size n+2; neighbor range of v
    std::vector<Vertex> nbr;             // sorted within each range
    std::vector<std::uint32_t> mult;     // parallel count, aligned with nbr
    std::vector<std::uint32_t> deg;      // labelled degree of v

    std::size_t begin(Vertex v) const { return offset[v]; }
    std::size_t end(Vertex v) const { return offset[v + 1]; }

    std::uint32_t multiplicity(Vertex v, Vertex u) const {
        const auto b = nbr.begin() + static_cast<std::ptrdiff_t>(offset[v]);
        const auto e = nbr.begin() + static_cast<std::ptrdiff_t>(offset[v + 1]);
        const auto it = std::lower_bound(b, e, u);
        return (it != e && *it == u) ? mult[static_cast<std::size_t>(it - nbr.begin())] : 0;
    }
};

inline NeighborIndex build_neighbor_index(const AttachmentGraph& g) {
    NeighborIndex ix;
    ix.n = g.n;
    ix.deg.assign(g.n + 1, 0);
    for (Vertex j = 2; j <= g.n; ++j)
        for (Label a = 1; a <= g.m; ++a) {
            ix.deg[j] += 1;
            ix.deg[g.recipient(j, a)] += 1;
        }
    std::vector<std::size_t> pos(g.n + 2, 0);
    for (Vertex v = 1; v <= g.n; ++v) pos[v + 1] = pos[v] + ix.deg[v];
    std::vector<Vertex> raw(pos[g.n + 1]);
    {
        std::vector<std::size_t> cur(pos.begin(), pos.end() - 1);
        for (Vertex j = 2; j <= g.n; ++j)
            for (Label a = 1; a <= g.m; ++a) {
                const Vertex r = g.recipient(j, a);
                raw[cur[j]++] = r;
                raw[cur[r]++] = j;
            }
    }
    ix.offset.assign(g.n + 2, 0);
    for (Vertex v = 1; v <= g.n; ++v) {
        std::sort(raw.begin() + static_cast<std::ptrdiff_t>(pos[v]),
                  raw.begin() + static_cast<std::ptrdiff_t>(pos[v + 1]));
        ix.offset[v] = ix.nbr.size();
        for (std::size_t i = pos[v]; i < pos[v + 1];) {
            std::size_t j = i;
            while (j < pos[v + 1] && raw[j] == raw[i]) ++j;
            ix.nbr.push_back(raw[i]);
            ix.mult.push_back(static_cast<std::uint32_t>(j - i));
            i = j;
        }
    }
    ix.offset[g.n + 1] = ix.nbr.size();
    // offset[0] unused; make ranges valid for v=0 too
    ix.offset[0] = 0;
    return ix;
}

namespace detail {

inline std::uint64_t choose_small(std::uint32_t a, std::uint32_t b) {
    if (b > a) return 0;
    std::uint64_t r = 1;
    for (std::uint32_t i = 0; i < b; ++i) r = r * (a - i) / (i + 1);
    return r;
}

// e_l of the multiplicity vector via Newton's identities from power sums.
inline std::uint64_t elementary_symmetric(const std::vector<std::int64_t>& p, std::uint32_t l) {
    std::vector<std::int64_t> e(l + 1, 0);
    e[0] = 1;
    for (std::uint32_t k = 1; k <= l; ++k) {
        std::int64_t acc = 0;
        for (std::uint32_t i = 1; i <= k; ++i) {
            const std::int64_t term = e[k - i] * p[i];
            acc += (i % 2 == 1) ? term : -term;
        }
        e[k] = acc / static_cast<std::int64_t>(k);
    }
    return static_cast<std::uint64_t>(e[l]);
}

}  // namespace detail

// Number of l-edge simple stars: sum over centers of e_l of the distinct-
// neighbor multiplicity vector (one labelled edge chosen per leaf).
inline std::uint64_t count_stars(const AttachmentGraph& g, std::uint32_t l,
                                 const NeighborIndex* ix = nullptr) {
    if (l < 1) throw std::invalid_argument("star size must be >= 1");
    NeighborIndex local;
    if (!ix) {
        local = build_neighbor_index(g);
        ix = &local;
    }
    std::uint64_t total = 0;
    std::vector<std::int64_t> p(l + 1, 0);
    for (Vertex v = 1; v <= g.n; ++v) {
        std::fill(p.begin(), p.end(), 0);
        for (std::size_t i = ix->begin(v); i < ix->end(v); ++i) {
            std::int64_t pw = 1;
            for (std::uint32_t k = 1; k <= l; ++k) {
                pw *= ix->mult[i];
                p[k] += pw;
            }
        }
        total += detail::elementary_symmetric(p, l);
    }
    return total;
}

// Number of l-cycles.  l=2 counts unordered pairs of parallel edges; l>=3
// runs a DFS from each minimal vertex with the canonical-direction tie break,
// multiplying parallel multiplicities along the cycle.
inline std::uint64_t count_cycles(const AttachmentGraph& g, std::uint32_t l,
                                  const NeighborIndex* ix = nullptr) {
    if (l < 2) throw std::invalid_argument("cycle length must be >= 2");
    if (l == 2) {
        std::uint64_t total = 0;
        std::vector<Vertex> rec(g.m);
        for (Vertex j = 2; j <= g.n; ++j) {
            for (Label a = 1; a <= g.m; ++a) rec[a - 1] = g.recipient(j, a);
            std::sort(rec.begin(), rec.end());
            for (std::size_t i = 0; i < rec.size();) {
                std::size_t k = i;
                while (k < rec.size() && rec[k] == rec[i]) ++k;
                total += detail::choose_small(static_cast<std::uint32_t>(k - i), 2);
                i = k;
            }
        }
        return total;
    }
    NeighborIndex local;
    if (!ix) {
        local = build_neighbor_index(g);
        ix = &local;
    }
    std::uint64_t total = 0;
    std::vector<Vertex> path(l);
    std::vector<char> onpath(g.n + 1, 0);
    auto dfs = [&](auto&& self, Vertex v, std::uint32_t depth, std::uint64_t weight) -> void {
        const Vertex s = path[0];
        if (depth == l - 1) {
            if (path[1] < v) {  // canonical direction; v is the last vertex
                const std::uint32_t closing = ix->multiplicity(v, s);
                if (closing) total += weight * closing;
            }
            return;
        }
        for (std::size_t i = ix->begin(v); i < ix->end(v); ++i) {
            const Vertex u = ix->nbr[i];
            if (u <= s || onpath[u]) continue;
            onpath[u] = 1;
            path[depth + 1] = u;
            self(self, u, depth + 1, weight * ix->mult[i]);
            onpath[u] = 0;
        }
    };
    for (Vertex s = 1; s <= g.n; ++s) {
        path[0] = s;
        onpath[s] = 1;
        for (std::size_t i = ix->begin(s); i < ix->end(s); ++i) {
            const Vertex u = ix->nbr[i];
            if (u <= s) continue;
            onpath[u] = 1;
            path[1] = u;
            dfs(dfs, u, 1, ix->mult[i]);
            onpath[u] = 0;
        }
        onpath[s] = 0;
    }
    return total;
}

// General copy counter: sum over injective embeddings of prod C(mult_G,
// mult_H) per pattern edge, divided by |Aut(H)|.  Candidates come from
// neighbor lists of already-placed images.
inline std::uint64_t count_copies(const AttachmentGraph& g, const PatternGraph& hg,
                                  const NeighborIndex* ix = nullptr) {
    if (hg.h > 10) throw std::invalid_argument("count_copies supports h <= 10");
    if (hg.h == 1) return g.n;
    if (hg.h > g.n) return 0;
    NeighborIndex local;
    if (!ix) {
        local = build_neighbor_index(g);
        ix = &local;
    }
    const auto hdeg = degrees(hg);
    const auto hmul = mult_matrix(hg);

    // visit order: highest-degree vertex first, then max placed-neighbor count
    std::vector<Vertex> order;
    {
        std::vector<char> placed(hg.h + 1, 0);
        Vertex best = 1;
        for (Vertex v = 2; v <= hg.h; ++v)
            if (hdeg[v] > hdeg[best]) best = v;
        order.push_back(best);
        placed[best] = 1;
        while (order.size() < hg.h) {
            Vertex pick = 0;
            std::uint32_t pick_links = 0;
            for (Vertex v = 1; v <= hg.h; ++v) {
                if (placed[v]) continue;
                std::uint32_t links = 0;
                for (Vertex w : order) links += hmul[v][w] ? 1 : 0;
                if (links == 0) continue;
                if (pick == 0 || links > pick_links ||
                    (links == pick_links && hdeg[v] > hdeg[pick])) {
                    pick = v;
                    pick_links = links;
                }
            }
            order.push_back(pick);
            placed[pick] = 1;
        }
    }
    // anchor[k]: index into order of a placed neighbor of order[k]
    std::vector<std::size_t> anchor(hg.h, 0);
    for (std::size_t k = 1; k < hg.h; ++k)
        for (std::size_t j = 0; j < k; ++j)
            if (hmul[order[k]][order[j]]) {
                anchor[k] = j;
                break;
            }

    std::vector<Vertex> img(hg.h + 1, 0);
    std::vector<char> used(g.n + 1, 0);
    std::uint64_t sum = 0;
    auto place = [&](auto&& self, std::size_t k, std::uint64_t weight) -> void {
        if (k == hg.h) {
            sum += weight;
            return;
        }
        const Vertex u = order[k];
        auto try_candidate = [&](Vertex c) {
            if (used[c] || ix->deg[c] < hdeg[u]) return;
            std::uint64_t w = weight;
            for (std::size_t j = 0; j < k && w; ++j) {
                const std::uint32_t need = hmul[u][order[j]];
                if (need) w *= detail::choose_small(ix->multiplicity(c, img[order[j]]), need);
            }
            if (!w) return;
            used[c] = 1;
            img[u] = c;
            self(self, k + 1, w);
            used[c] = 0;
        };
        if (k == 0) {
            for (Vertex c = 1; c <= g.n; ++c) try_candidate(c);
        } else {
            const Vertex base = img[order[anchor[k]]];
            for (std::size_t i = ix->begin(base); i < ix->end(base); ++i)
                try_candidate(ix->nbr[i]);
        }
    };
    place(place, 0, 1);
    return sum / automorphism_count(hg);
}

// ---------------------------------------------------------------------------
// Pattern-specialized counters for the Monte Carlo hot loops

class CopyCounter {
  public:
    explicit CopyCounter(PatternGraph hg) : pattern_(std::move(hg)) {
        const std::uint32_t h = pattern_.h;
        const std::size_t e = pattern_.edges.size();
        if (h == 2 && e == 1) kind_ = Kind::edge;
        else if (h == 2 && e == 2) kind_ = Kind::two_cycle;
        else if (h == 3 && e == 3 && isomorphic(pattern_, pattern_cycle(3))) kind_ = Kind::triangle;
        else if (h >= 4 && e == h && isomorphic(pattern_, pattern_cycle(h))) {
            kind_ = Kind::cycle;
            len_ = h;
        } else if (e == h - 1 && h >= 3 && isomorphic(pattern_, pattern_star(h - 1))) {
            kind_ = Kind::star;
            len_ = h - 1;
        } else if (h == 3 && e == 4 && isomorphic(pattern_, pattern_double_2cycle()))
            kind_ = Kind::double_2cycle;
        else if (h == 4 && e == 5 &&
                 isomorphic(pattern_, with_pendant(pattern_double_2cycle(), 2)))
            kind_ = Kind::double_2cycle_pendant;
        else if (h == 4 && e == 4 && isomorphic(pattern_, with_pendant(pattern_cycle(3), 1)))
            kind_ = Kind::triangle_pendant;
        else if (h == 4 && e == 5 && isomorphic(pattern_, pattern_k4_minus_edge()))
            kind_ = Kind::k4_minus_edge;
        else
            kind_ = Kind::generic;
    }

    const PatternGraph& pattern() const { return pattern_; }

    bool wants_index() const {
        return kind_ != Kind::edge && kind_ != Kind::two_cycle && kind_ != Kind::triangle;
    }

    std::uint64_t count(const AttachmentGraph& g, const NeighborIndex* ix = nullptr) const {
        NeighborIndex local;
        if (wants_index() && !ix) {
            local = build_neighbor_index(g);
            ix = &local;
        }
        switch (kind_) {
            case Kind::edge:
                return static_cast<std::uint64_t>(g.n - 1) * g.m;
            case Kind::two_cycle:
                return count_cycles(g, 2);
            case Kind::triangle:
                return count_triangles(g);
            case Kind::cycle:
                return count_cycles(g, len_, ix);
            case Kind::star:
                return count_stars(g, len_, ix);
            case Kind::double_2cycle:
                return count_double_2cycle(g, *ix, /*pendant=*/false);
            case Kind::double_2cycle_pendant:
                return count_double_2cycle(g, *ix, /*pendant=*/true);
            case Kind::triangle_pendant:
                return count_triangle_pendant(g, *ix);
            case Kind::k4_minus_edge:
                return count_k4_minus_edge(g, *ix);
            case Kind::generic:
                return count_copies(g, pattern_, ix);
        }
        return 0;  // unreachable
    }

  private:
    enum class Kind {
        edge,
        two_cycle,
        triangle,
        cycle,
        star,
        double_2cycle,
        double_2cycle_pendant,
        triangle_pendant,
        k4_minus_edge,
        generic,
    };

    // Triangles via the top vertex: a slot pair of k hitting distinct u != v
    // plus any of the parallel edges between u and v.
    static std::uint64_t count_triangles(const AttachmentGraph& g) {
        std::uint64_t total = 0;
        for (Vertex k = 3; k <= g.n; ++k)
            for (Label a = 1; a < g.m; ++a) {
                const Vertex u = g.recipient(k, a);
                for (Label b = a + 1; b <= g.m; ++b) {
                    const Vertex v = g.recipient(k, b);
                    if (u != v) total += multiplicity(g, std::max(u, v), std::min(u, v));
                }
            }
        return total;
    }

    // Same scan, each labelled triangle weighted by its pendant options:
    // edges at the three corners leading outside the triangle.
    static std::uint64_t count_triangle_pendant(const AttachmentGraph& g,
                                                const NeighborIndex& ix) {
        std::uint64_t total = 0;
        for (Vertex k = 3; k <= g.n; ++k)
            for (Label a = 1; a < g.m; ++a) {
                const Vertex u = g.recipient(k, a);
                for (Label b = a + 1; b <= g.m; ++b) {
                    const Vertex v = g.recipient(k, b);
                    if (u == v) continue;
                    const std::uint64_t base = multiplicity(g, std::max(u, v), std::min(u, v));
                    if (!base) continue;
                    const std::uint64_t inside =
                        2 * (base + multiplicity(g, k, u) + multiplicity(g, k, v));
                    const std::uint64_t ends = ix.deg[u] + ix.deg[v] + ix.deg[k];
                    total += base * (ends - inside);
                }
            }
        return total;
    }

    // Double 2-cycles have a forced center: f_u = C(mult(y,u),2) per distinct
    // neighbor, e_2 over the f's; the pendant variant multiplies each pair by
    // the center's edges that leave the three chosen vertices.
    static std::uint64_t count_double_2cycle(const AttachmentGraph& g, const NeighborIndex& ix,
                                             bool pendant) {
        std::uint64_t total = 0;
        for (Vertex y = 1; y <= g.n; ++y) {
            std::uint64_t F = 0, F2 = 0, G = 0, G2 = 0;
            for (std::size_t i = ix.begin(y); i < ix.end(y); ++i) {
                const std::uint64_t mu = ix.mult[i];
                const std::uint64_t f = mu * (mu - 1) / 2;
                if (!f) continue;
                F += f;
                F2 += f * f;
                G += f * mu;
                G2 += f * f * mu;
            }
            const std::uint64_t pairs2 = (F * F - F2) / 2;  // e_2 of the f's
            if (!pendant) {
                total += pairs2;
            } else {
                // sum over u<v of f_u f_v (deg(y) - mult_u - mult_v)
                total += ix.deg[y] * pairs2 - (G * F - G2);
            }
        }
        return total;
    }

    // K4 minus an edge: hinge pair (x,y) joined by mult(x,y) candidate edges,
    // two distinct common neighbors each contributing mult(c,x)*mult(c,y).
    static std::uint64_t count_k4_minus_edge(const AttachmentGraph& g, const NeighborIndex& ix) {
        std::uint64_t total = 0;
        for (Vertex x = 1; x <= g.n; ++x)
            for (std::size_t i = ix.begin(x); i < ix.end(x); ++i) {
                const Vertex y = ix.nbr[i];
                if (y <= x) continue;
                std::uint64_t S = 0, S2 = 0;
                for (std::size_t j = ix.begin(x); j < ix.end(x); ++j) {
                    const Vertex c = ix.nbr[j];
                    if (c == y) continue;
                    const std::uint64_t w =
                        static_cast<std::uint64_t>(ix.mult[j]) * ix.multiplicity(y, c);
                    S += w;
                    S2 += w * w;
                }
                total += ix.mult[i] * ((S * S - S2) / 2);
            }
        return total;
    }

    PatternGraph pattern_;
    Kind kind_ = Kind::generic;
    std::uint32_t len_ = 0;
};

// Copy counts per pattern at one prefix size.
struct CountVector {
    std::uint32_t n = 0;
    std::vector<std::uint64_t> counts;
};

// Counts every pattern on each prefix G^m_c of g; the prefix at checkpoint c
// is the first (c-1)*m slots verbatim.
inline std::vector<CountVector> incremental_counts(const AttachmentGraph& g,
                                                   const std::vector<PatternGraph>& patterns,
                                                   const std::vector<std::uint32_t>& checkpoints) {
    std::vector<CopyCounter> counters;
    counters.reserve(patterns.size());
    bool any_index = false;
    for (const auto& p : patterns) {
        counters.emplace_back(p);
        any_index = any_index || counters.back().wants_index();
    }
    std::vector<CountVector> out;
    out.reserve(checkpoints.size());
    std::uint32_t prev = 0;
    for (const std::uint32_t c : checkpoints) {
        if (c <= prev || c > g.n)
            throw std::invalid_argument("checkpoints must be strictly increasing and <= n");
        prev = c;
        AttachmentGraph prefix;
        prefix.n = c;
        prefix.m = g.m;
        prefix.seed = g.seed;
        prefix.slots.assign(g.slots.begin(),
                            g.slots.begin() + static_cast<std::ptrdiff_t>(
                                                  static_cast<std::size_t>(c - 1) * g.m));
        NeighborIndex ix;
        if (any_index) ix = build_neighbor_index(prefix);
        CountVector cv;
        cv.n = c;
        for (const auto& counter : counters)
            cv.counts.push_back(counter.count(prefix, any_index ? &ix : nullptr));
        out.push_back(std::move(cv));
    }
    return out;
}

}  // namespace uag

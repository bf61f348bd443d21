#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <ostream>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "uag/enumerate.hpp"
#include "uag/graph.hpp"
#include "uag/marks.hpp"
#include "uag/pattern.hpp"

namespace uag {

// A labelled-edge realization of H on vertices k_1 < ... < k_h: every edge
// points from the larger endpoint down, no two edges share an
// (upper vertex, label) slot, and the edge multiset is isomorphic to H.
struct PotentialCopy {
    std::vector<Vertex> vertices;     // strictly increasing
    std::vector<LabeledEdge> edges;   // sorted; identity of the copy

    bool operator==(const PotentialCopy& o) const { return edges == o.edges; }
};

inline MarkSequence mark_sequence(const PotentialCopy& c) {
    MarkSequence b(c.vertices.size(), 0);
    for (const auto& e : c.edges) {
        const auto it = std::lower_bound(c.vertices.begin(), c.vertices.end(), e.upper);
        ++b[static_cast<std::size_t>(it - c.vertices.begin())];
    }
    return b;
}

// P(all slots of c point as demanded) = prod over edges of 1/(upper-1).
inline double copy_probability(const PotentialCopy& c) {
    double p = 1.0;
    for (const auto& e : c.edges) p /= static_cast<double>(e.upper - 1);
    return p;
}

// True iff every labelled edge of c is realized in g.
inline bool contains_copy(const AttachmentGraph& g, const PotentialCopy& c) {
    for (const auto& e : c.edges)
        if (g.recipient(e.upper, e.label) != e.lower) return false;
    return true;
}

namespace detail {

inline std::uint64_t slot_key(Vertex upper, Label label) {
    return (static_cast<std::uint64_t>(upper) << 32) | label;
}

}  // namespace detail

// P(both copies realized): 0 on a conflicting slot, otherwise the product of
// 1/(upper-1) over the union of demanded slots.
inline double joint_probability(const PotentialCopy& a, const PotentialCopy& b) {
    std::vector<std::pair<std::uint64_t, Vertex>> demands;
    demands.reserve(a.edges.size() + b.edges.size());
    for (const auto& e : a.edges) demands.push_back({detail::slot_key(e.upper, e.label), e.lower});
    for (const auto& e : b.edges) demands.push_back({detail::slot_key(e.upper, e.label), e.lower});
    std::sort(demands.begin(), demands.end());
    double p = 1.0;
    for (std::size_t i = 0; i < demands.size(); ++i) {
        if (i && demands[i].first == demands[i - 1].first) {
            if (demands[i].second != demands[i - 1].second) return 0.0;
            continue;  // same slot, same recipient: one constraint
        }
        p /= static_cast<double>((demands[i].first >> 32) - 1);
    }
    return p;
}

namespace detail {

// Position-space edge of a labeled version: (upper position, label, lower position).
struct PosEdge {
    std::uint32_t up, label, lo;
};

// All label assignments of one version as position-space edge lists; size is
// prod_i fall(m, b_i) / prod_groups mult!.
inline std::vector<std::vector<PosEdge>> version_assignments(const LabeledVersion& v,
                                                             std::uint32_t m) {
    std::vector<std::vector<PosEdge>> result{{}};
    const std::uint32_t h = static_cast<std::uint32_t>(v.marks.size()) - 1;
    std::vector<PosEdge> frag;
    std::vector<std::vector<PosEdge>> position_opts;
    for (std::uint32_t i = 2; i <= h; ++i) {
        if (v.marks[i] == 0) continue;
        if (v.marks[i] > m) return {};  // not realizable with m slots
        // enumerate per-group ascending label sets over disjoint labels
        position_opts.clear();
        frag.clear();
        std::uint32_t used_mask = 0;
        auto rec = [&](auto&& self, std::size_t gi) -> void {
            if (gi == v.out[i].size()) {
                position_opts.push_back(frag);
                return;
            }
            const auto [target, mult] = v.out[i][gi];
            std::vector<Label> pick;
            auto choose = [&](auto&& ch, Label from) -> void {
                if (pick.size() == mult) {
                    for (Label l : pick) frag.push_back({i, l, target});
                    const std::uint32_t saved = used_mask;
                    for (Label l : pick) used_mask |= 1u << l;
                    self(self, gi + 1);
                    used_mask = saved;
                    frag.resize(frag.size() - pick.size());
                    return;
                }
                for (Label l = from; l <= m; ++l) {
                    if (used_mask & (1u << l)) continue;
                    pick.push_back(l);
                    ch(ch, l + 1);
                    pick.pop_back();
                }
            };
            choose(choose, 1);
        };
        rec(rec, 0);
        // cartesian append onto every partial assignment
        std::vector<std::vector<PosEdge>> next;
        next.reserve(result.size() * position_opts.size());
        for (const auto& base : result)
            for (const auto& opt : position_opts) {
                auto row = base;
                row.insert(row.end(), opt.begin(), opt.end());
                next.push_back(std::move(row));
            }
        result = std::move(next);
        if (result.empty()) return {};
    }
    return result;
}

}  // namespace detail

// Number of potential copies C(n,h) * psi_H(m), as a double (may be huge).
inline double copy_count(const PatternGraph& hg, std::uint64_t n, std::uint32_t m) {
    if (n < hg.h) return 0.0;
    double tuples = 1.0;
    for (std::uint32_t i = 0; i < hg.h; ++i)
        tuples = tuples * static_cast<double>(n - i) / static_cast<double>(i + 1);
    double psi = 0.0;
    for (const auto& v : labeled_versions(hg)) psi += label_assignments(v, m);
    return tuples * psi;
}

// Streams every potential copy on one fixed increasing vertex tuple.
template <typename F>
void for_each_copy_on_tuple(const PatternGraph& hg, const std::vector<Vertex>& verts,
                            std::uint32_t m, F&& f) {
    if (verts.size() != hg.h) throw std::invalid_argument("tuple size must equal pattern order");
    if (m > 31) throw std::invalid_argument("m too large for label enumeration");
    for (const auto& v : labeled_versions(hg)) {
        for (const auto& assign : detail::version_assignments(v, m)) {
            PotentialCopy c;
            c.vertices = verts;
            c.edges.reserve(assign.size());
            for (const auto& pe : assign)
                c.edges.push_back({verts[pe.up - 1], pe.label, verts[pe.lo - 1]});
            std::sort(c.edges.begin(), c.edges.end());
            f(std::move(c));
        }
    }
}

// Streams all of Gamma for (hg, n, m): every increasing tuple, every directed
// version, every label assignment.  m below min_m yields nothing.
template <typename F>
void for_each_copy(const PatternGraph& hg, std::uint32_t n, std::uint32_t m, F&& f,
                   double budget = 1e8) {
    if (m > 31) throw std::invalid_argument("m too large for label enumeration");
    const double total = copy_count(hg, n, m);
    if (total > budget) throw BudgetError("potential-copy budget exceeded", total);
    if (n < hg.h || total == 0.0) return;
    const auto versions = labeled_versions(hg);
    std::vector<std::vector<std::vector<detail::PosEdge>>> assigns;
    assigns.reserve(versions.size());
    for (const auto& v : versions) assigns.push_back(detail::version_assignments(v, m));

    std::vector<Vertex> verts(hg.h);
    for (std::uint32_t i = 0; i < hg.h; ++i) verts[i] = i + 1;
    for (;;) {
        for (const auto& va : assigns)
            for (const auto& assign : va) {
                PotentialCopy c;
                c.vertices = verts;
                c.edges.reserve(assign.size());
                for (const auto& pe : assign)
                    c.edges.push_back({verts[pe.up - 1], pe.label, verts[pe.lo - 1]});
                std::sort(c.edges.begin(), c.edges.end());
                f(std::move(c));
            }
        // next increasing tuple over [1..n]
        std::int32_t i = static_cast<std::int32_t>(hg.h) - 1;
        while (i >= 0 && verts[i] == n - (hg.h - 1 - static_cast<std::uint32_t>(i))) --i;
        if (i < 0) break;
        ++verts[i];
        for (std::uint32_t j = static_cast<std::uint32_t>(i) + 1; j < hg.h; ++j)
            verts[j] = verts[j - 1] + 1;
    }
}

inline std::vector<PotentialCopy> enumerate_copies(const PatternGraph& hg, std::uint32_t n,
                                                   std::uint32_t m, double budget = 1e8) {
    std::vector<PotentialCopy> out;
    for_each_copy(hg, n, m, [&](PotentialCopy c) { out.push_back(std::move(c)); }, budget);
    return out;
}

// ---------------------------------------------------------------------------
// Exact moments and laws

// Truncation of S(b_1..b_h) = sum over 1 <= k_1 < ... < k_h <= k_max of
// prod_{i>=2} (k_i - 1)^{-b_i}.  O(h * k_max) by prefix sums.
inline double truncated_S(const MarkSequence& b, std::uint32_t k_max) {
    const std::size_t h = b.size();
    if (h < 1) throw std::invalid_argument("empty mark sequence");
    if (k_max < h) return 0.0;
    // layer[k] = sum over tuples ending at k_i = k; prefix[k] = sum for k_i <= k
    std::vector<double> prefix(k_max + 1, 0.0);
    for (std::uint32_t k = 1; k <= k_max; ++k) prefix[k] = static_cast<double>(k);
    for (std::size_t i = 2; i <= h; ++i) {
        std::vector<double> next(k_max + 1, 0.0);
        double acc = 0.0;
        for (std::uint32_t k = 2; k <= k_max; ++k) {
            const double w = std::pow(static_cast<double>(k - 1), -static_cast<double>(b[i - 1]));
            acc += w * prefix[k - 1];
            next[k] = acc;
        }
        prefix = std::move(next);
    }
    return prefix[k_max];
}

// E W_n = sum over versions of (label assignment count) * S(marks; n).
inline double exact_mean(const PatternGraph& hg, std::uint32_t n, std::uint32_t m) {
    double mean = 0.0;
    for (const auto& v : labeled_versions(hg)) {
        const double psi = label_assignments(v, m);
        if (psi == 0.0) continue;
        mean += psi * truncated_S(v.mark_sequence(), n);
    }
    return mean;
}

// Var W_n = sum_a pi(1-pi) + sum over slot-sharing pairs of (joint - pi*pi).
// Pairs demanding disjoint slot sets are independent and contribute nothing.
inline double exact_variance(const PatternGraph& hg, std::uint32_t n, std::uint32_t m,
                             double budget = 1e6) {
    const auto copies = enumerate_copies(hg, n, m, budget);
    std::vector<double> pi(copies.size());
    double var = 0.0;
    for (std::size_t i = 0; i < copies.size(); ++i) {
        pi[i] = copy_probability(copies[i]);
        var += pi[i] * (1.0 - pi[i]);
    }
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> slot_users;
    for (std::size_t i = 0; i < copies.size(); ++i)
        for (const auto& e : copies[i].edges)
            slot_users[detail::slot_key(e.upper, e.label)].push_back(static_cast<std::uint32_t>(i));
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    for (auto& [key, users] : slot_users)
        for (std::size_t x = 0; x < users.size(); ++x)
            for (std::size_t y = x + 1; y < users.size(); ++y)
                pairs.push_back({std::min(users[x], users[y]), std::max(users[x], users[y])});
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    for (auto [i, j] : pairs) {
        const double joint = joint_probability(copies[i], copies[j]);
        var += 2.0 * (joint - pi[i] * pi[j]);
    }
    return var;
}

// Exact distribution of the copy count at tiny n, by full enumeration of the
// sample space.
struct ExactLaw {
    std::vector<double> pmf;  // pmf[k] = P(W = k)
    double mean = 0.0;
    double variance = 0.0;

    double prob(std::size_t k) const { return k < pmf.size() ? pmf[k] : 0.0; }
};

inline ExactLaw exact_law(const PatternGraph& hg, std::uint32_t n, std::uint32_t m,
                          double graph_budget = 1e8, double copy_budget = 1e6) {
    const auto copies = enumerate_copies(hg, n, m, copy_budget);
    ExactLaw law;
    for_each_graph(n, m, [&](const AttachmentGraph& g, double prob) {
        std::size_t w = 0;
        for (const auto& c : copies) w += contains_copy(g, c) ? 1 : 0;
        if (w >= law.pmf.size()) law.pmf.resize(w + 1, 0.0);
        law.pmf[w] += prob;
    }, graph_budget);
    double ex = 0.0, ex2 = 0.0;
    for (std::size_t k = 0; k < law.pmf.size(); ++k) {
        ex += static_cast<double>(k) * law.pmf[k];
        ex2 += static_cast<double>(k) * static_cast<double>(k) * law.pmf[k];
    }
    law.mean = ex;
    law.variance = ex2 - ex * ex;
    return law;
}

// Exact mean of the cycle count for the two lengths with elementary formulas:
//   l=2: C(m,2) * sum_{j=2}^n 1/(j-1)
//   l=3: m^2(m-1) * sum_{k=3}^n (k-2)/(k-1)^2   (triple sum collapsed over i<j)
inline double closed_form_cycle_mean(std::uint32_t len, std::uint32_t n, std::uint32_t m) {
    if (len == 2) {
        double harmonic = 0.0;
        for (std::uint32_t j = 2; j <= n; ++j) harmonic += 1.0 / static_cast<double>(j - 1);
        return 0.5 * static_cast<double>(m) * static_cast<double>(m - 1) * harmonic;
    }
    if (len == 3) {
        double s = 0.0;
        for (std::uint32_t k = 3; k <= n; ++k)
            s += static_cast<double>(k - 2) /
                 (static_cast<double>(k - 1) * static_cast<double>(k - 1));
        return static_cast<double>(m) * static_cast<double>(m) * static_cast<double>(m - 1) * s;
    }
    throw std::invalid_argument("closed form available for cycle lengths 2 and 3 only");
}

// CSV of Gamma: vertices, labelled edges, mark sequence, probability.
inline void write_copies_csv(std::ostream& os, const PatternGraph& hg, std::uint32_t n,
                             std::uint32_t m, double budget = 1e8) {
    os << "vertices,labels,marks,probability\n";
    for_each_copy(hg, n, m, [&](const PotentialCopy& c) {
        for (std::size_t i = 0; i < c.vertices.size(); ++i)
            os << (i ? " " : "") << c.vertices[i];
        os << ",";
        for (std::size_t i = 0; i < c.edges.size(); ++i)
            os << (i ? " " : "") << c.edges[i].upper << ":" << c.edges[i].label << ":"
               << c.edges[i].lower;
        os << ",";
        const auto b = mark_sequence(c);
        for (std::size_t i = 0; i < b.size(); ++i) os << (i ? " " : "") << b[i];
        os << "," << copy_probability(c) << "\n";
    }, budget);
}

}  // namespace uag

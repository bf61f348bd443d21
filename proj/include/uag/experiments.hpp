#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "uag/copies.hpp"
#include "uag/counting.hpp"
#include "uag/enumerate.hpp"
#include "uag/graph.hpp"
#include "uag/pattern.hpp"
#include "uag/rng.hpp"
#include "uag/stats.hpp"

namespace uag {

// Exact check of Var(W) against the slot-decomposition lower bound
// sum over slots of Var(E[W | slot]); the edges are independent, so the
// inequality must hold with the conditional means computed slot by slot.
struct VarianceDecomposition {
    double var_w = 0.0;
    double lower = 0.0;
};

inline VarianceDecomposition variance_decomposition_check(const PatternGraph& hg,
                                                          std::uint32_t n, std::uint32_t m,
                                                          double graph_budget = 1e8,
                                                          double copy_budget = 1e6) {
    const auto gamma = enumerate_copies(hg, n, m, copy_budget);
    const std::size_t slot_count = static_cast<std::size_t>(n >= 2 ? (n - 1) * m : 0);
    std::vector<std::vector<double>> cell(slot_count);  // [slot][recipient-1] = E[W; slot=i]
    for (Vertex j = 2; j <= n; ++j)
        for (Label a = 1; a <= m; ++a)
            cell[static_cast<std::size_t>(j - 2) * m + (a - 1)].assign(j - 1, 0.0);
    double ew = 0.0, ew2 = 0.0;
    for_each_graph(n, m, [&](const AttachmentGraph& g, double p) {
        double w = 0.0;
        for (const auto& c : gamma) w += contains_copy(g, c) ? 1.0 : 0.0;
        ew += p * w;
        ew2 += p * w * w;
        for (Vertex j = 2; j <= n; ++j)
            for (Label a = 1; a <= m; ++a)
                cell[static_cast<std::size_t>(j - 2) * m + (a - 1)][g.recipient(j, a) - 1] +=
                    p * w;
    }, graph_budget);
    VarianceDecomposition out;
    out.var_w = ew2 - ew * ew;
    for (Vertex j = 2; j <= n; ++j)
        for (Label a = 1; a <= m; ++a) {
            const auto& sums = cell[static_cast<std::size_t>(j - 2) * m + (a - 1)];
            const double fan = static_cast<double>(j - 1);
            for (const double s : sums) {
                const double cond = s * fan;  // E[W | slot = i]
                out.lower += (cond - ew) * (cond - ew) / fan;
            }
        }
    return out;
}

// ---------------------------------------------------------------------------
// Pendant-copy trajectories

// Growth of H = core + one pendant edge against its driver: each copy of the
// core sprouts pendant edges at rate r*m per log-unit of time, so
// W_n / log n - r*m*W'_n should shrink once W'_n stabilizes.
struct TailResult {
    std::vector<std::uint32_t> checkpoints;
    std::uint32_t r = 0;  // attachment points equivalent to the chosen one
    std::vector<std::vector<double>> scaled_w;        // [replica][cp]: W / log n
    std::vector<std::vector<std::uint64_t>> core_w;   // [replica][cp]
    std::vector<std::vector<double>> d;               // scaled_w - r*m*core_w
    std::vector<double> mean_abs_d;                   // [cp]
};

inline TailResult tail_experiment(const PatternGraph& core, Vertex attach,
                                  const std::vector<std::uint32_t>& checkpoints,
                                  std::uint32_t m, std::uint32_t R, std::uint64_t seed,
                                  std::uint32_t threads = 1) {
    const auto cls = classify(core);
    if (cls.kind != PatternKind::multicyclic || !cls.leaf_free)
        throw std::invalid_argument("core must be multicyclic and leaf-free");
    if (checkpoints.empty() || R < 1) throw std::invalid_argument("need checkpoints and replicas");
    const PatternGraph h = with_pendant(core, attach);
    std::uint32_t r = 0;
    for (Vertex v = 1; v <= core.h; ++v)
        if (isomorphic(with_pendant(core, v), h)) ++r;

    TailResult out;
    out.checkpoints = checkpoints;
    out.r = r;
    out.scaled_w.assign(R, {});
    out.core_w.assign(R, {});
    out.d.assign(R, {});
    const std::uint32_t n_max = checkpoints.back();
    const std::vector<PatternGraph> patterns{h, core};
    detail::parallel_replicas(R, threads, [&](std::uint32_t i) {
        thread_local AttachmentGraph g;
        regenerate(g, n_max, m, derive_seed(seed, i));
        const auto counts = incremental_counts(g, patterns, checkpoints);
        auto& sw = out.scaled_w[i];
        auto& cw = out.core_w[i];
        auto& di = out.d[i];
        for (const auto& cv : counts) {
            const double scaled = static_cast<double>(cv.counts[0]) / std::log(cv.n);
            sw.push_back(scaled);
            cw.push_back(cv.counts[1]);
            di.push_back(scaled - static_cast<double>(r) * m * static_cast<double>(cv.counts[1]));
        }
    });
    out.mean_abs_d.assign(checkpoints.size(), 0.0);
    for (std::uint32_t i = 0; i < R; ++i)
        for (std::size_t c = 0; c < checkpoints.size(); ++c)
            out.mean_abs_d[c] += std::abs(out.d[i][c]) / static_cast<double>(R);
    return out;
}

// ---------------------------------------------------------------------------
// Bernoulli law of large numbers

struct LlnResult {
    std::vector<std::uint64_t> checkpoints;
    std::vector<double> sum_p;                // per checkpoint
    std::vector<std::vector<double>> ratios;  // [replica][cp]: sum I / sum p
};

// Independent I_i ~ Bernoulli(p(i)), reporting sum I / sum p at checkpoints.
template <typename P>
LlnResult lln_check(P&& p, const std::vector<std::uint64_t>& checkpoints, std::uint32_t R,
                    std::uint64_t seed) {
    if (checkpoints.empty() || R < 1) throw std::invalid_argument("need checkpoints and replicas");
    for (std::size_t i = 1; i < checkpoints.size(); ++i)
        if (checkpoints[i] <= checkpoints[i - 1])
            throw std::invalid_argument("checkpoints must be strictly increasing");
    LlnResult out;
    out.checkpoints = checkpoints;
    const std::uint64_t horizon = checkpoints.back();
    {
        double acc = 0.0;
        std::uint64_t next = 0;
        for (std::uint64_t i = 1; i <= horizon; ++i) {
            const double pi = p(i);
            if (pi < 0.0 || pi > 1.0) throw std::invalid_argument("p(i) must lie in [0,1]");
            acc += pi;
            if (i == checkpoints[next]) {
                out.sum_p.push_back(acc);
                ++next;
            }
        }
        if (out.sum_p.front() <= 0.0)
            throw std::invalid_argument("sum of p must be positive by the first checkpoint");
    }
    out.ratios.assign(R, {});
    for (std::uint32_t rep = 0; rep < R; ++rep) {
        const std::uint64_t rs = derive_seed(seed, rep);
        double hits = 0.0;
        std::uint64_t next = 0;
        for (std::uint64_t i = 1; i <= horizon; ++i) {
            const double u = to_unit_double(mix64(rs + i * 0x9e3779b97f4a7c15ULL));
            if (u < p(i)) hits += 1.0;
            if (i == checkpoints[next]) {
                out.ratios[rep].push_back(hits / out.sum_p[next]);
                ++next;
            }
        }
    }
    return out;
}

}  // namespace uag

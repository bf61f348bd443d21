// Shared test helpers: chi-square tail probabilities for frequency checks and
// a catalog of all non-isomorphic trees up to a vertex budget.
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "uag/pattern.hpp"

namespace test_support {

// Regularized upper incomplete gamma Q(a, x): series for x < a+1, continued
// fraction otherwise (Lentz).  Good to ~1e-12 over the range tests use.
inline double gamma_q(double a, double x) {
    if (!(a > 0) || x < 0) throw std::invalid_argument("gamma_q domain");
    if (x == 0) return 1.0;
    const double lg = std::lgamma(a);
    if (x < a + 1.0) {
        double term = 1.0 / a, sum = term;
        for (int k = 1; k < 500; ++k) {
            term *= x / (a + k);
            sum += term;
            if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
        }
        return 1.0 - sum * std::exp(-x + a * std::log(x) - lg);
    }
    double b = x + 1.0 - a, c = 1e300, d = 1.0 / b, f = d;
    for (int k = 1; k < 500; ++k) {
        const double an = -k * (k - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < 1e-300) d = 1e-300;
        c = b + an / c;
        if (std::fabs(c) < 1e-300) c = 1e-300;
        d = 1.0 / d;
        const double delta = d * c;
        f *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return f * std::exp(-x + a * std::log(x) - lg);
}

// Survival probability of a chi-square statistic with df degrees of freedom.
inline double chi2_pvalue(double df, double stat) { return gamma_q(df / 2.0, stat / 2.0); }

inline double chi2_stat(const std::vector<std::uint64_t>& observed,
                        const std::vector<double>& expected) {
    double s = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double d = static_cast<double>(observed[i]) - expected[i];
        s += d * d / expected[i];
    }
    return s;
}

// Every labelled tree on h vertices comes from a Pruefer sequence of length
// h-2; deduping by isomorphism yields the unlabelled catalog (1,1,2,3,6 trees
// for h = 2..6).
inline std::vector<uag::PatternGraph> tree_catalog(std::uint32_t max_vertices) {
    std::vector<uag::PatternGraph> cat;
    for (std::uint32_t h = 2; h <= max_vertices; ++h) {
        std::vector<std::uint32_t> seq(h >= 2 ? h - 2 : 0, 1);
        for (;;) {
            // decode: repeatedly join the smallest leaf to the next code entry
            std::vector<std::uint32_t> degree(h + 1, 1);
            for (auto v : seq) ++degree[v];
            std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
            std::vector<bool> used(h + 1, false);
            auto code = seq;
            for (auto v : code) {
                for (std::uint32_t leaf = 1; leaf <= h; ++leaf)
                    if (degree[leaf] == 1 && !used[leaf]) {
                        edges.emplace_back(leaf, v);
                        used[leaf] = true;
                        --degree[v];
                        break;
                    }
            }
            std::uint32_t a = 0, b = 0;
            for (std::uint32_t v = 1; v <= h; ++v)
                if (!used[v] && degree[v] == 1) (a ? b : a) = v;
            edges.emplace_back(a, b);

            auto t = uag::make_pattern(h, edges, "tree");
            bool fresh = true;
            for (const auto& seen : cat)
                if (seen.h == h && uag::isomorphic(seen, t)) {
                    fresh = false;
                    break;
                }
            if (fresh) cat.push_back(std::move(t));

            // next sequence in lexicographic order
            std::size_t i = seq.size();
            while (i > 0 && seq[i - 1] == h) seq[--i] = 1;
            if (i == 0) break;
            ++seq[i - 1];
        }
    }
    return cat;
}

}  // namespace test_support

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "uag/copies.hpp"
#include "uag/counting.hpp"
#include "uag/graph.hpp"
#include "uag/pattern.hpp"
#include "uag/rng.hpp"

namespace uag {

// Copy counts over independent replicas; replica i is reproducible from
// derive_seed(seed, i) alone.
struct SampleSet {
    std::vector<std::uint64_t> values;
    std::uint32_t n = 0;
    std::uint32_t m = 0;
    std::string pattern;
    std::uint64_t seed = 0;

    std::size_t R() const { return values.size(); }
};

inline double sample_mean(const SampleSet& s) {
    double acc = 0.0;
    for (const auto v : s.values) acc += static_cast<double>(v);
    return acc / static_cast<double>(s.values.size());
}

inline double sample_variance(const SampleSet& s) {
    if (s.values.size() < 2) return 0.0;
    const double mean = sample_mean(s);
    double acc = 0.0;
    for (const auto v : s.values) {
        const double d = static_cast<double>(v) - mean;
        acc += d * d;
    }
    return acc / static_cast<double>(s.values.size() - 1);
}

inline double standard_error(const SampleSet& s) {
    return std::sqrt(sample_variance(s) / static_cast<double>(s.values.size()));
}

namespace detail {

template <typename Body>
void parallel_replicas(std::uint32_t R, std::uint32_t threads, Body&& body) {
    if (threads <= 1) {
        for (std::uint32_t i = 0; i < R; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::uint32_t t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            for (std::uint32_t i = t; i < R; i += threads) body(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace detail

// R independent graphs, counted.  values[i] depends only on (seed, i), so the
// result is identical for any thread count.
inline SampleSet run_mc(const PatternGraph& hg, std::uint32_t n, std::uint32_t m,
                        std::uint32_t R, std::uint64_t seed, std::uint32_t threads = 1) {
    if (R < 1) throw std::invalid_argument("need at least one replica");
    const CopyCounter counter(hg);
    SampleSet s;
    s.values.resize(R);
    s.n = n;
    s.m = m;
    s.pattern = hg.name;
    s.seed = seed;
    detail::parallel_replicas(R, threads, [&](std::uint32_t i) {
        thread_local AttachmentGraph g;
        regenerate(g, n, m, derive_seed(seed, i));
        s.values[i] = counter.count(g);
    });
    return s;
}

// Counts several cycle lengths on the same R graphs.
inline std::vector<SampleSet> run_mc_cycles(const std::vector<std::uint32_t>& lengths,
                                            std::uint32_t n, std::uint32_t m, std::uint32_t R,
                                            std::uint64_t seed, std::uint32_t threads = 1) {
    if (R < 1) throw std::invalid_argument("need at least one replica");
    if (lengths.empty()) throw std::invalid_argument("need at least one cycle length");
    std::vector<SampleSet> out(lengths.size());
    for (std::size_t j = 0; j < lengths.size(); ++j) {
        out[j].values.resize(R);
        out[j].n = n;
        out[j].m = m;
        out[j].pattern = "cycle:" + std::to_string(lengths[j]);
        out[j].seed = seed;
    }
    bool any_long = false;
    for (const auto l : lengths) any_long = any_long || l >= 3;
    detail::parallel_replicas(R, threads, [&](std::uint32_t i) {
        thread_local AttachmentGraph g;
        regenerate(g, n, m, derive_seed(seed, i));
        NeighborIndex ix;
        if (any_long) ix = build_neighbor_index(g);
        for (std::size_t j = 0; j < lengths.size(); ++j)
            out[j].values[i] = count_cycles(g, lengths[j], any_long ? &ix : nullptr);
    });
    return out;
}

// ---------------------------------------------------------------------------
// Distances

// TV distance between a pmf on {0,1,...} and Po(lambda); the Poisson mass
// beyond the pmf's support enters exactly as 1 - CDF.
inline double tv_to_poisson(const std::vector<double>& pmf, double lambda) {
    if (lambda <= 0.0) throw std::invalid_argument("lambda must be positive");
    double q = std::exp(-lambda);
    double sum_abs = 0.0, sum_q = 0.0;
    for (std::size_t k = 0; k < pmf.size(); ++k) {
        sum_abs += std::abs(pmf[k] - q);
        sum_q += q;
        q *= lambda / static_cast<double>(k + 1);
    }
    return 0.5 * (sum_abs + (1.0 - sum_q));
}

inline double tv_to_poisson(const ExactLaw& law, double lambda) {
    return tv_to_poisson(law.pmf, lambda);
}

inline double tv_to_poisson(const SampleSet& s, double lambda) {
    const std::uint64_t top = *std::max_element(s.values.begin(), s.values.end());
    std::vector<double> pmf(top + 1, 0.0);
    const double w = 1.0 / static_cast<double>(s.values.size());
    for (const auto v : s.values) pmf[v] += w;
    return tv_to_poisson(pmf, lambda);
}

inline double poisson_pmf(std::uint64_t k, double lambda) {
    return std::exp(static_cast<double>(k) * std::log(lambda) - lambda -
                    std::lgamma(static_cast<double>(k) + 1.0));
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Inverse standard normal CDF (Wichura's rational approximations; relative
// error below 1e-15 across (0,1)).
inline double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("quantile needs p in (0,1)");
    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                     6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
                   1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
                 1.3314166789178437745e+2) * r + 3.3871328727963666080e+0) /
               (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                     3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
                   5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
                 4.2313330701600911252e+1) * r + 1.0);
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                    2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
                  3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
                4.63033784615654529590e+0) * r + 1.42343711074968357734e+0) /
              (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                    1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                  6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
                2.05319162663775882187e+0) * r + 1.0);
    } else {
        r -= 5.0;
        val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                    1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                  2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
                5.46378491116411436990e+0) * r + 6.65790464350110377720e+0) /
              (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                    1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                  1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
                5.99832206555887937690e-1) * r + 1.0);
    }
    return q < 0.0 ? -val : val;
}

namespace detail {

inline std::vector<double> standardized_sorted(const SampleSet& s, double mu, double sigma) {
    if (sigma <= 0.0) throw std::invalid_argument("sigma must be positive");
    std::vector<double> z;
    z.reserve(s.values.size());
    for (const auto v : s.values) z.push_back((static_cast<double>(v) - mu) / sigma);
    std::sort(z.begin(), z.end());
    return z;
}

}  // namespace detail

// sup |empirical CDF - Phi| over the standardized samples, evaluating the
// step function from both sides.
inline double kolmogorov_to_normal(const SampleSet& s, double mu, double sigma) {
    const auto z = detail::standardized_sorted(s, mu, sigma);
    const double r = static_cast<double>(z.size());
    double d = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double phi = normal_cdf(z[i]);
        d = std::max(d, phi - static_cast<double>(i) / r);
        d = std::max(d, static_cast<double>(i + 1) / r - phi);
    }
    return d;
}

// Empirical 1-Wasserstein distance to N(0,1) via the quantile coupling.
inline double wasserstein_to_normal(const SampleSet& s, double mu, double sigma) {
    const auto z = detail::standardized_sorted(s, mu, sigma);
    const double r = static_cast<double>(z.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i)
        acc += std::abs(z[i] - normal_quantile((static_cast<double>(i) + 0.5) / r));
    return acc / r;
}

// ---------------------------------------------------------------------------
// Growth-rate fits

enum class RateModel { log_power, power };  // statistic ~ a (log n)^p or a n^p

struct RateFit {
    RateModel model = RateModel::log_power;
    std::vector<double> n;
    std::vector<double> statistic;
    double p = 0.0;          // fitted exponent
    double intercept = 0.0;  // log a
    double residual = 0.0;   // rms residual of the log-log fit
};

// Least squares of log(statistic) against log(log n) or log(n).
inline RateFit fit_log_power(const std::vector<double>& ns, const std::vector<double>& stats,
                             RateModel model) {
    if (ns.size() != stats.size() || ns.size() < 4)
        throw std::invalid_argument("need at least 4 grid points");
    for (std::size_t i = 1; i < ns.size(); ++i)
        if (ns[i] <= ns[i - 1]) throw std::invalid_argument("grid must be strictly increasing");
    RateFit fit;
    fit.model = model;
    fit.n = ns;
    fit.statistic = stats;
    std::vector<double> x(ns.size()), y(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) {
        if (stats[i] <= 0.0) throw std::invalid_argument("statistic must be positive");
        if (ns[i] <= (model == RateModel::log_power ? std::exp(1.0) : 0.0))
            throw std::invalid_argument("grid value too small for the model");
        x[i] = model == RateModel::log_power ? std::log(std::log(ns[i])) : std::log(ns[i]);
        y[i] = std::log(stats[i]);
    }
    const double k = static_cast<double>(ns.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    fit.p = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    fit.intercept = (sy - fit.p * sx) / k;
    double rss = 0.0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const double e = y[i] - (fit.intercept + fit.p * x[i]);
        rss += e * e;
    }
    fit.residual = std::sqrt(rss / k);
    return fit;
}

}  // namespace uag

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "uag/copies.hpp"
#include "uag/counting.hpp"
#include "uag/enumerate.hpp"
#include "uag/graph.hpp"
#include "uag/pattern.hpp"
#include "uag/rng.hpp"

namespace uag {

// Relation of beta to a fixed alpha: minus if some slot of alpha points
// elsewhere in beta (forcing alpha kills beta), plus if beta shares a
// labelled edge compatibly, independent if their slot sets are disjoint.
enum class PairClass { plus, minus, independent };

inline PairClass classify_pair(const PotentialCopy& alpha, const PotentialCopy& beta) {
    bool shared = false;
    for (const auto& ea : alpha.edges)
        for (const auto& eb : beta.edges)
            if (ea.upper == eb.upper && ea.label == eb.label) {
                if (ea.lower != eb.lower) return PairClass::minus;
                shared = true;
            }
    return shared ? PairClass::plus : PairClass::independent;
}

struct PairPartition {
    std::vector<std::uint32_t> plus, minus, independent;
};

// Partitions gamma relative to gamma[alpha]; alpha itself lands nowhere.
inline PairPartition classify_pairs(std::size_t alpha, const std::vector<PotentialCopy>& gamma) {
    PairPartition part;
    for (std::size_t b = 0; b < gamma.size(); ++b) {
        if (b == alpha) continue;
        switch (classify_pair(gamma[alpha], gamma[b])) {
            case PairClass::plus: part.plus.push_back(static_cast<std::uint32_t>(b)); break;
            case PairClass::minus: part.minus.push_back(static_cast<std::uint32_t>(b)); break;
            case PairClass::independent:
                part.independent.push_back(static_cast<std::uint32_t>(b));
                break;
        }
    }
    return part;
}

// G with alpha's slots overwritten so that alpha is present.
inline AttachmentGraph force_copy(const AttachmentGraph& g, const PotentialCopy& alpha) {
    AttachmentGraph forced = g;
    for (const auto& e : alpha.edges) forced.recipient_ref(e.upper, e.label) = e.lower;
    return forced;
}

// Size-bias coupling: all slots outside alpha shared, alpha's slots forced in
// one graph and freshly random in the other.
struct CoupledPair {
    AttachmentGraph base;
    AttachmentGraph forced;
    PotentialCopy alpha;
};

inline CoupledPair size_bias_pair(const PotentialCopy& alpha, std::uint32_t n, std::uint32_t m,
                                  std::uint64_t seed) {
    CoupledPair cp;
    cp.base = generate(n, m, seed);
    cp.forced = force_copy(cp.base, alpha);
    cp.alpha = alpha;
    return cp;
}

// ---------------------------------------------------------------------------
// Poisson bounds

struct SteinBoundReport {
    double lambda = 0.0;      // sum of copy probabilities
    double term_sq = 0.0;     // sum pi^2
    double term_plus = 0.0;   // plus pairs: E[1a 1b]        (tight: minus pi*pi)
    double term_minus = 0.0;  // minus pairs: pi_a pi_b
    double prefactor = 0.0;   // min{1,1/lambda} or the multivariate factor
    double bound = 0.0;
    std::size_t gamma_size = 0;
    bool tight = false;
    std::vector<double> class_lambdas;  // multivariate only: one per class
};

namespace detail {

// Shared-slot pair sums over an explicit Gamma.  Ordered-pair totals, i.e.
// each unordered dependent pair contributes twice, matching the double sums.
inline void accumulate_pair_terms(const std::vector<PotentialCopy>& gamma,
                                  const std::vector<double>& pi, bool tight,
                                  double& term_plus, double& term_minus) {
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> slot_users;
    for (std::size_t i = 0; i < gamma.size(); ++i)
        for (const auto& e : gamma[i].edges)
            slot_users[slot_key(e.upper, e.label)].push_back(static_cast<std::uint32_t>(i));
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    for (auto& [key, users] : slot_users)
        for (std::size_t x = 0; x < users.size(); ++x)
            for (std::size_t y = x + 1; y < users.size(); ++y)
                pairs.push_back({std::min(users[x], users[y]), std::max(users[x], users[y])});
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    term_plus = 0.0;
    term_minus = 0.0;
    for (auto [i, j] : pairs) {
        switch (classify_pair(gamma[i], gamma[j])) {
            case PairClass::plus: {
                const double joint = joint_probability(gamma[i], gamma[j]);
                term_plus += 2.0 * (tight ? joint - pi[i] * pi[j] : joint);
                break;
            }
            case PairClass::minus:
                term_minus += 2.0 * pi[i] * pi[j];
                break;
            case PairClass::independent:
                break;  // unreachable: pairs share a slot
        }
    }
}

inline SteinBoundReport bound_from_gamma(const std::vector<PotentialCopy>& gamma, bool tight) {
    SteinBoundReport rep;
    rep.tight = tight;
    rep.gamma_size = gamma.size();
    std::vector<double> pi(gamma.size());
    for (std::size_t i = 0; i < gamma.size(); ++i) {
        pi[i] = copy_probability(gamma[i]);
        rep.lambda += pi[i];
        rep.term_sq += pi[i] * pi[i];
    }
    accumulate_pair_terms(gamma, pi, tight, rep.term_plus, rep.term_minus);
    return rep;
}

}  // namespace detail

// min{1,1/lambda} (sum pi^2 + plus term + minus term); tight uses the
// gain/loss form of the plus term, which is exact here because a forced
// alpha annihilates every conflicting copy.
inline SteinBoundReport poisson_bound(const PatternGraph& hg, std::uint32_t n, std::uint32_t m,
                                      bool tight = false, double budget = 1e5) {
    auto rep = detail::bound_from_gamma(enumerate_copies(hg, n, m, budget), tight);
    rep.prefactor = rep.lambda > 1.0 ? 1.0 / rep.lambda : 1.0;
    rep.bound = rep.prefactor * (rep.term_sq + rep.term_plus + rep.term_minus);
    return rep;
}

// Joint cycle-count vector vs independent Poissons: same sums over the union
// of the per-length copy sets, prefactor (1 + 2 log+(e min_j lambda_j)) /
// (e min_j lambda_j).
inline SteinBoundReport multivariate_bound(const std::vector<std::uint32_t>& lengths,
                                           std::uint32_t n, std::uint32_t m, bool tight = false,
                                           double budget = 1e5) {
    if (lengths.empty()) throw std::invalid_argument("need at least one cycle length");
    std::vector<PotentialCopy> gamma;
    std::vector<double> lambdas;
    for (const std::uint32_t l : lengths) {
        const auto part = enumerate_copies(pattern_cycle(l), n, m, budget);
        double lam = 0.0;
        for (const auto& c : part) lam += copy_probability(c);
        lambdas.push_back(lam);
        gamma.insert(gamma.end(), part.begin(), part.end());
    }
    auto rep = detail::bound_from_gamma(gamma, tight);
    rep.class_lambdas = lambdas;
    const double lmin = *std::min_element(lambdas.begin(), lambdas.end());
    const double x = std::exp(1.0) * lmin;
    rep.prefactor = (1.0 + 2.0 * std::max(0.0, std::log(x))) / x;
    rep.bound = rep.prefactor * (rep.term_sq + rep.term_plus + rep.term_minus);
    return rep;
}

// ---------------------------------------------------------------------------
// Size-bias sampling of (W, W^s)

// Draws K proportional to copy probability, couples (G, G^K), and returns the
// copy counts of both graphs; the forced count equals sum_{beta != K} J + 1.
class SizeBiasSampler {
  public:
    SizeBiasSampler(const PatternGraph& hg, std::uint32_t n, std::uint32_t m,
                    double budget = 1e6)
        : counter_(hg), n_(n), m_(m), gamma_(enumerate_copies(hg, n, m, budget)) {
        cum_.reserve(gamma_.size());
        double acc = 0.0;
        for (const auto& c : gamma_) {
            acc += copy_probability(c);
            cum_.push_back(acc);
        }
        if (gamma_.empty() || acc <= 0.0)
            throw std::invalid_argument("pattern has no potential copies at this (n, m)");
        mu_ = acc;
    }

    double mean() const { return mu_; }
    std::size_t gamma_size() const { return gamma_.size(); }

    std::pair<std::uint64_t, std::uint64_t> sample(std::uint64_t seed) const {
        const AttachmentGraph base = generate(n_, m_, derive_seed(seed, 1));
        const double u = to_unit_double(mix64(derive_seed(seed, 2))) * mu_;
        const std::size_t k = static_cast<std::size_t>(
            std::lower_bound(cum_.begin(), cum_.end(), u) - cum_.begin());
        const AttachmentGraph forced = force_copy(base, gamma_[std::min(k, gamma_.size() - 1)]);
        return {counter_.count(base), counter_.count(forced)};
    }

  private:
    CopyCounter counter_;
    std::uint32_t n_, m_;
    std::vector<PotentialCopy> gamma_;
    std::vector<double> cum_;
    double mu_ = 0.0;
};

inline std::pair<std::uint64_t, std::uint64_t> sample_W_Ws(const PatternGraph& hg,
                                                           std::uint32_t n, std::uint32_t m,
                                                           std::uint64_t seed) {
    return SizeBiasSampler(hg, n, m).sample(seed);
}

// ---------------------------------------------------------------------------
// Exact coupling verification at tiny n

struct CouplingCheckReport {
    double max_deviation = 0.0;  // max over alpha and indicator masks
    std::size_t gamma_size = 0;
    std::size_t graphs = 0;
};

// Verifies, by full enumeration, that the law of the non-alpha indicators in
// the forced graph equals the conditional law given alpha present.  The base
// graph's own alpha slots play the role of the fresh randomness, so the graph
// enumeration covers the coupling's whole probability space.
inline CouplingCheckReport coupling_check(const PatternGraph& hg, std::uint32_t n,
                                          std::uint32_t m, double graph_budget = 1e8) {
    const auto gamma = enumerate_copies(hg, n, m, 64.0);
    if (gamma.empty()) throw std::invalid_argument("no potential copies to check");
    CouplingCheckReport rep;
    rep.gamma_size = gamma.size();

    std::vector<double> pi(gamma.size());
    for (std::size_t i = 0; i < gamma.size(); ++i) pi[i] = copy_probability(gamma[i]);

    auto mask_of = [&](const AttachmentGraph& g, std::size_t skip) {
        std::uint64_t mask = 0;
        std::uint64_t bit = 1;
        for (std::size_t b = 0; b < gamma.size(); ++b) {
            if (b == skip) continue;
            if (contains_copy(g, gamma[b])) mask |= bit;
            bit <<= 1;
        }
        return mask;
    };

    for (std::size_t a = 0; a < gamma.size(); ++a) {
        std::map<std::uint64_t, double> forced_law, cond_law;
        for_each_graph(n, m, [&](const AttachmentGraph& g, double p) {
            forced_law[mask_of(force_copy(g, gamma[a]), a)] += p;
            if (contains_copy(g, gamma[a])) cond_law[mask_of(g, a)] += p / pi[a];
            ++rep.graphs;
        }, graph_budget);
        for (const auto& [mask, p] : forced_law) {
            const auto it = cond_law.find(mask);
            const double q = it == cond_law.end() ? 0.0 : it->second;
            rep.max_deviation = std::max(rep.max_deviation, std::abs(p - q));
        }
        for (const auto& [mask, q] : cond_law)
            if (!forced_law.count(mask)) rep.max_deviation = std::max(rep.max_deviation, q);
    }
    rep.graphs /= gamma.size();
    return rep;
}

// ---------------------------------------------------------------------------
// Normal-approximation error terms

struct NormalBoundReport {
    double mu = 0.0;
    double sigma2 = 0.0;
    double var_cond = 0.0;     // Var(E[W^s - W | W])
    double second_moment = 0.0;  // E[(W^s - W)^2]
    double bound = 0.0;
    bool exact = false;  // false: Monte Carlo proxy (conditional term binned by W)
};

namespace detail {

inline double normal_bound_value(double mu, double sigma2, double var_cond,
                                 double second_moment) {
    const double sigma = std::sqrt(sigma2);
    return mu / sigma2 * std::sqrt(2.0 / 3.14159265358979323846) * std::sqrt(var_cond) +
           mu / (sigma2 * sigma) * second_moment;
}

}  // namespace detail

// Exact evaluation of both error terms by enumerating (graph, K).
inline NormalBoundReport wasserstein_bound_exact(const PatternGraph& hg, std::uint32_t n,
                                                 std::uint32_t m, double graph_budget = 1e8,
                                                 double copy_budget = 1e4) {
    const auto gamma = enumerate_copies(hg, n, m, copy_budget);
    std::vector<double> pi(gamma.size());
    double mu = 0.0;
    for (std::size_t i = 0; i < gamma.size(); ++i) {
        pi[i] = copy_probability(gamma[i]);
        mu += pi[i];
    }
    if (mu <= 0.0) throw std::invalid_argument("pattern has mean zero at this (n, m)");

    // per W value: probability, and mixture mass/sum of (Ws - W)
    std::map<std::uint64_t, std::array<double, 2>> byW;  // {P(W=w), sum weight*(Ws-W)}
    double e_d2 = 0.0, e_d = 0.0;
    double ew = 0.0, ew2 = 0.0;
    for_each_graph(n, m, [&](const AttachmentGraph& g, double p) {
        std::uint64_t w = 0;
        for (const auto& c : gamma) w += contains_copy(g, c) ? 1 : 0;
        auto& cell = byW[w];
        cell[0] += p;
        ew += p * static_cast<double>(w);
        ew2 += p * static_cast<double>(w) * static_cast<double>(w);
        for (std::size_t a = 0; a < gamma.size(); ++a) {
            const AttachmentGraph forced = force_copy(g, gamma[a]);
            std::uint64_t ws = 0;
            for (const auto& c : gamma) ws += contains_copy(forced, c) ? 1 : 0;
            const double d = static_cast<double>(ws) - static_cast<double>(w);
            const double weight = p * pi[a] / mu;
            cell[1] += weight * d;
            e_d += weight * d;
            e_d2 += weight * d * d;
        }
    }, graph_budget);

    NormalBoundReport rep;
    rep.exact = true;
    rep.mu = mu;
    rep.sigma2 = ew2 - ew * ew;
    rep.second_moment = e_d2;
    for (const auto& [w, cell] : byW) {
        const double cond = cell[1] / cell[0];  // E[Ws - W | W = w]
        rep.var_cond += cell[0] * (cond - e_d) * (cond - e_d);
    }
    rep.bound = detail::normal_bound_value(rep.mu, rep.sigma2, rep.var_cond, rep.second_moment);
    return rep;
}

// Monte Carlo proxy for the same terms; the conditional variance is estimated
// by grouping samples on W, which is a labelled approximation, not a bound.
inline NormalBoundReport wasserstein_bound_mc(const PatternGraph& hg, std::uint32_t n,
                                              std::uint32_t m, std::uint32_t R,
                                              std::uint64_t seed, double budget = 1e6) {
    if (R < 2) throw std::invalid_argument("need at least 2 replicas");
    const SizeBiasSampler sampler(hg, n, m, budget);
    std::map<std::uint64_t, std::array<double, 2>> byW;  // {count, sum d}
    double sw = 0.0, sw2 = 0.0, sd = 0.0, sd2 = 0.0;
    for (std::uint32_t i = 0; i < R; ++i) {
        const auto [w, ws] = sampler.sample(derive_seed(seed, i));
        const double d = static_cast<double>(ws) - static_cast<double>(w);
        auto& cell = byW[w];
        cell[0] += 1.0;
        cell[1] += d;
        sw += static_cast<double>(w);
        sw2 += static_cast<double>(w) * static_cast<double>(w);
        sd += d;
        sd2 += d * d;
    }
    NormalBoundReport rep;
    rep.exact = false;
    rep.mu = sampler.mean();
    const double r = static_cast<double>(R);
    rep.sigma2 = (sw2 - sw * sw / r) / (r - 1.0);
    rep.second_moment = sd2 / r;
    const double dbar = sd / r;
    for (const auto& [w, cell] : byW) {
        const double cond = cell[1] / cell[0];
        rep.var_cond += cell[0] / r * (cond - dbar) * (cond - dbar);
    }
    rep.bound = detail::normal_bound_value(rep.mu, rep.sigma2, rep.var_cond, rep.second_moment);
    return rep;
}

}  // namespace uag

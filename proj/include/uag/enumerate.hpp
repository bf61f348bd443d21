#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "uag/graph.hpp"

namespace uag {

// Raised when an exact-enumeration precondition exceeds its budget; carries
// the offending state or copy count.
class BudgetError : public std::runtime_error {
public:
    BudgetError(const std::string& what, double count)
        : std::runtime_error(what), count_(count) {}
    double count() const noexcept { return count_; }

private:
    double count_;
};

// |sample space| of (n, m): prod_{j=2..n} (j-1)^m.
inline double sample_space_size(std::uint32_t n, std::uint32_t m) {
    double s = 1.0;
    for (std::uint32_t j = 2; j <= n; ++j) {
        for (std::uint32_t a = 0; a < m; ++a) s *= static_cast<double>(j - 1);
        if (!std::isfinite(s)) return s;
    }
    return s;
}

// Visits every attainable graph exactly once with its probability
// 1/|sample space|.  f receives (const AttachmentGraph&, double).
template <class F>
void for_each_graph(std::uint32_t n, std::uint32_t m, F&& f, double budget = 1e8) {
    check_model_params(n, m);
    const double states = sample_space_size(n, m);
    if (!(states <= budget))
        throw BudgetError("graph enumeration over budget: " + std::to_string(states) +
                              " states > " + std::to_string(budget),
                          states);
    AttachmentGraph g;
    g.n = n;
    g.m = m;
    g.seed = 0;
    g.slots.assign(static_cast<std::size_t>(n - 1) * m, 1);
    const double prob = 1.0 / states;
    if (g.slots.empty()) {
        f(static_cast<const AttachmentGraph&>(g), prob);
        return;
    }
    std::vector<Vertex> base(g.slots.size());
    {
        std::size_t idx = 0;
        for (Vertex j = 2; j <= n; ++j)
            for (Label a = 1; a <= m; ++a) base[idx++] = j - 1;
    }
    for (;;) {
        f(static_cast<const AttachmentGraph&>(g), prob);
        std::size_t i = g.slots.size();
        for (;;) {
            if (i == 0) return;
            --i;
            if (g.slots[i] < base[i]) {
                ++g.slots[i];
                break;
            }
            g.slots[i] = 1;
        }
    }
}

}  // namespace uag

#pragma once

// Uniform attachment graphs: exact subgraph-count combinatorics, size-bias
// couplings, Poisson/normal approximation bounds, and Monte Carlo harness.

#include "uag/copies.hpp"
#include "uag/counting.hpp"
#include "uag/enumerate.hpp"
#include "uag/experiments.hpp"
#include "uag/graph.hpp"
#include "uag/marks.hpp"
#include "uag/pattern.hpp"
#include "uag/rng.hpp"
#include "uag/serialize.hpp"
#include "uag/stats.hpp"
#include "uag/stein.hpp"

namespace uag {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace uag

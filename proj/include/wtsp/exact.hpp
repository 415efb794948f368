#pragma once

#include <cstdint>

#include "wtsp/core.hpp"

namespace wtsp {

/// Outcome of an exact solver. `cost` is recomputed from `tour` with the
/// matching core cost functional.
struct ExactResult {
  Tour tour;
  double cost = 0.0;
  std::uint64_t nodes_expanded = 0;
};

inline constexpr std::size_t kBruteForceCap = 11;
inline constexpr std::size_t kSubsetDpCap = 22;

/// Enumerates all (n-1)! tours that start at the start city. Among optimal
/// tours the lexicographically smallest one is returned.
ExactResult brute_force_wtsp(const Instance& instance, std::size_t cap = kBruteForceCap);

/// Subset DP for the weighted objective. The prefix weight of a partial tour
/// depends only on the set of cities visited, so (set, last city) is a
/// sufficient state.
ExactResult held_karp_wtsp(const Instance& instance);

/// Optimal classical tour through all cities.
ExactResult exact_tsp(const Instance& instance);

/// Optimal minimum latency path from the start city (no closing edge).
ExactResult exact_mlp(const Instance& instance);

}  // namespace wtsp

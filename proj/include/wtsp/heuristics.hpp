#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "wtsp/core.hpp"
#include "wtsp/rng.hpp"

namespace wtsp {

enum class MutationKind { inversion, exchange, jump };
enum class Fitness { weighted, tsp };

std::string_view to_string(MutationKind kind);
std::string_view to_string(Fitness fitness);
MutationKind parse_mutation(std::string_view name);
Fitness parse_fitness(std::string_view name);

/// Applies a mutation at positions i and j (0-based, both >= 1, i != j).
///   inversion: reverses the segment between the two positions.
///   exchange:  swaps the two cities.
///   jump:      removes the city at i and reinserts it at j.
/// Position 0 (the start city) is never touched.
void mutate_at(std::vector<City>& perm, MutationKind kind, std::size_t i, std::size_t j);

/// Draws an ordered pair of distinct positions from {1..n-1} uniformly and
/// applies `kind`. Tours with fewer than three cities are returned unchanged.
Tour mutate(const Tour& tour, MutationKind kind, Rng& rng);

struct RlsConfig {
  Fitness fitness = Fitness::weighted;
  MutationKind mutation = MutationKind::inversion;
  std::uint64_t budget = 0;  // fitness evaluations; 0 means 1000 * n
  /// Optional wall-clock stopping rule in seconds (0 = off). With a time
  /// limit and budget 0 the run is bounded by time alone.
  double time_limit = 0.0;
  std::uint64_t seed = 0;
  bool record_trace = false;
};

struct TracePoint {
  std::uint64_t evaluation;  // 1-based
  double cost;
};

struct RlsResult {
  Tour best_tour;
  double best_cost = 0.0;  // under the configured fitness
  std::uint64_t evaluations_used = 0;
  std::vector<TracePoint> trace;
};

/// Randomized local search: a uniform random start tour (rotated to begin at
/// the start city), then mutate-and-accept-if-not-worse until the evaluation
/// budget is spent. The initial evaluation counts towards the budget.
RlsResult rls(const Instance& instance, const RlsConfig& config);

/// Percentage deviation (cost / best_known - 1) * 100.
double perf(double cost, double best_known);

}  // namespace wtsp

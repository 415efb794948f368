#include "wtsp/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

namespace wtsp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool better(double candidate, double best) {
  return candidate < best - 1e-9 * std::max(1.0, std::abs(best));
}

void require_cap(const Instance& instance, std::size_t cap, const char* who) {
  if (instance.size() > cap) {
    throw LimitExceeded(std::string(who) + " is limited to " + std::to_string(cap) +
                        " cities, instance has " + std::to_string(instance.size()));
  }
}

// Backward subset DP shared by the three objectives. `step(mask)` is the
// multiplier applied to the edge leaving the current city when the start plus
// the cities in `mask` have been visited; `close` multiplies the returning
// edge (zero for open paths).
//
// Completion costs are computed backwards so that the optimal tour can be
// rebuilt forwards choosing the smallest next city among ties, which gives
// the lexicographically smallest optimum.
ExactResult subset_dp(const Instance& instance,
                      const std::function<double(std::uint32_t)>& step, double close) {
  const std::size_t n = instance.size();
  const City start = instance.start();
  if (n == 1) return {Tour({start}), 0.0, 0};

  std::vector<City> others;
  for (City c = 0; c < n; ++c)
    if (c != start) others.push_back(c);
  const std::size_t m = others.size();
  const std::uint32_t full = (std::uint32_t{1} << m) - 1;

  std::vector<double> g((static_cast<std::size_t>(full) + 1) * m, kInf);
  auto at = [&](std::uint32_t mask, std::size_t j) -> double& { return g[mask * m + j]; };

  std::uint64_t expanded = 0;
  for (std::size_t j = 0; j < m; ++j) at(full, j) = close * instance.distance(others[j], start);

  for (std::uint32_t mask = full; mask-- > 1;) {
    const double mult = step(mask);
    for (std::size_t j = 0; j < m; ++j) {
      if (!(mask >> j & 1U)) continue;
      double best = kInf;
      const auto row = instance.row(others[j]);
      for (std::size_t k = 0; k < m; ++k) {
        if (mask >> k & 1U) continue;
        best = std::min(best, mult * row[others[k]] + at(mask | (1U << k), k));
        ++expanded;
      }
      at(mask, j) = best;
    }
  }

  // forward reconstruction
  std::vector<City> perm{start};
  std::uint32_t mask = 0;
  City current = start;
  while (mask != full) {
    const double mult = step(mask);
    double best = kInf;
    for (std::size_t k = 0; k < m; ++k) {
      if (mask >> k & 1U) continue;
      best = std::min(best, mult * instance.distance(current, others[k]) + at(mask | (1U << k), k));
    }
    const double tol = 1e-9 * std::max(1.0, std::abs(best));
    for (std::size_t k = 0; k < m; ++k) {
      if (mask >> k & 1U) continue;
      if (mult * instance.distance(current, others[k]) + at(mask | (1U << k), k) <= best + tol) {
        mask |= 1U << k;
        current = others[k];
        perm.push_back(current);
        break;
      }
    }
  }
  return {Tour(std::move(perm)), 0.0, expanded};
}

std::vector<double> mask_weights(const Instance& instance) {
  std::vector<City> others;
  for (City c = 0; c < instance.size(); ++c)
    if (c != instance.start()) others.push_back(c);
  const std::size_t m = others.size();
  std::vector<double> w(std::size_t{1} << m, 0.0);
  for (std::uint32_t mask = 1; mask < w.size(); ++mask) {
    const int low = std::countr_zero(mask);
    w[mask] = w[mask & (mask - 1)] + instance.weight(others[low]);
  }
  return w;
}

}  // namespace

ExactResult brute_force_wtsp(const Instance& instance, std::size_t cap) {
  require_cap(instance, cap, "brute_force_wtsp");
  const std::size_t n = instance.size();
  const City start = instance.start();

  std::vector<City> perm{start};
  for (City c = 0; c < n; ++c)
    if (c != start) perm.push_back(c);

  std::vector<City> best_perm = perm;
  double best = weighted_cost(instance, std::span<const City>(perm));
  std::uint64_t visited = 1;
  while (std::next_permutation(perm.begin() + 1, perm.end())) {
    const double cost = weighted_cost(instance, std::span<const City>(perm));
    ++visited;
    if (better(cost, best)) {
      best = cost;
      best_perm = perm;
    }
  }
  Tour tour(std::move(best_perm));
  const double cost = weighted_cost(instance, tour);
  return {std::move(tour), cost, visited};
}

ExactResult held_karp_wtsp(const Instance& instance) {
  require_cap(instance, kSubsetDpCap, "held_karp_wtsp");
  const auto w = mask_weights(instance);
  const double w_start = instance.weight(instance.start());
  auto result = subset_dp(
      instance, [&](std::uint32_t mask) { return w_start + w[mask]; }, instance.total_weight());
  result.cost = weighted_cost(instance, result.tour);
  return result;
}

ExactResult exact_tsp(const Instance& instance) {
  require_cap(instance, kSubsetDpCap, "exact_tsp");
  auto result = subset_dp(instance, [](std::uint32_t) { return 1.0; }, 1.0);
  result.cost = tsp_cost(instance, result.tour);
  return result;
}

ExactResult exact_mlp(const Instance& instance) {
  require_cap(instance, kSubsetDpCap, "exact_mlp");
  const auto n = static_cast<double>(instance.size());
  // after visiting start + mask, the next edge delays every unvisited city
  auto result = subset_dp(
      instance,
      [n](std::uint32_t mask) { return n - 1.0 - static_cast<double>(std::popcount(mask)); },
      0.0);
  result.cost = latency_cost(instance, result.tour);
  return result;
}

}  // namespace wtsp

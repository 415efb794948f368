#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "wtsp/core.hpp"
#include "wtsp/rng.hpp"

namespace testing {

using wtsp::City;
using wtsp::Instance;
using wtsp::Rng;
using wtsp::Tour;

inline std::vector<wtsp::Point> random_points(std::size_t n, Rng& rng, double box = 100.0) {
  std::vector<wtsp::Point> pts(n);
  for (auto& p : pts) p = {rng.uniform(0.0, box), rng.uniform(0.0, box)};
  return pts;
}

inline Instance random_euclidean(std::size_t n, Rng& rng, std::vector<double> weights = {}) {
  if (weights.empty()) weights.assign(n, 1.0);
  return Instance::euclidean(random_points(n, rng), std::move(weights));
}

/// Symmetric matrix with entries in {1, 2}; always metric.
inline Instance random_one_two(std::size_t n, Rng& rng) {
  std::vector<double> m(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m[i * n + j] = m[j * n + i] = 1.0 + rng.below(2);
  return Instance::from_matrix(std::move(m), std::vector<double>(n, 1.0));
}

inline Tour random_tour(std::size_t n, Rng& rng) {
  std::vector<City> p(n);
  std::iota(p.begin(), p.end(), City{0});
  rng.shuffle(std::span<City>(p));
  return Tour(std::move(p));
}

// Direct evaluations written from the definitions, independent of the library.

/// Each leg is charged with the total weight of everything visited before it.
inline double naive_weighted(const Instance& inst, const std::vector<City>& t) {
  double total = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    double carried = 0.0;
    for (std::size_t j = 0; j <= i; ++j) carried += inst.weight(t[j]);
    total += carried * inst.distance(t[i], t[(i + 1) % t.size()]);
  }
  return total;
}

/// Sum over cities of the distance travelled from the first city to reach it.
inline double naive_latency(const Instance& inst, const std::vector<City>& t) {
  double total = 0.0;
  for (std::size_t k = 1; k < t.size(); ++k) {
    double arrival = 0.0;
    for (std::size_t i = 0; i < k; ++i) arrival += inst.distance(t[i], t[i + 1]);
    total += arrival;
  }
  return total;
}

inline std::vector<City> as_vector(const Tour& t) { return {t.begin(), t.end()}; }

/// All tours starting at inst.start(), by std::next_permutation.
template <class F>
void for_each_tour(const Instance& inst, F&& f) {
  std::vector<City> rest;
  for (City c = 0; c < inst.size(); ++c)
    if (c != inst.start()) rest.push_back(c);
  do {
    std::vector<City> t{inst.start()};
    t.insert(t.end(), rest.begin(), rest.end());
    f(t);
  } while (std::next_permutation(rest.begin(), rest.end()));
}

inline double enumerate_min(const Instance& inst, double (*cost)(const Instance&, const std::vector<City>&)) {
  double best = std::numeric_limits<double>::infinity();
  for_each_tour(inst, [&](const std::vector<City>& t) { best = std::min(best, cost(inst, t)); });
  return best;
}

inline double naive_tsp(const Instance& inst, const std::vector<City>& t) {
  double s = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) s += inst.distance(t[i], t[(i + 1) % t.size()]);
  return s;
}

}  // namespace testing

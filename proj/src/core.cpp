#include "wtsp/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wtsp/rng.hpp"

namespace wtsp {

namespace {

void require_dimension(const Instance& instance, std::size_t tour_size) {
  if (tour_size != instance.size()) {
    throw ValidationError("tour has " + std::to_string(tour_size) +
                          " cities but the instance has " +
                          std::to_string(instance.size()));
  }
}

}  // namespace

Instance Instance::euclidean(std::vector<Point> points, std::vector<double> weights,
                             City start, DistanceRounding rounding) {
  const std::size_t n = points.size();
  if (n == 0) throw ValidationError("an instance needs at least one city");
  if (start >= n) throw ValidationError("start city out of range");
  for (const auto& p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw ValidationError("non-finite coordinate");
    }
  }

  Instance inst;
  inst.n_ = n;
  inst.start_ = start;
  inst.rounding_ = rounding;
  inst.dist_.assign(n * n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      double d = std::hypot(points[a].x - points[b].x, points[a].y - points[b].y);
      if (rounding == DistanceRounding::nearest) d = std::nearbyint(d);
      inst.dist_[a * n + b] = d;
      inst.dist_[b * n + a] = d;
    }
  }
  inst.points_ = std::move(points);
  // Rounded distances can violate the triangle inequality by one unit.
  inst.metric_ = rounding == DistanceRounding::none ||
                 !find_triangle_violation(inst.dist_, n).has_value();
  inst.set_weights(std::move(weights));
  return inst;
}

Instance Instance::from_matrix(std::vector<double> matrix, std::vector<double> weights,
                               City start, bool metric) {
  const std::size_t n = weights.size();
  if (n == 0) throw ValidationError("an instance needs at least one city");
  if (matrix.size() != n * n) {
    throw ValidationError("distance matrix must be n*n with n = number of weights");
  }
  if (start >= n) throw ValidationError("start city out of range");
  for (std::size_t a = 0; a < n; ++a) {
    if (matrix[a * n + a] != 0.0) throw ValidationError("distance matrix diagonal must be zero");
    for (std::size_t b = a + 1; b < n; ++b) {
      const double d = matrix[a * n + b];
      if (!std::isfinite(d) || d < 0.0) {
        throw ValidationError("distances must be finite and nonnegative");
      }
      if (d != matrix[b * n + a]) throw ValidationError("distance matrix must be symmetric");
    }
  }
  if (metric) {
    if (auto v = find_triangle_violation(matrix, n)) {
      throw ValidationError("triangle inequality violated: d(" + std::to_string(v->a + 1) +
                            "," + std::to_string(v->c + 1) + ") > d(" +
                            std::to_string(v->a + 1) + "," + std::to_string(v->b + 1) +
                            ") + d(" + std::to_string(v->b + 1) + "," +
                            std::to_string(v->c + 1) + ")");
    }
  }

  Instance inst;
  inst.n_ = n;
  inst.start_ = start;
  inst.metric_ = metric;
  inst.dist_ = std::move(matrix);
  inst.set_weights(std::move(weights));
  return inst;
}

Instance Instance::with_weights(std::vector<double> weights) const {
  Instance copy = *this;
  copy.set_weights(std::move(weights));
  return copy;
}

void Instance::set_weights(std::vector<double> weights) {
  if (weights.size() != n_) {
    throw ValidationError("expected " + std::to_string(n_) + " weights, got " +
                          std::to_string(weights.size()));
  }
  double total = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw ValidationError("weights must be finite and >= 0");
    total += w;
  }
  weights_ = std::move(weights);
  total_weight_ = total;
}

std::optional<TriangleViolation> find_triangle_violation(std::span<const double> m,
                                                         std::size_t n,
                                                         std::size_t exhaustive_limit,
                                                         std::size_t samples,
                                                         std::uint64_t seed) {
  auto check = [&](City a, City b, City c) -> std::optional<TriangleViolation> {
    const double direct = m[a * n + c];
    const double detour = m[a * n + b] + m[b * n + c];
    const double tol = 1e-9 * std::max(1.0, direct);
    if (direct > detour + tol) return TriangleViolation{a, b, c, direct - detour};
    return std::nullopt;
  };

  if (n <= exhaustive_limit) {
    for (City a = 0; a < n; ++a)
      for (City c = a + 1; c < n; ++c)
        for (City b = 0; b < n; ++b) {
          if (b == a || b == c) continue;
          if (auto v = check(a, b, c)) return v;
        }
    return std::nullopt;
  }
  Rng rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    const City a = rng.below(n), b = rng.below(n), c = rng.below(n);
    if (auto v = check(a, b, c)) return v;
  }
  return std::nullopt;
}

bool is_permutation(std::span<const City> perm) {
  std::vector<bool> seen(perm.size(), false);
  for (City c : perm) {
    if (c >= perm.size() || seen[c]) return false;
    seen[c] = true;
  }
  return true;
}

Tour::Tour(std::vector<City> perm) : perm_(std::move(perm)) {
  if (!is_permutation(perm_)) throw ValidationError("tour is not a permutation of its cities");
}

Tour Tour::identity(std::size_t n) {
  std::vector<City> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  return Tour(std::move(perm));
}

double weighted_cost(const Instance& instance, std::span<const City> perm) noexcept {
  const std::size_t n = perm.size();
  if (n < 2) return 0.0;
  double omega = 0.0;
  double cost = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    omega += instance.weight(perm[i]);
    cost += instance.distance(perm[i], perm[i + 1]) * omega;
  }
  omega += instance.weight(perm[n - 1]);
  cost += instance.distance(perm[n - 1], perm[0]) * omega;
  return cost;
}

double weighted_cost(const Instance& instance, const Tour& tour) {
  require_dimension(instance, tour.size());
  return weighted_cost(instance, tour.cities());
}

double tsp_cost(const Instance& instance, std::span<const City> perm) noexcept {
  const std::size_t n = perm.size();
  if (n < 2) return 0.0;
  double len = instance.distance(perm[n - 1], perm[0]);
  for (std::size_t i = 0; i + 1 < n; ++i) len += instance.distance(perm[i], perm[i + 1]);
  return len;
}

double tsp_cost(const Instance& instance, const Tour& tour) {
  require_dimension(instance, tour.size());
  return tsp_cost(instance, tour.cities());
}

double tsp_path_cost(const Instance& instance, const Tour& tour) {
  require_dimension(instance, tour.size());
  double len = 0.0;
  for (std::size_t i = 0; i + 1 < tour.size(); ++i) {
    len += instance.distance(tour[i], tour[i + 1]);
  }
  return len;
}

double latency_cost(const Instance& instance, const Tour& tour) {
  require_dimension(instance, tour.size());
  // edge i (0-based) is on the way to the n-1-i cities that follow it
  const std::size_t n = tour.size();
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    total += static_cast<double>(n - 1 - i) * instance.distance(tour[i], tour[i + 1]);
  }
  return total;
}

PrefixWeights prefix_weights(const Instance& instance, const Tour& tour) {
  require_dimension(instance, tour.size());
  PrefixWeights pw;
  pw.omega.reserve(tour.size());
  double acc = 0.0;
  for (City c : tour) {
    acc += instance.weight(c);
    pw.omega.push_back(acc);
  }
  return pw;
}

CostReport cost_report(const Instance& instance, const Tour& tour) {
  return {weighted_cost(instance, tour), tsp_cost(instance, tour),
          latency_cost(instance, tour)};
}

Tour reverse_tour(const Tour& tour) {
  std::vector<City> perm(tour.begin(), tour.end());
  if (perm.size() > 2) std::reverse(perm.begin() + 1, perm.end());
  return Tour(std::move(perm));
}

Tour normalize_tour(const Tour& tour, City start) {
  const auto it = std::find(tour.begin(), tour.end(), start);
  if (it == tour.end()) {
    throw ValidationError("start city " + std::to_string(start + 1) + " is not in the tour");
  }
  std::vector<City> perm(tour.begin(), tour.end());
  std::rotate(perm.begin(), perm.begin() + (it - tour.begin()), perm.end());
  return Tour(std::move(perm));
}

}  // namespace wtsp

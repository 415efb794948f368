#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wtsp {

/// Zero-based city index. City files and CLI output use one-based indices.
using City = std::size_t;

/// Malformed input: bad dimensions, invalid permutations, weights out of range.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An exact or expansion routine was asked to work beyond its hard size cap.
class LimitExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// TSPLIB-style nearest-integer rounding of Euclidean distances. Off by default.
enum class DistanceRounding { none, nearest };

/// A W-TSP instance: symmetric distances with zero diagonal, nonnegative node
/// weights, and a fixed start city. Immutable after construction.
///
/// Euclidean instances keep their coordinates; distances are materialised
/// once into a dense matrix so that cost evaluation is a row lookup.
class Instance {
 public:
  static Instance euclidean(std::vector<Point> points, std::vector<double> weights,
                            City start = 0,
                            DistanceRounding rounding = DistanceRounding::none);

  /// `matrix` is row-major n*n. When `metric` is true the triangle inequality
  /// is audited (exhaustively up to 200 cities, sampled above) and a
  /// violation throws.
  static Instance from_matrix(std::vector<double> matrix, std::vector<double> weights,
                              City start = 0, bool metric = true);

  std::size_t size() const noexcept { return n_; }
  City start() const noexcept { return start_; }
  bool metric() const noexcept { return metric_; }
  DistanceRounding rounding() const noexcept { return rounding_; }

  double distance(City a, City b) const noexcept { return dist_[a * n_ + b]; }
  std::span<const double> row(City a) const noexcept {
    return {dist_.data() + a * n_, n_};
  }
  std::span<const double> matrix() const noexcept { return dist_; }

  double weight(City c) const noexcept { return weights_[c]; }
  std::span<const double> weights() const noexcept { return weights_; }
  double total_weight() const noexcept { return total_weight_; }

  bool has_coordinates() const noexcept { return !points_.empty(); }
  std::span<const Point> points() const noexcept { return points_; }

  /// Same geometry and start, different weights.
  Instance with_weights(std::vector<double> weights) const;

 private:
  Instance() = default;
  void set_weights(std::vector<double> weights);

  std::size_t n_ = 0;
  City start_ = 0;
  bool metric_ = false;
  DistanceRounding rounding_ = DistanceRounding::none;
  std::vector<double> dist_;
  std::vector<double> weights_;
  std::vector<Point> points_;
  double total_weight_ = 0.0;
};

struct TriangleViolation {
  City a, b, c;  // d(a,c) > d(a,b) + d(b,c)
  double excess;
};

/// Checks d(a,c) <= d(a,b) + d(b,c) with a relative tolerance. All triples
/// are examined for n <= `exhaustive_limit`; above that `samples` random
/// triples drawn from `seed` are tested.
std::optional<TriangleViolation> find_triangle_violation(
    std::span<const double> matrix, std::size_t n, std::size_t exhaustive_limit = 200,
    std::size_t samples = 2'000'000, std::uint64_t seed = 0x5eed);

/// A permutation of {0..n-1}. Construction validates the bijection.
class Tour {
 public:
  Tour() = default;
  explicit Tour(std::vector<City> perm);

  static Tour identity(std::size_t n);

  std::size_t size() const noexcept { return perm_.size(); }
  City operator[](std::size_t i) const noexcept { return perm_[i]; }
  std::span<const City> cities() const noexcept { return perm_; }
  auto begin() const noexcept { return perm_.begin(); }
  auto end() const noexcept { return perm_.end(); }

  friend bool operator==(const Tour&, const Tour&) = default;

 private:
  std::vector<City> perm_;
};

/// True iff `perm` is a bijection on {0..perm.size()-1}.
bool is_permutation(std::span<const City> perm);

struct CostReport {
  double weighted = 0.0;
  double tsp = 0.0;
  double latency = 0.0;
};

/// Prefix weight sums: omega[i] = w(pi_0) + ... + w(pi_i).
struct PrefixWeights {
  std::vector<double> omega;
};

// The span overloads skip the permutation check and are meant for hot loops
// that maintain a valid permutation themselves.

/// d(pi_n, pi_1) * omega(n) + sum_{i<n} d(pi_i, pi_{i+1}) * omega(i).
double weighted_cost(const Instance& instance, std::span<const City> perm) noexcept;
double weighted_cost(const Instance& instance, const Tour& tour);

double tsp_cost(const Instance& instance, std::span<const City> perm) noexcept;
double tsp_cost(const Instance& instance, const Tour& tour);

/// Length of the open path pi_1 .. pi_n (no closing edge).
double tsp_path_cost(const Instance& instance, const Tour& tour);

/// Sum of waiting times along the open path starting at pi_1.
double latency_cost(const Instance& instance, const Tour& tour);

PrefixWeights prefix_weights(const Instance& instance, const Tour& tour);

CostReport cost_report(const Instance& instance, const Tour& tour);

/// (pi_1, pi_n, ..., pi_2). An involution that keeps the first city.
Tour reverse_tour(const Tour& tour);

/// Rotation of `tour` that begins with `start`.
Tour normalize_tour(const Tour& tour, City start);

}  // namespace wtsp

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "wtsp/core.hpp"

namespace wtsp {

// ---------------------------------------------------------------------------
// Classical TSP subroutine
// ---------------------------------------------------------------------------

enum class TspMode { double_tree, christofides };

inline constexpr std::size_t kExactMatchingCap = 12;

struct TspTour {
  Tour tour;
  /// False when Christofides fell back to greedy matching (more than
  /// kExactMatchingCap odd-degree vertices); the 1.5 bound then no longer holds.
  bool guaranteed = true;
};

/// Hamiltonian tour starting at the start city. Requires a metric instance.
/// double_tree: preorder walk of a minimum spanning tree (factor 2).
/// christofides: MST plus minimum-weight perfect matching on the odd-degree
/// vertices, Euler circuit, shortcut.
TspTour tsp_subroutine(const Instance& instance, TspMode mode);

// ---------------------------------------------------------------------------
// Good k-tours
// ---------------------------------------------------------------------------

enum class KTourProvenance { exact, heuristic, phantom };

/// Closed tour through the start visiting `cities.size()` distinct cities,
/// listed from the start.
struct KTour {
  std::vector<City> cities;
  double length = 0.0;
  KTourProvenance provenance = KTourProvenance::exact;
};

/// Family {T_k}, indexed by k = 1..n. Entries may be missing.
class KTourSet {
 public:
  explicit KTourSet(std::size_t n) : tours_(n + 1) {}

  std::size_t n() const noexcept { return tours_.size() - 1; }
  bool has(std::size_t k) const { return k >= 1 && k <= n() && tours_[k].has_value(); }
  const KTour& at(std::size_t k) const;
  void set(std::size_t k, KTour tour);
  void erase(std::size_t k);

 private:
  std::vector<std::optional<KTour>> tours_;
};

enum class KTourMode { exact, heuristic };

inline constexpr std::size_t kExactKTourCap = 20;

struct KTourOptions {
  KTourMode mode = KTourMode::exact;
  TspMode tsp = TspMode::christofides;
};

/// Builds T_1..T_n. exact: T_k is a shortest closed tour through the start
/// over all k-subsets (subset DP, n <= kExactKTourCap). heuristic: nested
/// tours from nearest insertion. T_n always comes from tsp_subroutine.
KTourSet good_k_tours(const Instance& instance, const KTourOptions& options = {});

/// Fills every missing T_k with a phantom: its length is interpolated
/// linearly between the nearest present neighbours and its tour is the
/// first k cities of the larger neighbour. T_n must be present.
void fill_phantom_tours(KTourSet& set, City start);

// ---------------------------------------------------------------------------
// Concatenation
// ---------------------------------------------------------------------------

enum class BMode { random, fixed, grid };
enum class Selector { sweep, shortest_path };

struct SweepParams {
  double c = 3.59;
  BMode b_mode = BMode::grid;
  double b = 1.0;                 // used by BMode::fixed
  std::size_t grid_size = 64;     // U in {0, 1/m, ..., (m-1)/m}
  std::uint64_t seed = 0;         // used by BMode::random
  Selector selector = Selector::sweep;
};

struct ConcatResult {
  Tour tour;
  std::vector<std::size_t> selected;  // k values appended, in order; ends with n
  double b = 0.0;
  double cost = 0.0;
};

/// Appends T_{n_1}, T_{n_2}, ..., T_n where T_{n_i} is the tour with the
/// most cities whose length is at most 2*b*c^i, for i = 1, 2, ... while
/// 2*b*c^i < c(T_n).
std::vector<std::size_t> sweep_selection(const KTourSet& set, double b, double c);

/// Shortest path from T_1 to T_n in the auxiliary DAG whose arc i -> j costs
/// (n - (i+j)/2 + 1) * c(T_j). Returns the visited k values after T_1.
std::vector<std::size_t> shortest_path_selection(const KTourSet& set);

/// Walks the selected tours one after another and shortcuts repeats.
Tour concatenate(const Instance& instance, const KTourSet& set,
                 std::span<const std::size_t> selected);

/// Requires unit weights. In grid mode the best tour over the U-grid is
/// kept (ties go to the smaller U).
ConcatResult concat_approximation(const Instance& instance, const KTourSet& ktours,
                                  const SweepParams& params = {});

/// First-occurrence filter of a closed walk that starts at the start city.
Tour shortcut(std::span<const City> walk, const Instance& instance);

// ---------------------------------------------------------------------------
// Integer weights via city copies
// ---------------------------------------------------------------------------

inline constexpr std::size_t kExpansionCap = 4000;

struct CopyMap {
  std::vector<City> original;             // expanded city -> original city
  std::vector<std::vector<City>> copies;  // original city -> its copies
};

struct Expansion {
  Instance expanded;
  CopyMap map;
};

/// Replaces city i by w(i) unit-weight copies at mutual distance 0. Weights
/// must be positive integers summing to at most kExpansionCap.
Expansion expand_weights(const Instance& instance);

/// Original tour -> expanded tour with each city replaced by its copy block.
Tour block_substitute(const Tour& tour, const CopyMap& map);

/// Expanded tour -> original tour. The start stays first; every other city
/// takes the position of its last copy. On metric instances with w(start) = 1
/// this never increases the weighted cost.
Tour collapse_tour(const Tour& expanded_tour, const CopyMap& map, const Instance& original);

// ---------------------------------------------------------------------------

/// The cheaper of `tour` and reverse_tour(tour) under the weighted cost;
/// ties keep `tour`.
Tour best_orientation(const Instance& instance, const Tour& tour);

/// expand_weights -> good_k_tours -> concat_approximation -> collapse_tour.
Tour approximate_bounded_weights(const Instance& instance, const SweepParams& params = {},
                                 const KTourOptions& options = {});

}  // namespace wtsp

#include "wtsp/approx.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <tuple>

#include "wtsp/rng.hpp"

namespace wtsp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

void require_metric(const Instance& instance, const char* who) {
  if (!instance.metric()) {
    throw ValidationError(std::string(who) + " requires a metric instance");
  }
}

// Prim, O(n^2). parent[start] == kNone.
std::vector<std::size_t> minimum_spanning_tree(const Instance& instance) {
  const std::size_t n = instance.size();
  std::vector<std::size_t> parent(n, kNone);
  std::vector<double> key(n, kInf);
  std::vector<bool> in_tree(n, false);
  key[instance.start()] = 0.0;
  for (std::size_t it = 0; it < n; ++it) {
    std::size_t u = kNone;
    for (std::size_t v = 0; v < n; ++v)
      if (!in_tree[v] && (u == kNone || key[v] < key[u])) u = v;
    in_tree[u] = true;
    const auto row = instance.row(u);
    for (std::size_t v = 0; v < n; ++v) {
      if (!in_tree[v] && row[v] < key[v]) {
        key[v] = row[v];
        parent[v] = u;
      }
    }
  }
  return parent;
}

Tour double_tree(const Instance& instance, const std::vector<std::size_t>& parent) {
  const std::size_t n = instance.size();
  std::vector<std::vector<City>> children(n);
  for (City v = 0; v < n; ++v)
    if (parent[v] != kNone) children[parent[v]].push_back(v);

  std::vector<City> order;
  order.reserve(n);
  std::vector<City> stack{instance.start()};
  while (!stack.empty()) {
    const City u = stack.back();
    stack.pop_back();
    order.push_back(u);
    for (auto it = children[u].rbegin(); it != children[u].rend(); ++it) stack.push_back(*it);
  }
  return Tour(std::move(order));
}

// Minimum-weight perfect matching of `nodes` (even count) by subset DP.
std::vector<std::pair<City, City>> exact_matching(const Instance& instance,
                                                  const std::vector<City>& nodes) {
  const std::size_t k = nodes.size();
  const std::uint32_t full = (std::uint32_t{1} << k) - 1;
  std::vector<double> best(full + 1, kInf);
  std::vector<std::uint8_t> partner(full + 1, 0);
  best[0] = 0.0;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    if (std::popcount(mask) % 2 != 0) continue;
    const int i = std::countr_zero(mask);
    for (std::size_t j = i + 1; j < k; ++j) {
      if (!(mask >> j & 1U)) continue;
      const std::uint32_t rest = mask & ~(1U << i) & ~(1U << j);
      const double cand = best[rest] + instance.distance(nodes[i], nodes[j]);
      if (cand < best[mask]) {
        best[mask] = cand;
        partner[mask] = static_cast<std::uint8_t>(j);
      }
    }
  }
  std::vector<std::pair<City, City>> pairs;
  for (std::uint32_t mask = full; mask != 0;) {
    const int i = std::countr_zero(mask);
    const int j = partner[mask];
    pairs.emplace_back(nodes[i], nodes[j]);
    mask &= ~(1U << i) & ~(1U << j);
  }
  return pairs;
}

std::vector<std::pair<City, City>> greedy_matching(const Instance& instance,
                                                   const std::vector<City>& nodes) {
  std::vector<std::tuple<double, City, City>> edges;
  for (std::size_t a = 0; a < nodes.size(); ++a)
    for (std::size_t b = a + 1; b < nodes.size(); ++b)
      edges.emplace_back(instance.distance(nodes[a], nodes[b]), nodes[a], nodes[b]);
  std::sort(edges.begin(), edges.end());
  std::vector<bool> used(instance.size(), false);
  std::vector<std::pair<City, City>> pairs;
  for (const auto& [d, a, b] : edges) {
    if (used[a] || used[b]) continue;
    used[a] = used[b] = true;
    pairs.emplace_back(a, b);
  }
  return pairs;
}

// Hierholzer on an undirected multigraph given as an edge list.
std::vector<City> euler_circuit(std::size_t n, const std::vector<std::pair<City, City>>& edges,
                                City start) {
  std::vector<std::vector<std::size_t>> incident(n);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    incident[edges[e].first].push_back(e);
    incident[edges[e].second].push_back(e);
  }
  std::vector<bool> used(edges.size(), false);
  std::vector<std::size_t> next(n, 0);
  std::vector<City> stack{start};
  std::vector<City> circuit;
  while (!stack.empty()) {
    const City u = stack.back();
    auto& pos = next[u];
    while (pos < incident[u].size() && used[incident[u][pos]]) ++pos;
    if (pos == incident[u].size()) {
      circuit.push_back(u);
      stack.pop_back();
      continue;
    }
    const std::size_t e = incident[u][pos];
    used[e] = true;
    stack.push_back(edges[e].first == u ? edges[e].second : edges[e].first);
  }
  std::reverse(circuit.begin(), circuit.end());
  return circuit;
}

double closed_length(const Instance& instance, std::span<const City> cities) {
  if (cities.size() < 2) return 0.0;
  double len = instance.distance(cities.back(), cities.front());
  for (std::size_t i = 0; i + 1 < cities.size(); ++i)
    len += instance.distance(cities[i], cities[i + 1]);
  return len;
}

KTourSet exact_k_tours(const Instance& instance) {
  const std::size_t n = instance.size();
  const City start = instance.start();
  KTourSet set(n);

  std::vector<City> others;
  for (City c = 0; c < n; ++c)
    if (c != start) others.push_back(c);
  const std::size_t m = others.size();
  const std::uint32_t full = (std::uint32_t{1} << m) - 1;

  // f[mask][j]: shortest path start -> (cities of mask) ending at others[j]
  std::vector<double> f((static_cast<std::size_t>(full) + 1) * m, kInf);
  std::vector<std::uint8_t> from((static_cast<std::size_t>(full) + 1) * m, 0xff);
  for (std::size_t j = 0; j < m; ++j) f[(1U << j) * m + j] = instance.distance(start, others[j]);

  std::vector<double> best_len(n + 1, kInf);
  std::vector<std::pair<std::uint32_t, std::size_t>> best_end(n + 1);
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    for (std::size_t j = 0; j < m; ++j) {
      if (!(mask >> j & 1U)) continue;
      const double here = f[mask * m + j];
      if (here == kInf) continue;
      const double closed = here + instance.distance(others[j], start);
      const std::size_t k = std::popcount(mask) + 1;
      if (closed < best_len[k]) {
        best_len[k] = closed;
        best_end[k] = {mask, j};
      }
      const auto row = instance.row(others[j]);
      for (std::size_t t = 0; t < m; ++t) {
        if (mask >> t & 1U) continue;
        const std::uint32_t next = mask | (1U << t);
        const double cand = here + row[others[t]];
        if (cand < f[next * m + t]) {
          f[next * m + t] = cand;
          from[next * m + t] = static_cast<std::uint8_t>(j);
        }
      }
    }
  }

  set.set(1, KTour{{start}, 0.0, KTourProvenance::exact});
  for (std::size_t k = 2; k < n; ++k) {
    auto [mask, j] = best_end[k];
    std::vector<City> rev;
    while (true) {
      rev.push_back(others[j]);
      const std::uint8_t prev = from[mask * m + j];
      mask &= ~(1U << j);
      if (prev == 0xff) break;
      j = prev;
    }
    std::vector<City> cities{start};
    cities.insert(cities.end(), rev.rbegin(), rev.rend());
    const double len = closed_length(instance, cities);
    set.set(k, KTour{std::move(cities), len, KTourProvenance::exact});
  }
  return set;
}

KTourSet insertion_k_tours(const Instance& instance) {
  const std::size_t n = instance.size();
  const City start = instance.start();
  KTourSet set(n);

  std::vector<City> tour{start};
  std::vector<bool> in_tour(n, false);
  in_tour[start] = true;
  std::vector<double> nearest(instance.row(start).begin(), instance.row(start).end());
  set.set(1, KTour{tour, 0.0, KTourProvenance::heuristic});

  for (std::size_t k = 2; k < n; ++k) {
    City pick = kNone;
    for (City c = 0; c < n; ++c)
      if (!in_tour[c] && (pick == kNone || nearest[c] < nearest[pick])) pick = c;

    // cheapest insertion point; position tour.size() is the closing edge
    std::size_t best_pos = tour.size();
    double best_delta = kInf;
    for (std::size_t i = 0; i < tour.size(); ++i) {
      const City a = tour[i];
      const City b = tour[(i + 1) % tour.size()];
      const double delta = instance.distance(a, pick) + instance.distance(pick, b) -
                           instance.distance(a, b);
      if (delta < best_delta) {
        best_delta = delta;
        best_pos = i + 1;
      }
    }
    tour.insert(tour.begin() + static_cast<std::ptrdiff_t>(best_pos), pick);
    in_tour[pick] = true;
    for (City c = 0; c < n; ++c) nearest[c] = std::min(nearest[c], instance.distance(pick, c));
    set.set(k, KTour{tour, closed_length(instance, tour), KTourProvenance::heuristic});
  }
  return set;
}

bool unit_weights(const Instance& instance) {
  return std::all_of(instance.weights().begin(), instance.weights().end(),
                     [](double w) { return w == 1.0; });
}

}  // namespace

const KTour& KTourSet::at(std::size_t k) const {
  if (!has(k)) throw ValidationError("no tour T_" + std::to_string(k) + " in the set");
  return *tours_[k];
}

void KTourSet::set(std::size_t k, KTour tour) {
  if (k < 1 || k > n()) throw ValidationError("k out of range");
  if (tour.cities.size() != k) {
    throw ValidationError("T_" + std::to_string(k) + " must visit exactly k cities");
  }
  tours_[k] = std::move(tour);
}

void KTourSet::erase(std::size_t k) {
  if (k >= 1 && k <= n()) tours_[k].reset();
}

TspTour tsp_subroutine(const Instance& instance, TspMode mode) {
  require_metric(instance, "tsp_subroutine");
  const std::size_t n = instance.size();
  if (n == 1) return {Tour({instance.start()}), true};

  const auto parent = minimum_spanning_tree(instance);
  if (mode == TspMode::double_tree) return {double_tree(instance, parent), true};

  std::vector<std::pair<City, City>> edges;
  std::vector<std::size_t> degree(n, 0);
  for (City v = 0; v < n; ++v) {
    if (parent[v] == kNone) continue;
    edges.emplace_back(parent[v], v);
    ++degree[v];
    ++degree[parent[v]];
  }
  std::vector<City> odd;
  for (City v = 0; v < n; ++v)
    if (degree[v] % 2 == 1) odd.push_back(v);

  const bool exact = odd.size() <= kExactMatchingCap;
  const auto matching = exact ? exact_matching(instance, odd) : greedy_matching(instance, odd);
  edges.insert(edges.end(), matching.begin(), matching.end());

  const auto walk = euler_circuit(n, edges, instance.start());
  return {shortcut(walk, instance), exact};
}

KTourSet good_k_tours(const Instance& instance, const KTourOptions& options) {
  require_metric(instance, "good_k_tours");
  const std::size_t n = instance.size();
  if (options.mode == KTourMode::exact && n > kExactKTourCap) {
    throw LimitExceeded("exact k-tours are limited to " + std::to_string(kExactKTourCap) +
                        " cities, instance has " + std::to_string(n));
  }
  KTourSet set = options.mode == KTourMode::exact ? exact_k_tours(instance)
                                                  : insertion_k_tours(instance);
  if (n == 1) {
    set.set(1, KTour{{instance.start()}, 0.0, KTourProvenance::exact});
    return set;
  }
  const auto tn = tsp_subroutine(instance, options.tsp);
  std::vector<City> cities(tn.tour.begin(), tn.tour.end());
  const double len = tsp_cost(instance, tn.tour);
  const auto provenance = options.mode == KTourMode::exact && tn.guaranteed
                              ? KTourProvenance::exact
                              : KTourProvenance::heuristic;
  set.set(n, KTour{std::move(cities), len, provenance});
  return set;
}

void fill_phantom_tours(KTourSet& set, City start) {
  const std::size_t n = set.n();
  if (!set.has(n)) throw ValidationError("the k-tour set is missing T_n");
  if (!set.has(1)) set.set(1, KTour{{start}, 0.0, KTourProvenance::phantom});
  std::size_t lo = 1;
  for (std::size_t k = 2; k < n; ++k) {
    if (set.has(k)) {
      lo = k;
      continue;
    }
    std::size_t hi = k + 1;
    while (!set.has(hi)) ++hi;
    const KTour& upper = set.at(hi);
    const double lo_len = set.at(lo).length;
    const double t = static_cast<double>(k - lo) / static_cast<double>(hi - lo);
    std::vector<City> cities(upper.cities.begin(),
                             upper.cities.begin() + static_cast<std::ptrdiff_t>(k));
    set.set(k, KTour{std::move(cities), lo_len + t * (upper.length - lo_len),
                     KTourProvenance::phantom});
  }
}

std::vector<std::size_t> sweep_selection(const KTourSet& set, double b, double c) {
  if (!(c > 1.0)) throw ValidationError("sweep base c must exceed 1");
  if (!(b > 0.0)) throw ValidationError("sweep offset b must be positive");
  const std::size_t n = set.n();
  const double full_length = set.at(n).length;

  std::vector<std::size_t> selected;
  // i starts at 1; i = 0 is never appended
  double budget = 2.0 * b * c;
  while (budget < full_length) {
    std::size_t pick = 1;
    for (std::size_t k = 1; k <= n; ++k)
      if (set.has(k) && set.at(k).length <= budget) pick = k;
    selected.push_back(pick);
    budget *= c;
  }
  selected.push_back(n);
  return selected;
}

std::vector<std::size_t> shortest_path_selection(const KTourSet& set) {
  const std::size_t n = set.n();
  const double nn = static_cast<double>(n);
  std::vector<double> dist(n + 1, kInf);
  std::vector<std::size_t> pred(n + 1, 0);
  dist[1] = 0.0;
  for (std::size_t j = 2; j <= n; ++j) {
    if (!set.has(j)) continue;
    const double cj = set.at(j).length;
    for (std::size_t i = 1; i < j; ++i) {
      if (dist[i] == kInf) continue;
      const double arc = (nn - static_cast<double>(i + j) / 2.0 + 1.0) * cj;
      if (dist[i] + arc < dist[j]) {
        dist[j] = dist[i] + arc;
        pred[j] = i;
      }
    }
  }
  std::vector<std::size_t> path;
  if (n == 1) return {1};
  for (std::size_t v = n; v != 1; v = pred[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

Tour concatenate(const Instance& instance, const KTourSet& set,
                 std::span<const std::size_t> selected) {
  std::vector<City> walk;
  for (std::size_t k : selected) {
    const auto& cities = set.at(k).cities;
    walk.insert(walk.end(), cities.begin(), cities.end());
  }
  return shortcut(walk, instance);
}

ConcatResult concat_approximation(const Instance& instance, const KTourSet& ktours,
                                  const SweepParams& params) {
  require_metric(instance, "concat_approximation");
  if (!unit_weights(instance)) {
    throw ValidationError("concat_approximation requires unit weights; expand them first");
  }
  if (ktours.n() != instance.size()) throw ValidationError("k-tour set size mismatch");
  if (!ktours.has(instance.size())) throw ValidationError("the k-tour set is missing T_n");

  KTourSet set = ktours;
  fill_phantom_tours(set, instance.start());

  auto evaluate = [&](std::vector<std::size_t> selected, double b) {
    ConcatResult r{concatenate(instance, set, selected), std::move(selected), b, 0.0};
    r.cost = weighted_cost(instance, r.tour);
    return r;
  };

  if (params.selector == Selector::shortest_path) {
    return evaluate(shortest_path_selection(set), 0.0);
  }
  switch (params.b_mode) {
    case BMode::fixed:
      return evaluate(sweep_selection(set, params.b, params.c), params.b);
    case BMode::random: {
      Rng rng(params.seed);
      const double b = std::pow(params.c, rng.uniform01());
      return evaluate(sweep_selection(set, b, params.c), b);
    }
    case BMode::grid:
      break;
  }
  if (params.grid_size == 0) throw ValidationError("grid size must be positive");
  std::optional<ConcatResult> best;
  for (std::size_t s = 0; s < params.grid_size; ++s) {
    const double u = static_cast<double>(s) / static_cast<double>(params.grid_size);
    const double b = std::pow(params.c, u);
    auto r = evaluate(sweep_selection(set, b, params.c), b);
    if (!best || r.cost < best->cost) best = std::move(r);
  }
  return std::move(*best);
}

Tour shortcut(std::span<const City> walk, const Instance& instance) {
  const std::size_t n = instance.size();
  if (walk.empty() || walk.front() != instance.start()) {
    throw ValidationError("walk must begin at the start city");
  }
  std::vector<bool> seen(n, false);
  std::vector<City> perm;
  perm.reserve(n);
  for (City c : walk) {
    if (c >= n) throw ValidationError("walk contains an unknown city");
    if (seen[c]) continue;
    seen[c] = true;
    perm.push_back(c);
  }
  if (perm.size() != n) {
    const auto missing = std::find(seen.begin(), seen.end(), false) - seen.begin();
    throw ValidationError("walk never visits city " + std::to_string(missing + 1));
  }
  return Tour(std::move(perm));
}

Expansion expand_weights(const Instance& instance) {
  const std::size_t n = instance.size();
  CopyMap map;
  map.copies.resize(n);
  for (City c = 0; c < n; ++c) {
    const double w = instance.weight(c);
    if (w < 1.0 || w != std::floor(w)) {
      throw ValidationError("expansion needs positive integer weights; city " +
                            std::to_string(c + 1) + " has weight " + std::to_string(w));
    }
    if (map.original.size() + static_cast<std::size_t>(w) > kExpansionCap) {
      throw LimitExceeded("total weight exceeds the expansion cap of " +
                          std::to_string(kExpansionCap));
    }
    for (std::size_t r = 0; r < static_cast<std::size_t>(w); ++r) {
      map.copies[c].push_back(map.original.size());
      map.original.push_back(c);
    }
  }

  const std::size_t r = map.original.size();
  std::vector<double> matrix(r * r, 0.0);
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b)
      matrix[a * r + b] = instance.distance(map.original[a], map.original[b]);

  const City start = map.copies[instance.start()].front();
  auto expanded = Instance::from_matrix(std::move(matrix), std::vector<double>(r, 1.0), start,
                                        instance.metric());
  return {std::move(expanded), std::move(map)};
}

Tour block_substitute(const Tour& tour, const CopyMap& map) {
  if (tour.size() != map.copies.size()) throw ValidationError("tour does not match copy map");
  std::vector<City> perm;
  perm.reserve(map.original.size());
  for (City c : tour) perm.insert(perm.end(), map.copies[c].begin(), map.copies[c].end());
  return Tour(std::move(perm));
}

Tour collapse_tour(const Tour& expanded_tour, const CopyMap& map, const Instance& original) {
  const std::size_t n = original.size();
  if (map.copies.size() != n || expanded_tour.size() != map.original.size()) {
    throw ValidationError("copy map is inconsistent with the tour or the instance");
  }
  const City start = original.start();
  const City expanded_start = map.copies[start].front();
  const Tour rotated = normalize_tour(expanded_tour, expanded_start);

  // reverse scan keeps the last copy of each city
  std::vector<bool> seen(n, false);
  seen[start] = true;
  std::vector<City> rev;
  rev.reserve(n);
  for (auto it = rotated.cities().rbegin(); it != rotated.cities().rend(); ++it) {
    const City c = map.original[*it];
    if (seen[c]) continue;
    seen[c] = true;
    rev.push_back(c);
  }
  std::vector<City> perm{start};
  perm.insert(perm.end(), rev.rbegin(), rev.rend());
  return Tour(std::move(perm));
}

Tour best_orientation(const Instance& instance, const Tour& tour) {
  Tour reversed = reverse_tour(tour);
  return weighted_cost(instance, reversed) < weighted_cost(instance, tour) ? reversed : tour;
}

Tour approximate_bounded_weights(const Instance& instance, const SweepParams& params,
                                 const KTourOptions& options) {
  auto [expanded, map] = expand_weights(instance);
  const auto ktours = good_k_tours(expanded, options);
  const auto result = concat_approximation(expanded, ktours, params);
  return collapse_tour(result.tour, map, instance);
}

}  // namespace wtsp

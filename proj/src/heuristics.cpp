#include "wtsp/heuristics.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <string>

namespace wtsp {

std::string_view to_string(MutationKind kind) {
  switch (kind) {
    case MutationKind::inversion: return "inversion";
    case MutationKind::exchange: return "exchange";
    case MutationKind::jump: return "jump";
  }
  return "?";
}

std::string_view to_string(Fitness fitness) {
  return fitness == Fitness::weighted ? "weighted" : "tsp";
}

MutationKind parse_mutation(std::string_view name) {
  if (name == "inversion") return MutationKind::inversion;
  if (name == "exchange") return MutationKind::exchange;
  if (name == "jump") return MutationKind::jump;
  throw ValidationError("unknown mutation '" + std::string(name) + "'");
}

Fitness parse_fitness(std::string_view name) {
  if (name == "weighted") return Fitness::weighted;
  if (name == "tsp") return Fitness::tsp;
  throw ValidationError("unknown fitness '" + std::string(name) + "'");
}

void mutate_at(std::vector<City>& perm, MutationKind kind, std::size_t i, std::size_t j) {
  if (i == 0 || j == 0 || i >= perm.size() || j >= perm.size() || i == j) {
    throw ValidationError("mutation positions must be distinct and in 1..n-1");
  }
  const auto first = perm.begin();
  switch (kind) {
    case MutationKind::inversion:
      if (i > j) std::swap(i, j);
      std::reverse(first + static_cast<std::ptrdiff_t>(i), first + static_cast<std::ptrdiff_t>(j) + 1);
      break;
    case MutationKind::exchange:
      std::swap(perm[i], perm[j]);
      break;
    case MutationKind::jump:
      if (i < j) {
        std::rotate(first + static_cast<std::ptrdiff_t>(i), first + static_cast<std::ptrdiff_t>(i) + 1,
                    first + static_cast<std::ptrdiff_t>(j) + 1);
      } else {
        std::rotate(first + static_cast<std::ptrdiff_t>(j), first + static_cast<std::ptrdiff_t>(i),
                    first + static_cast<std::ptrdiff_t>(i) + 1);
      }
      break;
  }
}

namespace {

void random_mutation(std::vector<City>& perm, MutationKind kind, Rng& rng) {
  const std::size_t slots = perm.size() - 1;
  const std::size_t i = 1 + rng.below(slots);
  std::size_t j = 1 + rng.below(slots - 1);
  if (j >= i) ++j;
  mutate_at(perm, kind, i, j);
}

}  // namespace

Tour mutate(const Tour& tour, MutationKind kind, Rng& rng) {
  if (tour.size() < 3) return tour;
  std::vector<City> perm(tour.begin(), tour.end());
  random_mutation(perm, kind, rng);
  return Tour(std::move(perm));
}

RlsResult rls(const Instance& instance, const RlsConfig& config) {
  const std::size_t n = instance.size();
  std::uint64_t budget = config.budget;
  if (budget == 0) {
    budget = config.time_limit > 0.0 ? std::numeric_limits<std::uint64_t>::max()
                                     : 1000 * static_cast<std::uint64_t>(n);
  }
  const auto deadline =
      std::chrono::steady_clock::now() + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                             std::chrono::duration<double>(config.time_limit));
  Rng rng(config.seed);

  std::vector<City> current(n);
  for (std::size_t i = 0; i < n; ++i) current[i] = i;
  rng.shuffle(std::span<City>(current));
  const auto start_pos = std::find(current.begin(), current.end(), instance.start());
  std::rotate(current.begin(), start_pos, current.end());

  auto evaluate = [&](std::span<const City> perm) {
    return config.fitness == Fitness::weighted ? weighted_cost(instance, perm)
                                               : tsp_cost(instance, perm);
  };

  RlsResult result;
  double current_cost = evaluate(current);
  std::uint64_t used = 1;
  if (config.record_trace) result.trace.push_back({1, current_cost});

  if (n >= 3) {
    std::vector<City> candidate(n);
    while (used < budget) {
      if (config.time_limit > 0.0 && (used & 1023) == 0 &&
          std::chrono::steady_clock::now() >= deadline) {
        break;
      }
      std::copy(current.begin(), current.end(), candidate.begin());
      random_mutation(candidate, config.mutation, rng);
      const double cost = evaluate(candidate);
      ++used;
      if (cost <= current_cost) {
        if (config.record_trace && cost < current_cost) result.trace.push_back({used, cost});
        current.swap(candidate);
        current_cost = cost;
      }
    }
  } else if (config.time_limit <= 0.0) {
    used = budget;  // every candidate is the start tour itself
  }

  result.best_tour = Tour(std::move(current));
  result.best_cost = current_cost;
  result.evaluations_used = used;
  return result;
}

double perf(double cost, double best_known) {
  if (!(best_known > 0.0)) throw ValidationError("perf needs a positive best-known cost");
  return (cost / best_known - 1.0) * 100.0;
}

}  // namespace wtsp

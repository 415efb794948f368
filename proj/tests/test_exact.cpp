#include <doctest.h>

#include "support.hpp"
#include "wtsp/exact.hpp"

using namespace wtsp;
using namespace testing;

namespace {

double path_latency(const Instance& inst, const std::vector<City>& t) { return naive_latency(inst, t); }

std::vector<double> random_weights(std::size_t n, Rng& rng, int hi) {
  std::vector<double> w(n);
  for (auto& x : w) x = static_cast<double>(rng.below(hi + 1));
  w[0] = 1;
  return w;
}

}  // namespace

TEST_CASE("triangle optimum by enumeration") {
  const auto inst = Instance::from_matrix({0, 1, 1000, 1, 0, 1000, 1000, 1000, 0}, {1, 1, 1});
  const double a = naive_weighted(inst, {0, 1, 2});
  const double b = naive_weighted(inst, {0, 2, 1});
  CHECK(brute_force_wtsp(inst).cost == doctest::Approx(std::min(a, b)));
  CHECK(held_karp_wtsp(inst).cost == doctest::Approx(std::min(a, b)));
  CHECK(held_karp_wtsp(inst).tour == Tour({0, 2, 1}));
}

TEST_CASE("exact mlp on the triangle") {
  const auto inst = Instance::from_matrix({0, 1, 1000, 1, 0, 1000, 1000, 1000, 0}, {1, 1, 1});
  const auto r = exact_mlp(inst);
  CHECK(r.tour == Tour({0, 1, 2}));
  CHECK(r.cost == doctest::Approx(1002));
}

TEST_CASE("two cities") {
  const auto inst = Instance::from_matrix({0, 4, 4, 0}, {1, 3});
  CHECK(brute_force_wtsp(inst).cost == 1 * 4 + 4 * 4);
  CHECK(held_karp_wtsp(inst).cost == 20);
  CHECK(exact_tsp(inst).cost == 8);
  CHECK(exact_mlp(inst).cost == 4);
}

TEST_CASE("subset dp agrees with enumeration") {
  Rng rng(17);
  for (int rep = 0; rep < 60; ++rep) {
    const std::size_t n = 3 + rng.below(6);
    const auto inst = random_euclidean(n, rng, random_weights(n, rng, 5));
    const double oracle = enumerate_min(inst, naive_weighted);
    const auto bf = brute_force_wtsp(inst);
    const auto hk = held_karp_wtsp(inst);
    CHECK(bf.cost == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(hk.cost == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(weighted_cost(inst, hk.tour) == doctest::Approx(hk.cost));
    CHECK(hk.tour[0] == inst.start());
  }
}

TEST_CASE("exact tsp and mlp agree with enumeration") {
  Rng rng(23);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t n = 2 + rng.below(7);
    const auto inst = random_euclidean(n, rng);
    CHECK(exact_tsp(inst).cost == doctest::Approx(enumerate_min(inst, naive_tsp)));
    CHECK(exact_mlp(inst).cost == doctest::Approx(enumerate_min(inst, path_latency)));
  }
}

TEST_CASE("start-only weights reduce to exact tsp") {
  Rng rng(29);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 4 + rng.below(5);
    std::vector<double> w(n, 0.0);
    w[0] = 1;
    const auto inst = random_euclidean(n, rng, w);
    const auto hk = held_karp_wtsp(inst);
    CHECK(hk.cost == doctest::Approx(exact_tsp(inst).cost));
    CHECK(tsp_cost(inst, hk.tour) == doctest::Approx(exact_tsp(inst).cost));
  }
}

TEST_CASE("mlp optimum bounds the unit weight optimum from below") {
  Rng rng(31);
  for (int rep = 0; rep < 30; ++rep) {
    const auto inst = random_euclidean(3 + rng.below(7), rng);
    CHECK(exact_mlp(inst).cost <= held_karp_wtsp(inst).cost + 1e-9);
  }
}

TEST_CASE("one-two instance with a Hamiltonian path of ones") {
  const std::size_t n = 7;
  std::vector<double> m(n * n, 2.0);
  for (std::size_t i = 0; i < n; ++i) m[i * n + i] = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) m[i * n + i + 1] = m[(i + 1) * n + i] = 1;
  m[0 * n + n - 1] = m[(n - 1) * n] = 1;
  const auto inst = Instance::from_matrix(m, std::vector<double>(n, 1.0));
  CHECK(exact_tsp(inst).cost == n);
}

TEST_CASE("relabeling invariance") {
  Rng rng(37);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 4 + rng.below(6);
    const auto inst = random_euclidean(n, rng, random_weights(n, rng, 4));
    std::vector<City> perm(n);
    std::iota(perm.begin(), perm.end(), City{0});
    rng.shuffle(std::span<City>(perm).subspan(1));
    std::vector<double> m(n * n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
      w[perm[i]] = inst.weight(i);
      for (std::size_t j = 0; j < n; ++j) m[perm[i] * n + perm[j]] = inst.distance(i, j);
    }
    const auto relabeled = Instance::from_matrix(m, w);
    CHECK(held_karp_wtsp(relabeled).cost == doctest::Approx(held_karp_wtsp(inst).cost));
  }
}

TEST_CASE("nonzero start city") {
  Rng rng(41);
  auto pts = random_points(7, rng);
  std::vector<double> w{2, 1, 3, 1, 0, 2, 1};
  const auto inst = Instance::euclidean(pts, w, 3);
  const auto hk = held_karp_wtsp(inst);
  CHECK(hk.tour[0] == 3);
  CHECK(hk.cost == doctest::Approx(brute_force_wtsp(inst).cost));
  CHECK(hk.cost == doctest::Approx(enumerate_min(inst, naive_weighted)));
}

TEST_CASE("caps are enforced") {
  Rng rng(1);
  CHECK_THROWS_AS(brute_force_wtsp(random_euclidean(12, rng)), LimitExceeded);
  CHECK_THROWS_AS(held_karp_wtsp(random_euclidean(23, rng)), LimitExceeded);
  CHECK_THROWS_AS(exact_tsp(random_euclidean(23, rng)), LimitExceeded);
  CHECK_THROWS_AS(exact_mlp(random_euclidean(23, rng)), LimitExceeded);
}

TEST_CASE("brute force tie-break is lexicographic") {
  // all distances equal: every tour is optimal
  const std::size_t n = 5;
  std::vector<double> m(n * n, 1.0);
  for (std::size_t i = 0; i < n; ++i) m[i * n + i] = 0;
  const auto inst = Instance::from_matrix(m, std::vector<double>(n, 1.0));
  CHECK(brute_force_wtsp(inst).tour == Tour::identity(n));
  CHECK(held_karp_wtsp(inst).tour == Tour::identity(n));
}

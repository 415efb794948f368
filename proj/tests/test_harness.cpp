#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"
#include "wtsp/exact.hpp"
#include "wtsp/harness.hpp"

using namespace wtsp;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "wtsp_harness_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

NamedInstance small(std::size_t n, std::uint64_t seed, WeightClass cls = WeightClass::C2, double d = 3) {
  GeneratorSpec s;
  s.n = n;
  s.weights = {cls, d};
  s.placement_seed = seed;
  s.weight_seed = seed + 1;
  return make_named(s);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ResultRow row(const std::string& algo, double perf) {
  ResultRow r;
  r.cls = "C2";
  r.d = "5";
  r.algorithm = algo;
  r.perf = perf;
  return r;
}

}  // namespace

TEST_CASE("parallel_for covers every index and rethrows") {
  std::vector<int> hit(100, 0);
  parallel_for(100, 4, [&](std::size_t i) { hit[i]++; });
  for (int h : hit) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) {
                    if (i == 7) throw ValidationError("boom");
                  }),
                  ValidationError);
}

TEST_CASE("run seeds") {
  CHECK(run_seed(1, "a", 0) == run_seed(1, "a", 0));
  CHECK(run_seed(1, "a", 0) != run_seed(1, "a", 1));
  CHECK(run_seed(1, "a", 0) != run_seed(1, "b", 0));
  CHECK(run_seed(1, "a", 0) != run_seed(2, "a", 0));
}

TEST_CASE("experiment cardinality, perf and determinism") {
  const std::vector<NamedInstance> insts{small(20, 1)};
  AlgorithmConfig a;
  a.budget = 400;
  const std::vector<AlgorithmConfig> one{a};
  ExperimentOptions opt;
  opt.runs = 3;
  opt.seed = 5;
  const auto rows = run_experiment(insts, one, opt);
  CHECK(rows.size() == 3);
  double best = 1e300;
  for (const auto& r : rows) {
    best = std::min(best, r.perf);
    CHECK(r.weighted == doctest::Approx(weighted_cost(insts[0].instance, r.tour)));
    CHECK(r.evaluations == 400);
    CHECK(r.algorithm == "rls-inversion");
  }
  CHECK(best == 0);

  std::vector<AlgorithmConfig> three(3, a);
  three[1].mutation = MutationKind::exchange;
  three[2].mutation = MutationKind::jump;
  const std::vector<NamedInstance> two{small(15, 2), small(18, 3)};
  opt.jobs = 1;
  const auto serial = run_experiment(two, three, opt);
  opt.jobs = 3;
  const auto parallel = run_experiment(two, three, opt);
  CHECK(serial.size() == 18);
  CHECK(format_results(serial, opt, false) == format_results(parallel, opt, false));
  CHECK(serial[0].instance_id == two[0].id);
  CHECK(serial[3].algorithm == "rls-exchange");

  AlgorithmConfig bad;
  bad.budget_factor = 0;
  const std::vector<AlgorithmConfig> badv{bad};
  CHECK_THROWS_AS(run_experiment(two, badv, opt), ValidationError);
}

TEST_CASE("results round trip and audit") {
  const auto inst_path = scratch("h1.wtsp");
  GeneratorSpec s;
  s.n = 12;
  s.placement_seed = 4;
  write_instance(generate_instance(s), meta_for(s), inst_path);
  const std::vector<NamedInstance> insts{load_named(inst_path)};
  AlgorithmConfig a;
  a.budget = 300;
  const std::vector<AlgorithmConfig> algos{a};
  ExperimentOptions opt;
  opt.runs = 4;
  const auto rows = run_experiment(insts, algos, opt);
  const auto csv = scratch("h1.csv");
  write_results(rows, opt, csv);
  CHECK(slurp(csv).rfind("# wtsp-results schema=1", 0) == 0);
  const auto back = read_results(csv);
  REQUIRE(back.size() == 4);
  CHECK(back[2].tour == rows[2].tour);
  CHECK(back[2].weighted == rows[2].weighted);
  CHECK(back[2].instance_path == inst_path.string());
  CHECK(audit_results(csv).empty());

  // tamper: swap two cities of the first persisted tour
  auto tours = slurp(tours_path_for(csv));
  const auto line_end = tours.find('\n', tours.find('\n') + 1);
  const auto tour_start = tours.rfind(',', line_end) + 1;
  std::istringstream cities(tours.substr(tour_start, line_end - tour_start));
  std::vector<std::string> c{std::istream_iterator<std::string>(cities), {}};
  std::swap(c[1], c[2]);
  std::string joined;
  for (std::size_t i = 0; i < c.size(); ++i) joined += (i ? " " : "") + c[i];
  tours.replace(tour_start, line_end - tour_start, joined);
  std::ofstream(tours_path_for(csv), std::ios::binary) << tours;
  CHECK(audit_results(csv).size() == 1);
}

TEST_CASE("tour files and audit") {
  const auto inst = small(8, 7).instance;
  const auto opt = held_karp_wtsp(inst);
  const auto path = scratch("opt.tour");
  write_tour(opt.tour, "opt", cost_report(inst, opt.tour), path);
  const auto tf = read_tour(path);
  CHECK(tf.tour == opt.tour);
  REQUIRE(tf.weighted.has_value());
  CHECK(audit_tour(inst, tf.tour, tf.weighted, tf.tsp).matches);

  std::vector<City> p(opt.tour.begin(), opt.tour.end());
  std::swap(p[2], p[5]);
  CHECK_FALSE(audit_tour(inst, Tour(p), tf.weighted, tf.tsp).matches);
  CHECK_THROWS_AS(audit_tour(inst, Tour::identity(5)), ValidationError);
}

TEST_CASE("audit of the triangle reports identity-consistent costs") {
  const auto inst = Instance::from_matrix({0, 1, 1000, 1, 0, 1000, 1000, 1000, 0}, {1, 1, 1});
  const Tour t({0, 1, 2});
  const auto a = audit_tour(inst, t);
  const auto rev = audit_tour(inst, reverse_tour(t));
  CHECK(a.costs.latency == doctest::Approx(1002));
  CHECK(a.costs.latency == doctest::Approx(rev.costs.weighted - tsp_path_cost(inst, t) - 1000));
}

TEST_CASE("perf table") {
  std::vector<ResultRow> rows;
  for (int i = 0; i < 30; ++i) {
    rows.push_back(row("a", i));
    rows.push_back(row("b", 100 + i));
    rows.push_back(row("c", i));
  }
  const auto table = compute_perf_table(rows);
  REQUIRE(table.cells.size() == 3);
  CHECK(table.tests.size() == 6);
  CHECK(table.cells[0].superior_to == std::vector<std::string>{"b"});
  CHECK(table.cells[1].superior_to.empty());
  CHECK(table.cells[2].superior_to == std::vector<std::string>{"b"});
  CHECK(table.cells[0].perf.median == 14.5);
  for (const auto& t : table.tests) CHECK(t.p_adjusted == doctest::Approx(std::min(1.0, 6 * t.p_raw)));
  CHECK(format_perf_table(table).find("b+") != std::string::npos);
  CHECK_THROWS(compute_perf_table(std::vector<ResultRow>{}));
}

TEST_CASE("driver ratios") {
  GeneratorSpec s;
  s.n = 8;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    s.placement_seed = seed;
    s.weights = {WeightClass::C2, 4};
    CHECK(exact_driver_ratio(generate_instance(s)) >= 1 - 1e-9);
  }
  const std::vector<NamedInstance> insts{small(20, 4), small(20, 5)};
  AlgorithmConfig solver;
  solver.budget = 2000;
  ExperimentOptions opt;
  opt.runs = 3;
  const auto rows = driver_ratio_protocol(insts, solver, opt);
  CHECK(rows.size() == 6);
  for (const auto& r : rows) {
    CHECK(r.ratio == doctest::Approx(r.weighted_of_tsp_driver / r.weighted_of_weighted_driver));
  }
  const auto summary = summarize_ratios(rows);
  REQUIRE(summary.size() == 1);
  CHECK(summary[0].ratio.count == 6);
  CHECK(format_ratio_summary(summary).find("median") != std::string::npos);

  const auto degenerate = Instance::euclidean(std::vector<Point>(5, Point{1, 1}), {1, 1, 1, 1, 1});
  CHECK_THROWS_AS(exact_driver_ratio(degenerate), ValidationError);
}

TEST_CASE("exact ratio is one when only the start carries weight") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    GeneratorSpec s;
    s.n = 8;
    s.weights = {WeightClass::C1, 0.0};
    s.placement_seed = seed;
    CHECK(exact_driver_ratio(generate_instance(s)) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("equal weights do not make the objectives proportional") {
  // unit weights: the weighted objective charges early legs less, so the
  // classical optimum is not weighted-optimal in general
  testing::Rng rng(3);
  bool above_one = false;
  for (int rep = 0; rep < 20; ++rep) {
    const auto inst = testing::random_euclidean(8, rng);
    const double r = exact_driver_ratio(inst);
    CHECK(r >= 1 - 1e-9);
    above_one = above_one || r > 1 + 1e-9;
  }
  CHECK(above_one);
}

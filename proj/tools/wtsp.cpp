// wtsp: command-line front end for the node weight dependent TSP library.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wtsp/approx.hpp"
#include "wtsp/core.hpp"
#include "wtsp/exact.hpp"
#include "wtsp/harness.hpp"
#include "wtsp/heuristics.hpp"
#include "wtsp/instances.hpp"

using namespace wtsp;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitAudit = 3;

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw ValidationError("cannot write " + out);
  f << text;
}

void print_costs(const Instance& inst, const Tour& tour) {
  const auto c = cost_report(inst, tour);
  std::cout << "weighted_cost " << format_number(c.weighted) << '\n'
            << "tsp_cost " << format_number(c.tsp) << '\n'
            << "latency " << format_number(c.latency) << '\n'
            << "tour";
  for (City v : tour) std::cout << ' ' << v + 1;
  std::cout << '\n';
}

void save_tour(const Instance& inst, const Tour& tour, const std::string& name,
               const std::string& out) {
  if (!out.empty()) write_tour(tour, name, cost_report(inst, tour), out);
}

void warn_flags(const InstanceFile& file, const std::string& path) {
  if (file.weights_defaulted) std::cerr << path << ": no NODE_WEIGHT_SECTION, unit weights\n";
  if (file.start_weight_flagged) std::cerr << path << ": start city weight is not 1\n";
}

std::vector<MutationKind> parse_mutations(const std::string& list) {
  std::vector<MutationKind> out;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(parse_mutation(item));
  }
  if (out.empty()) throw ValidationError("no mutation operators given");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Node weight dependent TSP solvers and experiment runner"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  std::string out;
  std::string format = "csv";
  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv"}));
  };

  // generate
  auto* gen = app.add_subcommand("generate", "Generate one instance");
  GeneratorSpec spec;
  std::string placement = "rue", cls = "C2";
  gen->add_option("--n", spec.n, "Number of cities")->required();
  gen->add_option("--placement", placement)->check(CLI::IsMember({"rue", "netgen", "tspgen"}));
  gen->add_option("--class", cls)->check(CLI::IsMember({"C1", "C2", "C3"}));
  gen->add_option("--d", spec.weights.d, "Weight parameter");
  gen->add_option("--placement-seed", spec.placement_seed);
  gen->add_option("--weight-seed", spec.weight_seed);
  gen->add_option("--tspgen-rounds", spec.tspgen_rounds);
  gen->add_option("--out", out, "Output file (default stdout)");

  // generate-suite
  auto* suite = app.add_subcommand("generate-suite", "Write the benchmark suite manifest");
  std::string manifest;
  std::vector<std::size_t> sizes(kSuiteSizes.begin(), kSuiteSizes.end());
  std::size_t preps = 10, wreps = 10;
  std::string materialize;
  suite->add_option("--manifest", manifest, "Manifest CSV to write")->required();
  suite->add_option("--seed", seed);
  std::string suite_placement = "all";
  suite->add_option("--placement", suite_placement)
      ->check(CLI::IsMember({"all", "rue", "netgen", "tspgen"}));
  suite->add_option("--sizes", sizes)->delimiter(',');
  suite->add_option("--placement-reps", preps);
  suite->add_option("--weight-reps", wreps);
  suite->add_option("--write-dir", materialize, "Also write every instance file here");
  suite->add_option("--jobs", jobs);

  // solve
  auto* solve = app.add_subcommand("solve", "Randomized local search on one instance");
  std::string instance_path, algo = "rls", mutation = "inversion", fitness = "weighted";
  std::uint64_t budget = 0;
  double time_limit = 0.0;
  solve->add_option("instance", instance_path)->required()->check(CLI::ExistingFile);
  solve->add_option("--algo", algo)->check(CLI::IsMember({"rls"}));
  solve->add_option("--mutation", mutation)->check(CLI::IsMember({"inversion", "exchange", "jump"}));
  solve->add_option("--fitness", fitness)->check(CLI::IsMember({"weighted", "tsp"}));
  solve->add_option("--budget", budget, "Fitness evaluations (default 1000n)");
  solve->add_option("--time-limit", time_limit, "Seconds");
  solve->add_option("--seed", seed);
  solve->add_option("--out", out, "Write the final tour here");

  // approx
  auto* approx = app.add_subcommand("approx", "Approximation algorithms");
  std::string approx_method = "concat", ktour_mode = "exact", b_mode = "grid", selector = "sweep",
              tsp_mode = "christofides";
  SweepParams sweep;
  approx->add_option("instance", instance_path)->required()->check(CLI::ExistingFile);
  approx->add_option("--method", approx_method, "concat or orient")
      ->check(CLI::IsMember({"concat", "orient"}));
  approx->add_option("--ktours", ktour_mode)->check(CLI::IsMember({"exact", "heuristic"}));
  approx->add_option("--tsp", tsp_mode)->check(CLI::IsMember({"christofides", "double-tree"}));
  approx->add_option("--selector", selector)->check(CLI::IsMember({"sweep", "shortest-path"}));
  approx->add_option("--b-mode", b_mode)->check(CLI::IsMember({"grid", "random", "fixed"}));
  approx->add_option("--b", sweep.b);
  approx->add_option("--c", sweep.c);
  approx->add_option("--grid", sweep.grid_size);
  approx->add_option("--seed", seed);
  approx->add_option("--out", out);

  // exact
  auto* exact = app.add_subcommand("exact", "Exact solvers for small instances");
  std::string solver = "held-karp";
  exact->add_option("instance", instance_path)->required()->check(CLI::ExistingFile);
  exact->add_option("--solver", solver)
      ->check(CLI::IsMember({"held-karp", "brute-force", "tsp", "mlp"}));
  exact->add_option("--out", out);

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Run RLS variants on a set of instances");
  std::vector<std::string> instance_paths;
  std::string mutations = "inversion,exchange,jump";
  std::uint64_t budget_factor = 1000;
  ExperimentOptions xopt;
  experiment->add_option("instances", instance_paths)->required()->check(CLI::ExistingFile);
  experiment->add_option("--mutations", mutations);
  experiment->add_option("--fitness", fitness)->check(CLI::IsMember({"weighted", "tsp"}));
  experiment->add_option("--runs", xopt.runs);
  experiment->add_option("--budget", budget, "Fitness evaluations per run");
  experiment->add_option("--budget-factor", budget_factor, "Evaluations per city when --budget is unset");
  experiment->add_option("--time-limit", time_limit);
  experiment->add_option("--seed", seed);
  experiment->add_option("--jobs", jobs);
  experiment->add_option("--out", out, "Results CSV")->required();
  add_format(experiment);

  // ratio
  auto* ratio = app.add_subcommand("ratio", "Classical vs weighted fitness driver ratios");
  std::string summary_out;
  bool exact_oracle = false;
  ExperimentOptions ropt;
  ropt.runs = 10;
  ratio->add_option("instances", instance_paths)->required()->check(CLI::ExistingFile);
  ratio->add_option("--mutation", mutation)->check(CLI::IsMember({"inversion", "exchange", "jump"}));
  ratio->add_option("--runs", ropt.runs);
  ratio->add_option("--budget", budget);
  ratio->add_option("--budget-factor", budget_factor);
  ratio->add_option("--time-limit", time_limit);
  ratio->add_option("--seed", seed);
  ratio->add_option("--jobs", jobs);
  ratio->add_option("--out", out, "Per-run ratio CSV (default stdout)");
  ratio->add_option("--summary", summary_out, "Summary CSV");
  ratio->add_flag("--exact", exact_oracle, "Use exact solvers for both drivers (n <= 22)");
  add_format(ratio);

  // stats
  auto* stats = app.add_subcommand("stats", "Perf table with pairwise tests");
  std::string results_path, tests_out;
  stats->add_option("results", results_path)->required()->check(CLI::ExistingFile);
  stats->add_option("--out", out);
  stats->add_option("--tests", tests_out, "Also write the pairwise test CSV here");
  add_format(stats);

  // audit
  auto* audit = app.add_subcommand("audit", "Recompute costs of persisted tours");
  std::string tour_path;
  std::optional<double> expect_w, expect_tsp;
  audit->add_option("instance", instance_path)->check(CLI::ExistingFile);
  audit->add_option("tour", tour_path)->check(CLI::ExistingFile);
  audit->add_option("--weighted", expect_w, "Expected weighted cost");
  audit->add_option("--tsp", expect_tsp, "Expected tsp cost");
  audit->add_option("--results", results_path, "Audit every row of a results CSV")
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*gen) {
      spec.placement = parse_placement(placement);
      spec.weights.cls = parse_weight_class(cls);
      validate(spec.weights);
      const auto inst = generate_instance(spec);
      const auto text = format_instance(inst, meta_for(spec));
      emit(text, out);
      return 0;
    }

    if (*suite) {
      std::vector<SuiteEntry> entries;
      for (auto kind : {Placement::rue, Placement::netgen, Placement::tspgen}) {
        if (suite_placement != "all" && parse_placement(suite_placement) != kind) continue;
        auto part = benchmark_suite(seed, kind, sizes, preps, wreps);
        entries.insert(entries.end(), part.begin(), part.end());
      }
      write_manifest(entries, manifest);
      if (!materialize.empty()) {
        std::filesystem::create_directories(materialize);
        parallel_for(entries.size(), jobs, [&](std::size_t i) {
          const auto& e = entries[i];
          auto meta = meta_for(e.spec);
          meta.name = e.id;
          write_instance(generate_instance(e.spec), meta,
                         std::filesystem::path(materialize) / (e.id + ".wtsp"));
        });
      }
      std::cerr << entries.size() << " entries\n";
      return 0;
    }

    if (*solve) {
      const auto file = read_instance(instance_path);
      warn_flags(file, instance_path);
      RlsConfig cfg;
      cfg.mutation = parse_mutation(mutation);
      cfg.fitness = parse_fitness(fitness);
      cfg.budget = budget;
      cfg.time_limit = time_limit;
      cfg.seed = seed;
      const auto result = rls(file.instance, cfg);
      std::cout << "evaluations " << result.evaluations_used << '\n';
      print_costs(file.instance, result.best_tour);
      save_tour(file.instance, result.best_tour, file.meta.name, out);
      return 0;
    }

    if (*approx) {
      const auto file = read_instance(instance_path);
      warn_flags(file, instance_path);
      const auto& inst = file.instance;
      KTourOptions kopt;
      kopt.mode = ktour_mode == "exact" ? KTourMode::exact : KTourMode::heuristic;
      kopt.tsp = tsp_mode == "christofides" ? TspMode::christofides : TspMode::double_tree;
      Tour tour;
      if (approx_method == "orient") {
        tour = best_orientation(inst, tsp_subroutine(inst, kopt.tsp).tour);
      } else {
        sweep.b_mode = b_mode == "grid" ? BMode::grid : b_mode == "random" ? BMode::random : BMode::fixed;
        sweep.selector = selector == "sweep" ? Selector::sweep : Selector::shortest_path;
        sweep.seed = seed;
        bool unit = true;
        for (double w : inst.weights()) unit = unit && w == 1.0;
        tour = unit ? concat_approximation(inst, good_k_tours(inst, kopt), sweep).tour
                    : approximate_bounded_weights(inst, sweep, kopt);
      }
      print_costs(inst, tour);
      save_tour(inst, tour, file.meta.name, out);
      return 0;
    }

    if (*exact) {
      const auto file = read_instance(instance_path);
      warn_flags(file, instance_path);
      const auto& inst = file.instance;
      ExactResult r = solver == "held-karp"     ? held_karp_wtsp(inst)
                      : solver == "brute-force" ? brute_force_wtsp(inst)
                      : solver == "tsp"         ? exact_tsp(inst)
                                                : exact_mlp(inst);
      std::cout << "optimum " << format_number(r.cost) << '\n';
      print_costs(inst, r.tour);
      save_tour(inst, r.tour, file.meta.name, out);
      return 0;
    }

    auto load_all = [&] {
      std::vector<NamedInstance> instances;
      for (const auto& p : instance_paths) instances.push_back(load_named(p));
      return instances;
    };

    if (*experiment) {
      const auto instances = load_all();
      std::vector<AlgorithmConfig> algos;
      for (auto kind : parse_mutations(mutations)) {
        AlgorithmConfig a;
        a.mutation = kind;
        a.fitness = parse_fitness(fitness);
        a.budget = budget;
        a.budget_factor = budget_factor;
        a.time_limit = time_limit;
        algos.push_back(a);
      }
      xopt.seed = seed;
      xopt.jobs = jobs;
      const auto rows = run_experiment(instances, algos, xopt);
      write_results(rows, xopt, out);
      std::cerr << rows.size() << " rows written to " << out << '\n';
      return 0;
    }

    if (*ratio) {
      const auto instances = load_all();
      std::vector<RatioRow> rows;
      if (exact_oracle) {
        for (const auto& ni : instances) {
          const auto meta = ni.meta;
          RatioRow r;
          r.instance_id = ni.id;
          r.placement = meta.placement ? std::string(to_string(*meta.placement)) : "-";
          r.cls = meta.weights ? std::string(to_string(meta.weights->cls)) : "-";
          r.d = meta.weights ? format_d(*meta.weights) : "-";
          r.n = ni.instance.size();
          const auto wopt = held_karp_wtsp(ni.instance);
          r.weighted_of_weighted_driver = wopt.cost;
          r.weighted_of_tsp_driver = weighted_cost(ni.instance, exact_tsp(ni.instance).tour);
          r.ratio = exact_driver_ratio(ni.instance);
          rows.push_back(r);
        }
      } else {
        AlgorithmConfig a;
        a.mutation = parse_mutation(mutation);
        a.budget = budget;
        a.budget_factor = budget_factor;
        a.time_limit = time_limit;
        ropt.seed = seed;
        ropt.jobs = jobs;
        rows = driver_ratio_protocol(instances, a, ropt);
      }
      emit(format_ratios(rows), out);
      if (!summary_out.empty()) emit(format_ratio_summary(summarize_ratios(rows)), summary_out);
      return 0;
    }

    if (*stats) {
      const auto rows = read_results(results_path);
      const auto table = compute_perf_table(rows);
      emit(format_perf_table(table), out);
      if (!tests_out.empty()) {
        std::ostringstream t;
        t << "class,d,better,worse,p,p_bonferroni\n";
        for (const auto& x : table.tests) {
          t << x.cls << ',' << x.d << ',' << x.better << ',' << x.worse << ','
            << format_number(x.p_raw) << ',' << format_number(x.p_adjusted) << '\n';
        }
        emit(t.str(), tests_out);
      }
      return 0;
    }

    if (*audit) {
      if (!results_path.empty()) {
        const auto failures = audit_results(results_path);
        for (const auto& f : failures) std::cout << "MISMATCH " << f << '\n';
        std::cout << (failures.empty() ? "ok\n" : "audit failed\n");
        return failures.empty() ? 0 : kExitAudit;
      }
      if (instance_path.empty() || tour_path.empty()) {
        throw ValidationError("audit needs INSTANCE TOUR or --results CSV");
      }
      const auto file = read_instance(instance_path);
      const auto tf = read_tour(tour_path);
      const auto result = audit_tour(file.instance, tf.tour, expect_w ? expect_w : tf.weighted,
                                     expect_tsp ? expect_tsp : tf.tsp);
      std::cout << "weighted_cost " << format_number(result.costs.weighted) << '\n'
                << "tsp_cost " << format_number(result.costs.tsp) << '\n'
                << "latency " << format_number(result.costs.latency) << '\n';
      if (!result.matches) {
        std::cout << "MISMATCH " << result.message << '\n';
        return kExitAudit;
      }
      std::cout << "ok\n";
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::length_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

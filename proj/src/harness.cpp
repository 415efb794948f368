#include "wtsp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "wtsp/exact.hpp"
#include "wtsp/rng.hpp"

namespace wtsp {

void parallel_for(std::size_t count, std::size_t jobs,
                  const std::function<void(std::size_t)>& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

NamedInstance load_named(const std::filesystem::path& path) {
  auto file = read_instance(path);
  std::string id = file.meta.name.empty() ? path.stem().string() : file.meta.name;
  return {std::move(id), std::move(file.instance), std::move(file.meta), path.string()};
}

NamedInstance make_named(const GeneratorSpec& spec, std::string id) {
  auto meta = meta_for(spec);
  if (!id.empty()) meta.name = id;
  return {meta.name, generate_instance(spec), meta, {}};
}

std::uint64_t run_seed(std::uint64_t top_seed, const std::string& instance_id, std::size_t run) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char ch : instance_id) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return derive_seed(splitmix64(top_seed ^ splitmix64(h)), run);
}

std::string algorithm_name(const AlgorithmConfig& config) {
  if (!config.name.empty()) return config.name;
  std::string name = "rls-" + std::string(to_string(config.mutation));
  if (config.fitness == Fitness::tsp) name += "-tsp";
  return name;
}

namespace {

struct MetaStrings {
  std::string placement = "-", cls = "-", d = "-";
};

MetaStrings meta_strings(const InstanceMeta& meta) {
  MetaStrings s;
  if (meta.placement) s.placement = std::string(to_string(*meta.placement));
  if (meta.weights) {
    s.cls = std::string(to_string(meta.weights->cls));
    s.d = format_d(*meta.weights);
  }
  return s;
}

RlsConfig rls_config(const AlgorithmConfig& algo, std::size_t n, std::uint64_t seed) {
  RlsConfig cfg;
  cfg.fitness = algo.fitness;
  cfg.mutation = algo.mutation;
  cfg.budget = algo.budget != 0 ? algo.budget : algo.budget_factor * n;
  cfg.time_limit = algo.time_limit;
  if (algo.time_limit > 0.0 && algo.budget == 0) cfg.budget = 0;
  cfg.seed = seed;
  return cfg;
}

std::string tour_string(const Tour& tour) {
  std::string s;
  for (std::size_t i = 0; i < tour.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(tour[i] + 1);
  }
  return s;
}

Tour parse_tour_string(const std::string& s) {
  std::istringstream ss(s);
  std::vector<City> perm;
  for (long long v; ss >> v;) {
    if (v < 1) throw ValidationError("tour entries are one-based");
    perm.push_back(static_cast<City>(v - 1));
  }
  return Tour(std::move(perm));
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> f;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
  if (!line.empty() && line.back() == ',') f.emplace_back();
  return f;
}

bool close_enough(double a, double b) {
  return std::abs(a - b) <= kAuditTolerance * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

}  // namespace

std::vector<ResultRow> run_experiment(std::span<const NamedInstance> instances,
                                      std::span<const AlgorithmConfig> algorithms,
                                      const ExperimentOptions& options) {
  if (options.runs == 0) throw ValidationError("runs must be positive");
  for (const auto& a : algorithms) {
    if (a.budget == 0 && a.budget_factor == 0 && a.time_limit <= 0.0) {
      throw ValidationError("budget must be positive");
    }
  }
  const std::size_t per_instance = algorithms.size() * options.runs;
  std::vector<ResultRow> rows(instances.size() * per_instance);

  parallel_for(rows.size(), options.jobs, [&](std::size_t cell) {
    const auto& inst = instances[cell / per_instance];
    const auto& algo = algorithms[(cell % per_instance) / options.runs];
    const std::size_t run = cell % options.runs;
    const std::uint64_t seed = run_seed(options.seed, inst.id, run);

    const auto t0 = std::chrono::steady_clock::now();
    const auto result = rls(inst.instance, rls_config(algo, inst.instance.size(), seed));
    const auto t1 = std::chrono::steady_clock::now();

    const auto meta = meta_strings(inst.meta);
    ResultRow& row = rows[cell];
    row.instance_id = inst.id;
    row.instance_path = inst.path;
    row.placement = meta.placement;
    row.cls = meta.cls;
    row.d = meta.d;
    row.n = inst.instance.size();
    row.algorithm = algorithm_name(algo);
    row.fitness = std::string(to_string(algo.fitness));
    row.run = run;
    row.seed = seed;
    row.weighted = weighted_cost(inst.instance, result.best_tour);
    row.tsp = tsp_cost(inst.instance, result.best_tour);
    row.evaluations = result.evaluations_used;
    row.wall_time = std::chrono::duration<double>(t1 - t0).count();
    row.tour = result.best_tour;
  });

  // perf against the best tour found by any algorithm on the instance
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto first = rows.begin() + static_cast<std::ptrdiff_t>(i * per_instance);
    const auto last = first + static_cast<std::ptrdiff_t>(per_instance);
    double best = first->weighted;
    for (auto it = first; it != last; ++it) best = std::min(best, it->weighted);
    for (auto it = first; it != last; ++it) {
      it->perf = best > 0.0 ? perf(it->weighted, best) : (it->weighted == best ? 0.0 : INFINITY);
    }
  }
  return rows;
}

std::string format_results(std::span<const ResultRow> rows, const ExperimentOptions& options,
                           bool include_wall_time) {
  std::ostringstream out;
  out << "# wtsp-results schema=" << kResultsSchema << " tool=" << kToolVersion
      << " seed=" << options.seed << " runs=" << options.runs << '\n';
  out << "instance_id,placement,class,d,n,algorithm,fitness,run,seed,weighted_cost,tsp_cost,"
         "evaluations,perf";
  if (include_wall_time) out << ",wall_time_s";
  out << '\n';
  for (const auto& r : rows) {
    out << r.instance_id << ',' << r.placement << ',' << r.cls << ',' << r.d << ',' << r.n << ','
        << r.algorithm << ',' << r.fitness << ',' << r.run << ',' << r.seed << ','
        << format_number(r.weighted) << ',' << format_number(r.tsp) << ',' << r.evaluations << ','
        << format_number(r.perf);
    if (include_wall_time) out << ',' << format_number(r.wall_time);
    out << '\n';
  }
  return out.str();
}

std::filesystem::path tours_path_for(const std::filesystem::path& csv_path) {
  auto p = csv_path;
  p.replace_extension(".tours.csv");
  return p;
}

void write_results(std::span<const ResultRow> rows, const ExperimentOptions& options,
                   const std::filesystem::path& csv_path) {
  {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + csv_path.string());
    out << format_results(rows, options);
  }
  std::ofstream tours(tours_path_for(csv_path), std::ios::binary);
  if (!tours) throw ValidationError("cannot write " + tours_path_for(csv_path).string());
  tours << "instance_id,instance_path,algorithm,run,weighted_cost,tsp_cost,tour\n";
  for (const auto& r : rows) {
    tours << r.instance_id << ',' << r.instance_path << ',' << r.algorithm << ',' << r.run << ','
          << format_number(r.weighted) << ',' << format_number(r.tsp) << ','
          << tour_string(r.tour) << '\n';
  }
}

std::vector<ResultRow> read_results(const std::filesystem::path& csv_path) {
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + csv_path.string());
  std::vector<ResultRow> rows;
  std::string line;
  bool header = true;
  std::size_t ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    const auto f = split_csv(line);
    if (f.size() < 13) throw ValidationError(csv_path.string() + ":" + std::to_string(ln) + ": short row");
    ResultRow r;
    r.instance_id = f[0];
    r.placement = f[1];
    r.cls = f[2];
    r.d = f[3];
    r.n = std::stoul(f[4]);
    r.algorithm = f[5];
    r.fitness = f[6];
    r.run = std::stoul(f[7]);
    r.seed = std::stoull(f[8]);
    r.weighted = std::stod(f[9]);
    r.tsp = std::stod(f[10]);
    r.evaluations = std::stoull(f[11]);
    r.perf = std::stod(f[12]);
    if (f.size() > 13) r.wall_time = std::stod(f[13]);
    rows.push_back(std::move(r));
  }

  std::ifstream tours(tours_path_for(csv_path), std::ios::binary);
  if (tours) {
    std::getline(tours, line);
    for (std::size_t i = 0; std::getline(tours, line) && i < rows.size(); ++i) {
      const auto f = split_csv(line);
      if (f.size() != 7) continue;
      rows[i].instance_path = f[1];
      rows[i].tour = parse_tour_string(f[6]);
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------

PerfTable compute_perf_table(std::span<const ResultRow> rows) {
  if (rows.empty()) throw ValidationError("no results to aggregate");
  // (class, d) -> algorithm -> perf values; algorithms kept in first-seen order
  std::map<std::pair<std::string, std::string>, std::vector<std::pair<std::string, std::vector<double>>>>
      groups;
  for (const auto& r : rows) {
    auto& algos = groups[{r.cls, r.d}];
    auto it = std::find_if(algos.begin(), algos.end(),
                           [&](const auto& a) { return a.first == r.algorithm; });
    if (it == algos.end()) {
      algos.emplace_back(r.algorithm, std::vector<double>{});
      it = algos.end() - 1;
    }
    it->second.push_back(r.perf);
  }

  PerfTable table;
  for (const auto& [key, algos] : groups) {
    const std::size_t k = algos.size();
    const std::size_t comparisons = k * (k - 1);
    std::vector<PerfCell> cells;
    for (const auto& [name, values] : algos) {
      if (values.empty()) throw ValidationError("empty result group");
      cells.push_back({key.first, key.second, name, summarize(values), {}});
    }
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        if (a == b) continue;
        const auto mw = mann_whitney_less(algos[a].second, algos[b].second);
        PairwiseTest t{key.first, key.second, algos[a].first, algos[b].first, mw.p,
                       bonferroni(mw.p, comparisons)};
        if (t.p_adjusted < kSignificance) cells[a].superior_to.push_back(algos[b].first);
        table.tests.push_back(std::move(t));
      }
    }
    table.cells.insert(table.cells.end(), cells.begin(), cells.end());
  }
  return table;
}

std::string format_perf_table(const PerfTable& table) {
  std::ostringstream out;
  out << "class,d,algorithm,count,mean,std,median,superior_to\n";
  for (const auto& c : table.cells) {
    out << c.cls << ',' << c.d << ',' << c.algorithm << ',' << c.perf.count << ','
        << format_number(c.perf.mean) << ',' << format_number(c.perf.sd) << ','
        << format_number(c.perf.median) << ',';
    for (std::size_t i = 0; i < c.superior_to.size(); ++i) {
      if (i) out << ' ';
      out << c.superior_to[i] << '+';
    }
    out << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------

std::vector<RatioRow> driver_ratio_protocol(std::span<const NamedInstance> instances,
                                            const AlgorithmConfig& solver,
                                            const ExperimentOptions& options) {
  AlgorithmConfig classical = solver, weighted = solver;
  classical.fitness = Fitness::tsp;
  weighted.fitness = Fitness::weighted;
  classical.name = weighted.name = {};
  const std::array<AlgorithmConfig, 2> drivers{classical, weighted};
  const auto rows = run_experiment(instances, drivers, options);

  std::vector<RatioRow> out;
  const std::size_t runs = options.runs;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    for (std::size_t r = 0; r < runs; ++r) {
      const auto& a = rows[i * 2 * runs + r];
      const auto& b = rows[i * 2 * runs + runs + r];
      if (!(b.weighted > 0.0)) throw ValidationError("degenerate zero-cost tour on " + a.instance_id);
      out.push_back({a.instance_id, a.placement, a.cls, a.d, a.n, r, a.weighted, b.weighted,
                     a.weighted / b.weighted});
    }
  }
  return out;
}

double exact_driver_ratio(const Instance& instance) {
  const auto weighted_opt = held_karp_wtsp(instance);
  if (!(weighted_opt.cost > 0.0)) throw ValidationError("degenerate zero-cost optimum");
  const auto classical = exact_tsp(instance);
  return weighted_cost(instance, classical.tour) / weighted_opt.cost;
}

std::vector<RatioSummary> summarize_ratios(std::span<const RatioRow> rows) {
  std::map<std::tuple<std::string, std::string, std::string, std::size_t>, std::vector<double>> groups;
  for (const auto& r : rows) groups[{r.placement, r.cls, r.d, r.n}].push_back(r.ratio);
  std::vector<RatioSummary> out;
  for (const auto& [key, values] : groups) {
    out.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), std::get<3>(key),
                   summarize(values)});
  }
  return out;
}

std::string format_ratios(std::span<const RatioRow> rows) {
  std::ostringstream out;
  out << "instance_id,placement,class,d,n,run,weighted_tsp_driver,weighted_weighted_driver,ratio\n";
  for (const auto& r : rows) {
    out << r.instance_id << ',' << r.placement << ',' << r.cls << ',' << r.d << ',' << r.n << ','
        << r.run << ',' << format_number(r.weighted_of_tsp_driver) << ','
        << format_number(r.weighted_of_weighted_driver) << ',' << format_number(r.ratio) << '\n';
  }
  return out.str();
}

std::string format_ratio_summary(std::span<const RatioSummary> summary) {
  std::ostringstream out;
  out << "placement,class,d,n,count,q1,median,q3,max\n";
  for (const auto& s : summary) {
    out << s.placement << ',' << s.cls << ',' << s.d << ',' << s.n << ',' << s.ratio.count << ','
        << format_number(s.ratio.q1) << ',' << format_number(s.ratio.median) << ','
        << format_number(s.ratio.q3) << ',' << format_number(s.ratio.max) << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------

std::string format_tour(const Tour& tour, const std::string& name,
                        std::optional<CostReport> costs) {
  std::ostringstream out;
  out << "NAME: " << name << '\n' << "TYPE: TOUR\n" << "DIMENSION: " << tour.size() << '\n';
  if (costs) {
    out << "WEIGHTED_COST: " << format_number(costs->weighted) << '\n';
    out << "TSP_COST: " << format_number(costs->tsp) << '\n';
    out << "LATENCY: " << format_number(costs->latency) << '\n';
  }
  out << "TOUR_SECTION\n";
  for (City c : tour) out << c + 1 << '\n';
  out << "-1\nEOF\n";
  return out.str();
}

void write_tour(const Tour& tour, const std::string& name, std::optional<CostReport> costs,
                const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << format_tour(tour, name, costs);
}

TourFile read_tour(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  TourFile file;
  std::vector<City> perm;
  std::string line;
  bool in_section = false;
  std::size_t ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (in_section) {
      long long v = 0;
      try {
        v = std::stoll(line);
      } catch (const std::exception&) {
        throw ParseError(ln, "expected a city index, got '" + line + "'");
      }
      if (v == -1) {
        in_section = false;
        continue;
      }
      if (v < 1) throw ParseError(ln, "tour entries are one-based");
      perm.push_back(static_cast<City>(v - 1));
      continue;
    }
    if (line == "TOUR_SECTION") {
      in_section = true;
      continue;
    }
    if (line == "EOF") break;
    const auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    const std::string key = line.substr(0, colon);
    const std::string value = line.substr(colon + 1);
    try {
      if (key == "WEIGHTED_COST") file.weighted = std::stod(value);
      if (key == "TSP_COST") file.tsp = std::stod(value);
    } catch (const std::exception&) {
      throw ParseError(ln, "bad cost value");
    }
  }
  try {
    file.tour = Tour(std::move(perm));
  } catch (const ValidationError& e) {
    throw ParseError(ln, e.what());
  }
  return file;
}

AuditResult audit_tour(const Instance& instance, const Tour& tour,
                       std::optional<double> expected_weighted, std::optional<double> expected_tsp) {
  if (tour.size() != instance.size()) {
    throw ValidationError("tour dimension " + std::to_string(tour.size()) +
                          " does not match instance dimension " + std::to_string(instance.size()));
  }
  AuditResult result;
  result.costs = cost_report(instance, tour);
  if (expected_weighted && !close_enough(*expected_weighted, result.costs.weighted)) {
    result.matches = false;
    result.message = "weighted cost " + format_number(result.costs.weighted) +
                     " differs from recorded " + format_number(*expected_weighted);
  }
  if (expected_tsp && !close_enough(*expected_tsp, result.costs.tsp)) {
    result.matches = false;
    if (!result.message.empty()) result.message += "; ";
    result.message += "tsp cost " + format_number(result.costs.tsp) + " differs from recorded " +
                      format_number(*expected_tsp);
  }
  return result;
}

std::vector<std::string> audit_results(const std::filesystem::path& csv_path) {
  const auto rows = read_results(csv_path);
  std::map<std::string, Instance> cache;
  std::vector<std::string> failures;
  for (const auto& r : rows) {
    const std::string where = r.instance_id + " " + r.algorithm + " run " + std::to_string(r.run);
    if (r.tour.size() == 0) {
      failures.push_back(where + ": no persisted tour");
      continue;
    }
    if (r.instance_path.empty()) {
      failures.push_back(where + ": instance path not recorded");
      continue;
    }
    auto it = cache.find(r.instance_path);
    if (it == cache.end()) {
      it = cache.emplace(r.instance_path, read_instance(r.instance_path).instance).first;
    }
    const auto audit = audit_tour(it->second, r.tour, r.weighted, r.tsp);
    if (!audit.matches) failures.push_back(where + ": " + audit.message);
  }
  return failures;
}

}  // namespace wtsp

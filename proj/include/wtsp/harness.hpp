#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wtsp/core.hpp"
#include "wtsp/heuristics.hpp"
#include "wtsp/instances.hpp"
#include "wtsp/stats.hpp"

namespace wtsp {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kResultsSchema = 1;

/// Runs fn(0..count-1) on `jobs` worker threads. The first exception thrown
/// by any task is rethrown after all workers stop.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn);

/// An instance together with its identifier and descriptive metadata.
struct NamedInstance {
  std::string id;
  Instance instance;
  InstanceMeta meta;
  std::string path;  // empty for in-memory instances
};

NamedInstance load_named(const std::filesystem::path& path);
NamedInstance make_named(const GeneratorSpec& spec, std::string id = {});

/// Seed of run `run` on instance `id`: derive_seed(mix(top, hash(id)), run).
std::uint64_t run_seed(std::uint64_t top_seed, const std::string& instance_id, std::size_t run);

struct AlgorithmConfig {
  std::string name;  // defaults to "rls-<mutation>" (+ "-tsp" for the tsp driver)
  MutationKind mutation = MutationKind::inversion;
  Fitness fitness = Fitness::weighted;
  std::uint64_t budget_factor = 1000;  // budget = factor * n unless `budget` is set
  std::uint64_t budget = 0;
  double time_limit = 0.0;
};

std::string algorithm_name(const AlgorithmConfig& config);

struct ExperimentOptions {
  std::size_t runs = 30;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
};

struct ResultRow {
  std::string instance_id;
  std::string instance_path;
  std::string placement;  // "-" when unknown
  std::string cls;
  std::string d;
  std::size_t n = 0;
  std::string algorithm;
  std::string fitness;
  std::size_t run = 0;
  std::uint64_t seed = 0;
  double weighted = 0.0;
  double tsp = 0.0;
  std::uint64_t evaluations = 0;
  double perf = 0.0;  // against the best weighted cost on the instance
  double wall_time = 0.0;
  Tour tour;
};

/// One row per (instance, algorithm, run), ordered by that key. perf is
/// filled in against the best weighted cost over all rows of an instance.
std::vector<ResultRow> run_experiment(std::span<const NamedInstance> instances,
                                      std::span<const AlgorithmConfig> algorithms,
                                      const ExperimentOptions& options);

/// Writes the results CSV (schema header comment first, wall time last) and
/// a companion tours CSV next to it.
void write_results(std::span<const ResultRow> rows, const ExperimentOptions& options,
                   const std::filesystem::path& csv_path);
std::string format_results(std::span<const ResultRow> rows, const ExperimentOptions& options,
                           bool include_wall_time = true);
std::filesystem::path tours_path_for(const std::filesystem::path& csv_path);

/// Reads a results CSV; tours are attached when the companion file exists.
std::vector<ResultRow> read_results(const std::filesystem::path& csv_path);

// ---------------------------------------------------------------------------

struct PerfCell {
  std::string cls;
  std::string d;
  std::string algorithm;
  Summary perf;
  std::vector<std::string> superior_to;  // algorithms beaten at adjusted p < 0.05
};

struct PairwiseTest {
  std::string cls, d;
  std::string better, worse;  // H1: perf(better) stochastically smaller
  double p_raw = 1.0;
  double p_adjusted = 1.0;
};

struct PerfTable {
  std::vector<PerfCell> cells;
  std::vector<PairwiseTest> tests;
};

inline constexpr double kSignificance = 0.05;

/// Per (class, d, algorithm) summary of perf plus all one-sided pairwise
/// Mann-Whitney tests inside each (class, d) group, Bonferroni-adjusted over
/// the k(k-1) tests of the group.
PerfTable compute_perf_table(std::span<const ResultRow> rows);
std::string format_perf_table(const PerfTable& table);

// ---------------------------------------------------------------------------

struct RatioRow {
  std::string instance_id;
  std::string placement, cls, d;
  std::size_t n = 0;
  std::size_t run = 0;
  double weighted_of_tsp_driver = 0.0;
  double weighted_of_weighted_driver = 0.0;
  double ratio = 0.0;
};

struct RatioSummary {
  std::string placement, cls, d;
  std::size_t n = 0;
  Summary ratio;
};

/// The same solver run with the classical and the weighted fitness; both
/// final tours are scored by the weighted cost and run i of one driver is
/// paired with run i of the other.
std::vector<RatioRow> driver_ratio_protocol(std::span<const NamedInstance> instances,
                                            const AlgorithmConfig& solver,
                                            const ExperimentOptions& options);

/// Small-n variant: the optimal classical tour scored by the weighted cost,
/// divided by the weighted optimum.
double exact_driver_ratio(const Instance& instance);

std::vector<RatioSummary> summarize_ratios(std::span<const RatioRow> rows);
std::string format_ratios(std::span<const RatioRow> rows);
std::string format_ratio_summary(std::span<const RatioSummary> summary);

// ---------------------------------------------------------------------------

struct TourFile {
  Tour tour;
  std::optional<double> weighted;
  std::optional<double> tsp;
};

/// TSPLIB .tour with optional WEIGHTED_COST / TSP_COST header records.
std::string format_tour(const Tour& tour, const std::string& name,
                        std::optional<CostReport> costs = std::nullopt);
void write_tour(const Tour& tour, const std::string& name, std::optional<CostReport> costs,
                const std::filesystem::path& path);
TourFile read_tour(const std::filesystem::path& path);

inline constexpr double kAuditTolerance = 1e-6;

struct AuditResult {
  CostReport costs;
  bool matches = true;
  std::string message;
};

/// Recomputes the costs of a tour. When expected values are given they are
/// compared with relative tolerance kAuditTolerance.
AuditResult audit_tour(const Instance& instance, const Tour& tour,
                       std::optional<double> expected_weighted = std::nullopt,
                       std::optional<double> expected_tsp = std::nullopt);

/// Re-audits every row of a results CSV against its persisted tour.
std::vector<std::string> audit_results(const std::filesystem::path& csv_path);

}  // namespace wtsp

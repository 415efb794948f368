#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wtsp/core.hpp"

namespace wtsp {

enum class Placement { rue, netgen, tspgen };
enum class WeightClass { C1, C2, C3 };

std::string_view to_string(Placement placement);
std::string_view to_string(WeightClass cls);
Placement parse_placement(std::string_view name);
WeightClass parse_weight_class(std::string_view name);

/// C1: every non-start city weighs d, d in [0, 1].
/// C2: uniform integers in {1..d}.  C3: uniform integers in {0..d}.
/// For C2 and C3, d is an integer in 1..10. The start city always weighs 1.
struct WeightConfig {
  WeightClass cls = WeightClass::C2;
  double d = 2.0;
};

void validate(const WeightConfig& config);

/// Formats d the way ids and files do: "0.1" for C1, "5" for C2/C3.
std::string format_d(const WeightConfig& config);

inline constexpr double kBoxSize = 1000.0;

struct NetgenParams {
  double center_lo = 200.0;
  double center_hi = 800.0;
  double min_separation = 400.0;
  double sigma = 60.0;
};

struct GeneratorSpec {
  std::size_t n = 100;
  Placement placement = Placement::rue;
  WeightConfig weights;
  std::uint64_t placement_seed = 0;
  std::uint64_t weight_seed = 0;
  std::size_t tspgen_rounds = 10;
  NetgenParams netgen;
};

/// n points with integer coordinates in [0, 1000]^2.
///   rue:    uniform.
///   netgen: two Gaussian clusters, first half of the cities in the first.
///   tspgen: rue followed by `tspgen_rounds` random explosion, implosion or
///           cluster mutations.
std::vector<Point> generate_placement(const GeneratorSpec& spec);

std::vector<double> assign_weights(std::size_t n, const WeightConfig& config,
                                   std::uint64_t seed);

Instance generate_instance(const GeneratorSpec& spec);

/// "rue-n100-C2-d5-<placement seed>-<weight seed>". Suite entries use
/// replicate numbers instead of seeds.
std::string instance_id(const GeneratorSpec& spec);

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

/// Descriptive header fields carried alongside an instance.
struct InstanceMeta {
  std::string name;
  std::string comment;
  std::optional<Placement> placement;
  std::optional<WeightConfig> weights;
  std::optional<std::uint64_t> placement_seed;
  std::optional<std::uint64_t> weight_seed;
};

InstanceMeta meta_for(const GeneratorSpec& spec);

struct InstanceFile {
  Instance instance;
  InstanceMeta meta;
  bool weights_defaulted = false;     // no NODE_WEIGHT_SECTION; unit weights used
  bool start_weight_flagged = false;  // w(start) != 1
};

class ParseError : public ValidationError {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// TSPLIB-style text: header, NODE_COORD_SECTION (or EDGE_WEIGHT_SECTION for
/// explicit matrices), NODE_WEIGHT_SECTION, EOF. Numbers use the shortest
/// representation that reads back exactly.
std::string format_instance(const Instance& instance, const InstanceMeta& meta);
void write_instance(const Instance& instance, const InstanceMeta& meta,
                    const std::filesystem::path& path);

InstanceFile parse_instance(std::istream& in);
InstanceFile read_instance(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Benchmark suite
// ---------------------------------------------------------------------------

struct SuiteEntry {
  std::string id;
  GeneratorSpec spec;
};

inline const std::vector<std::size_t> kSuiteSizes{25, 50, 100, 500, 1000};

/// The 30 weight configurations (C1: d = 0.0..1.0, C2: 2..10, C3: 1..10).
std::vector<WeightConfig> suite_weight_configs();

/// Cross product of weight configurations x sizes x 10 placement replicates
/// x 10 weight replicates for one placement kind, with every seed derived
/// from `seed`. Placement seeds depend only on (placement, n, replicate).
std::vector<SuiteEntry> benchmark_suite(std::uint64_t seed, Placement placement,
                                        std::span<const std::size_t> sizes = kSuiteSizes,
                                        std::size_t placement_reps = 10,
                                        std::size_t weight_reps = 10);

void write_manifest(std::span<const SuiteEntry> entries, const std::filesystem::path& path);
std::vector<SuiteEntry> read_manifest(const std::filesystem::path& path);

/// Shortest round-trip decimal form of a double.
std::string format_number(double value);

}  // namespace wtsp

#include "wtsp/instances.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "wtsp/rng.hpp"

namespace wtsp {

std::string_view to_string(Placement placement) {
  switch (placement) {
    case Placement::rue: return "rue";
    case Placement::netgen: return "netgen";
    case Placement::tspgen: return "tspgen";
  }
  return "?";
}

std::string_view to_string(WeightClass cls) {
  switch (cls) {
    case WeightClass::C1: return "C1";
    case WeightClass::C2: return "C2";
    case WeightClass::C3: return "C3";
  }
  return "?";
}

Placement parse_placement(std::string_view name) {
  if (name == "rue") return Placement::rue;
  if (name == "netgen") return Placement::netgen;
  if (name == "tspgen") return Placement::tspgen;
  throw ValidationError("unknown placement '" + std::string(name) + "'");
}

WeightClass parse_weight_class(std::string_view name) {
  if (name == "C1" || name == "c1") return WeightClass::C1;
  if (name == "C2" || name == "c2") return WeightClass::C2;
  if (name == "C3" || name == "c3") return WeightClass::C3;
  throw ValidationError("unknown weight class '" + std::string(name) + "'");
}

void validate(const WeightConfig& config) {
  if (config.cls == WeightClass::C1) {
    if (!(config.d >= 0.0 && config.d <= 1.0)) {
      throw ValidationError("C1 needs d in [0, 1], got " + format_number(config.d));
    }
    return;
  }
  if (config.d != std::floor(config.d) || config.d < 1.0 || config.d > 10.0) {
    throw ValidationError(std::string(to_string(config.cls)) +
                          " needs an integer d in 1..10, got " + format_number(config.d));
  }
}

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string format_d(const WeightConfig& config) {
  if (config.cls == WeightClass::C1) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", config.d);
    // keep full precision for off-grid values
    return std::stod(buf) == config.d ? std::string(buf) : format_number(config.d);
  }
  return format_number(config.d);
}

namespace {

double clamp_box(double v) { return std::clamp(v, 0.0, kBoxSize); }

Point random_box_point(Rng& rng) {
  return {static_cast<double>(rng.uniform_int(0, 1000)),
          static_cast<double>(rng.uniform_int(0, 1000))};
}

std::vector<Point> rue(std::size_t n, Rng& rng) {
  std::vector<Point> pts(n);
  for (auto& p : pts) p = random_box_point(rng);
  return pts;
}

// Gaussian sample rounded to the integer grid; out-of-box draws are redrawn.
Point gaussian_point(Rng& rng, Point center, double sigma) {
  while (true) {
    const double x = std::nearbyint(rng.normal(center.x, sigma));
    const double y = std::nearbyint(rng.normal(center.y, sigma));
    if (x >= 0.0 && x <= kBoxSize && y >= 0.0 && y <= kBoxSize) return {x, y};
  }
}

std::vector<Point> netgen(std::size_t n, const NetgenParams& params, Rng& rng) {
  Point a, b;
  do {
    a = {rng.uniform(params.center_lo, params.center_hi),
         rng.uniform(params.center_lo, params.center_hi)};
    b = {rng.uniform(params.center_lo, params.center_hi),
         rng.uniform(params.center_lo, params.center_hi)};
  } while (std::hypot(a.x - b.x, a.y - b.y) < params.min_separation);

  std::vector<Point> pts(n);
  for (std::size_t i = 0; i < n; ++i) pts[i] = gaussian_point(rng, i < n / 2 ? a : b, params.sigma);
  return pts;
}

void explosion(std::vector<Point>& pts, Rng& rng) {
  const Point c = random_box_point(rng);
  const double radius = rng.uniform(50.0, 250.0);
  for (auto& p : pts) {
    const double dx = p.x - c.x, dy = p.y - c.y;
    const double dist = std::hypot(dx, dy);
    if (dist >= radius) continue;
    double ux, uy;
    if (dist > 0.0) {
      ux = dx / dist;
      uy = dy / dist;
    } else {
      const double angle = rng.uniform(0.0, 2.0 * 3.141592653589793);
      ux = std::cos(angle);
      uy = std::sin(angle);
    }
    // push just past the rim by an exponential amount (mean 30)
    const double push = radius - 30.0 * std::log(1.0 - rng.uniform01());
    p = {std::nearbyint(clamp_box(c.x + ux * push)), std::nearbyint(clamp_box(c.y + uy * push))};
  }
}

void implosion(std::vector<Point>& pts, Rng& rng) {
  const Point c = random_box_point(rng);
  const double radius = rng.uniform(50.0, 250.0);
  const double factor = rng.uniform(0.1, 0.5);
  for (auto& p : pts) {
    if (std::hypot(p.x - c.x, p.y - c.y) >= radius) continue;
    p = {std::nearbyint(c.x + (p.x - c.x) * factor), std::nearbyint(c.y + (p.y - c.y) * factor)};
  }
}

void cluster(std::vector<Point>& pts, Rng& rng) {
  const Point c = random_box_point(rng);
  const double sigma = rng.uniform(10.0, 40.0);
  const auto count = static_cast<std::size_t>(
      std::ceil(rng.uniform(0.1, 0.3) * static_cast<double>(pts.size())));
  std::vector<std::size_t> idx(pts.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  // partial Fisher-Yates picks `count` distinct points
  for (std::size_t i = 0; i < count && i < idx.size(); ++i) {
    std::swap(idx[i], idx[i + rng.below(idx.size() - i)]);
    pts[idx[i]] = gaussian_point(rng, c, sigma);
  }
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) { return splitmix64(a ^ splitmix64(b)); }

}  // namespace

std::vector<Point> generate_placement(const GeneratorSpec& spec) {
  if (spec.n < 2) throw ValidationError("placement needs at least 2 cities");
  Rng rng(spec.placement_seed);
  switch (spec.placement) {
    case Placement::rue:
      return rue(spec.n, rng);
    case Placement::netgen:
      return netgen(spec.n, spec.netgen, rng);
    case Placement::tspgen: {
      auto pts = rue(spec.n, rng);
      for (std::size_t r = 0; r < spec.tspgen_rounds; ++r) {
        switch (rng.below(3)) {
          case 0: explosion(pts, rng); break;
          case 1: implosion(pts, rng); break;
          default: cluster(pts, rng); break;
        }
      }
      return pts;
    }
  }
  return {};
}

std::vector<double> assign_weights(std::size_t n, const WeightConfig& config,
                                   std::uint64_t seed) {
  validate(config);
  Rng rng(seed);
  std::vector<double> w(n);
  const auto d = static_cast<std::int64_t>(config.d);
  for (std::size_t i = 1; i < n; ++i) {
    switch (config.cls) {
      case WeightClass::C1: w[i] = config.d; break;
      case WeightClass::C2: w[i] = static_cast<double>(rng.uniform_int(1, d)); break;
      case WeightClass::C3: w[i] = static_cast<double>(rng.uniform_int(0, d)); break;
    }
  }
  if (n > 0) w[0] = 1.0;
  return w;
}

Instance generate_instance(const GeneratorSpec& spec) {
  return Instance::euclidean(generate_placement(spec),
                             assign_weights(spec.n, spec.weights, spec.weight_seed));
}

std::string instance_id(const GeneratorSpec& spec) {
  return std::string(to_string(spec.placement)) + "-n" + std::to_string(spec.n) + "-" +
         std::string(to_string(spec.weights.cls)) + "-d" + format_d(spec.weights) + "-" +
         std::to_string(spec.placement_seed) + "-" + std::to_string(spec.weight_seed);
}

InstanceMeta meta_for(const GeneratorSpec& spec) {
  InstanceMeta meta;
  meta.name = instance_id(spec);
  meta.placement = spec.placement;
  meta.weights = spec.weights;
  meta.placement_seed = spec.placement_seed;
  meta.weight_seed = spec.weight_seed;
  return meta;
}

// ---------------------------------------------------------------------------

ParseError::ParseError(std::size_t line, const std::string& what)
    : ValidationError("line " + std::to_string(line) + ": " + what), line_(line) {}

std::string format_instance(const Instance& instance, const InstanceMeta& meta) {
  std::ostringstream out;
  const std::size_t n = instance.size();
  out << "NAME: " << (meta.name.empty() ? "unnamed" : meta.name) << '\n';
  out << "TYPE: WTSP\n";
  if (!meta.comment.empty()) out << "COMMENT: " << meta.comment << '\n';
  if (meta.placement) out << "PLACEMENT: " << to_string(*meta.placement) << '\n';
  if (meta.weights) {
    out << "WEIGHT_CLASS: " << to_string(meta.weights->cls) << '\n';
    out << "WEIGHT_D: " << format_d(*meta.weights) << '\n';
  }
  if (meta.placement_seed) out << "PLACEMENT_SEED: " << *meta.placement_seed << '\n';
  if (meta.weight_seed) out << "WEIGHT_SEED: " << *meta.weight_seed << '\n';
  out << "DIMENSION: " << n << '\n';
  if (instance.start() != 0) out << "START_NODE: " << instance.start() + 1 << '\n';

  if (instance.has_coordinates()) {
    out << "EDGE_WEIGHT_TYPE: "
        << (instance.rounding() == DistanceRounding::nearest ? "EUC_2D" : "EUC_2D_REAL") << '\n';
    out << "NODE_COORD_SECTION\n";
    for (std::size_t i = 0; i < n; ++i) {
      const auto p = instance.points()[i];
      out << i + 1 << ' ' << format_number(p.x) << ' ' << format_number(p.y) << '\n';
    }
  } else {
    out << "EDGE_WEIGHT_TYPE: EXPLICIT\n";
    out << "EDGE_WEIGHT_FORMAT: FULL_MATRIX\n";
    if (!instance.metric()) out << "METRIC: NO\n";
    out << "EDGE_WEIGHT_SECTION\n";
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (b) out << ' ';
        out << format_number(instance.distance(a, b));
      }
      out << '\n';
    }
  }
  out << "NODE_WEIGHT_SECTION\n";
  for (std::size_t i = 0; i < n; ++i) out << i + 1 << ' ' << format_number(instance.weight(i)) << '\n';
  out << "EOF\n";
  return out.str();
}

void write_instance(const Instance& instance, const InstanceMeta& meta,
                    const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << format_instance(instance, meta);
  if (!out) throw ValidationError("failed writing " + path.string());
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& tok, std::size_t line) {
  double v = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
    throw ParseError(line, "expected a number, got '" + tok + "'");
  }
  return v;
}

std::uint64_t parse_uint(const std::string& tok, std::size_t line) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
    throw ParseError(line, "expected a nonnegative integer, got '" + tok + "'");
  }
  return v;
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++number_;
      line = trim(line);
      if (!line.empty()) return true;
    }
    return false;
  }
  std::size_t number() const { return number_; }

 private:
  std::istream& in_;
  std::size_t number_ = 0;
};

std::vector<std::string> split(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> toks;
  for (std::string t; ss >> t;) toks.push_back(t);
  return toks;
}

}  // namespace

InstanceFile parse_instance(std::istream& in) {
  LineReader reader(in);
  InstanceMeta meta;
  std::optional<std::size_t> dimension;
  std::string edge_type;
  std::string edge_format = "FULL_MATRIX";
  bool metric = true;
  std::size_t start = 0;
  std::optional<WeightClass> cls;
  std::optional<double> d;
  std::vector<Point> points;
  std::vector<double> matrix;
  std::vector<double> weights;
  bool have_coords = false, have_matrix = false, have_weights = false;

  auto need_dim = [&](std::size_t line) {
    if (!dimension) throw ParseError(line, "section before DIMENSION");
    return *dimension;
  };

  std::string line;
  while (reader.next(line)) {
    const std::size_t ln = reader.number();
    if (line == "EOF") break;
    if (line == "NODE_COORD_SECTION") {
      const std::size_t n = need_dim(ln);
      points.assign(n, Point{});
      std::vector<bool> seen(n, false);
      for (std::size_t i = 0; i < n; ++i) {
        if (!reader.next(line)) throw ParseError(reader.number(), "truncated NODE_COORD_SECTION");
        const auto toks = split(line);
        if (toks.size() != 3) throw ParseError(reader.number(), "expected 'index x y'");
        const auto idx = parse_uint(toks[0], reader.number());
        if (idx < 1 || idx > n || seen[idx - 1]) throw ParseError(reader.number(), "bad node index");
        seen[idx - 1] = true;
        points[idx - 1] = {parse_double(toks[1], reader.number()),
                           parse_double(toks[2], reader.number())};
      }
      have_coords = true;
      continue;
    }
    if (line == "EDGE_WEIGHT_SECTION") {
      const std::size_t n = need_dim(ln);
      if (edge_format != "FULL_MATRIX") {
        throw ParseError(ln, "only EDGE_WEIGHT_FORMAT: FULL_MATRIX is supported");
      }
      matrix.clear();
      matrix.reserve(n * n);
      while (matrix.size() < n * n) {
        if (!reader.next(line)) throw ParseError(reader.number(), "truncated EDGE_WEIGHT_SECTION");
        for (const auto& tok : split(line)) matrix.push_back(parse_double(tok, reader.number()));
      }
      if (matrix.size() != n * n) throw ParseError(reader.number(), "too many matrix entries");
      have_matrix = true;
      continue;
    }
    if (line == "NODE_WEIGHT_SECTION") {
      const std::size_t n = need_dim(ln);
      weights.assign(n, 0.0);
      std::vector<bool> seen(n, false);
      for (std::size_t i = 0; i < n; ++i) {
        if (!reader.next(line)) throw ParseError(reader.number(), "truncated NODE_WEIGHT_SECTION");
        const auto toks = split(line);
        if (toks.size() != 2) throw ParseError(reader.number(), "expected 'index weight'");
        const auto idx = parse_uint(toks[0], reader.number());
        if (idx < 1 || idx > n || seen[idx - 1]) throw ParseError(reader.number(), "bad node index");
        seen[idx - 1] = true;
        weights[idx - 1] = parse_double(toks[1], reader.number());
        if (weights[idx - 1] < 0.0) throw ParseError(reader.number(), "negative weight");
      }
      have_weights = true;
      continue;
    }

    const auto colon = line.find(':');
    if (colon == std::string::npos) throw ParseError(ln, "expected 'KEY: value', got '" + line + "'");
    const std::string key = trim(std::string_view(line).substr(0, colon));
    const std::string value = trim(std::string_view(line).substr(colon + 1));
    if (key == "NAME") {
      meta.name = value;
    } else if (key == "COMMENT") {
      meta.comment = value;
    } else if (key == "TYPE") {
      if (value != "WTSP" && value != "TSP") throw ParseError(ln, "unsupported TYPE " + value);
    } else if (key == "DIMENSION") {
      dimension = parse_uint(value, ln);
      if (*dimension == 0) throw ParseError(ln, "DIMENSION must be positive");
    } else if (key == "EDGE_WEIGHT_TYPE") {
      if (value != "EUC_2D" && value != "EUC_2D_REAL" && value != "EXPLICIT") {
        throw ParseError(ln, "unsupported EDGE_WEIGHT_TYPE " + value);
      }
      edge_type = value;
    } else if (key == "EDGE_WEIGHT_FORMAT") {
      edge_format = value;
    } else if (key == "METRIC") {
      metric = value != "NO";
    } else if (key == "START_NODE") {
      start = parse_uint(value, ln);
      if (start < 1) throw ParseError(ln, "START_NODE is one-based");
      --start;
    } else if (key == "PLACEMENT") {
      try {
        meta.placement = parse_placement(value);
      } catch (const ValidationError& e) {
        throw ParseError(ln, e.what());
      }
    } else if (key == "WEIGHT_CLASS") {
      try {
        cls = parse_weight_class(value);
      } catch (const ValidationError& e) {
        throw ParseError(ln, e.what());
      }
    } else if (key == "WEIGHT_D") {
      d = parse_double(value, ln);
    } else if (key == "PLACEMENT_SEED") {
      meta.placement_seed = parse_uint(value, ln);
    } else if (key == "WEIGHT_SEED") {
      meta.weight_seed = parse_uint(value, ln);
    }
    // other TSPLIB keys (DISPLAY_DATA_TYPE, ...) are ignored
  }

  const std::size_t end_line = reader.number();
  if (!dimension) throw ParseError(end_line, "missing DIMENSION");
  if (cls && d) meta.weights = WeightConfig{*cls, *d};

  bool defaulted = false;
  if (!have_weights) {
    weights.assign(*dimension, 1.0);
    defaulted = true;
  }
  if (start >= *dimension) throw ParseError(end_line, "START_NODE out of range");

  try {
    if (edge_type == "EXPLICIT") {
      if (!have_matrix) throw ParseError(end_line, "EXPLICIT instance without EDGE_WEIGHT_SECTION");
      auto inst = Instance::from_matrix(std::move(matrix), std::move(weights), start, metric);
      const bool flagged = inst.weight(start) != 1.0;
      return {std::move(inst), std::move(meta), defaulted, flagged};
    }
    if (!have_coords) throw ParseError(end_line, "missing NODE_COORD_SECTION");
    const auto rounding = edge_type == "EUC_2D" ? DistanceRounding::nearest : DistanceRounding::none;
    auto inst = Instance::euclidean(std::move(points), std::move(weights), start, rounding);
    const bool flagged = inst.weight(start) != 1.0;
    return {std::move(inst), std::move(meta), defaulted, flagged};
  } catch (const ParseError&) {
    throw;
  } catch (const ValidationError& e) {
    throw ParseError(end_line, e.what());
  }
}

InstanceFile read_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  try {
    return parse_instance(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------

std::vector<WeightConfig> suite_weight_configs() {
  std::vector<WeightConfig> configs;
  for (int i = 0; i <= 10; ++i) configs.push_back({WeightClass::C1, i / 10.0});
  for (int d = 2; d <= 10; ++d) configs.push_back({WeightClass::C2, static_cast<double>(d)});
  for (int d = 1; d <= 10; ++d) configs.push_back({WeightClass::C3, static_cast<double>(d)});
  return configs;
}

std::vector<SuiteEntry> benchmark_suite(std::uint64_t seed, Placement placement,
                                        std::span<const std::size_t> sizes,
                                        std::size_t placement_reps, std::size_t weight_reps) {
  std::vector<SuiteEntry> entries;
  const auto configs = suite_weight_configs();
  entries.reserve(configs.size() * sizes.size() * placement_reps * weight_reps);
  const std::uint64_t pl_tag = mix(seed, 0x706c6163 + static_cast<std::uint64_t>(placement));
  for (std::size_t ci = 0; ci < configs.size(); ++ci) {
    for (std::size_t n : sizes) {
      for (std::size_t p = 0; p < placement_reps; ++p) {
        for (std::size_t q = 0; q < weight_reps; ++q) {
          GeneratorSpec spec;
          spec.n = n;
          spec.placement = placement;
          spec.weights = configs[ci];
          spec.placement_seed = mix(mix(pl_tag, n), p);
          spec.weight_seed = mix(mix(mix(mix(seed, 0x77656967), ci), n), p * 1000 + q);
          std::string id = std::string(to_string(placement)) + "-n" + std::to_string(n) + "-" +
                           std::string(to_string(spec.weights.cls)) + "-d" +
                           format_d(spec.weights) + "-p" + std::to_string(p) + "-w" +
                           std::to_string(q);
          entries.push_back({std::move(id), spec});
        }
      }
    }
  }
  return entries;
}

void write_manifest(std::span<const SuiteEntry> entries, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << "id,n,placement,class,d,placement_seed,weight_seed,tspgen_rounds\n";
  for (const auto& e : entries) {
    out << e.id << ',' << e.spec.n << ',' << to_string(e.spec.placement) << ','
        << to_string(e.spec.weights.cls) << ',' << format_d(e.spec.weights) << ','
        << e.spec.placement_seed << ',' << e.spec.weight_seed << ',' << e.spec.tspgen_rounds
        << '\n';
  }
}

std::vector<SuiteEntry> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::vector<SuiteEntry> entries;
  std::string line;
  std::size_t ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    line = trim(line);
    if (line.empty() || line[0] == '#' || ln == 1) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 8) throw ParseError(ln, "manifest rows have 8 fields");
    SuiteEntry e;
    e.id = f[0];
    e.spec.n = parse_uint(f[1], ln);
    try {
      e.spec.placement = parse_placement(f[2]);
      e.spec.weights = {parse_weight_class(f[3]), parse_double(f[4], ln)};
      validate(e.spec.weights);
    } catch (const ParseError&) {
      throw;
    } catch (const ValidationError& err) {
      throw ParseError(ln, err.what());
    }
    e.spec.placement_seed = parse_uint(f[5], ln);
    e.spec.weight_seed = parse_uint(f[6], ln);
    e.spec.tspgen_rounds = parse_uint(f[7], ln);
    entries.push_back(std::move(e));
  }
  return entries;
}

}  // namespace wtsp

#include <doctest.h>

#include <filesystem>
#include <set>
#include <sstream>

#include "support.hpp"
#include "wtsp/instances.hpp"

using namespace wtsp;

namespace {

GeneratorSpec spec_of(std::size_t n, Placement p, WeightClass cls, double d, std::uint64_t ps = 1,
                      std::uint64_t ws = 2) {
  GeneratorSpec s;
  s.n = n;
  s.placement = p;
  s.weights = {cls, d};
  s.placement_seed = ps;
  s.weight_seed = ws;
  return s;
}

bool in_box(const std::vector<Point>& pts) {
  for (auto p : pts)
    if (p.x < 0 || p.x > kBoxSize || p.y < 0 || p.y > kBoxSize || p.x != std::floor(p.x) ||
        p.y != std::floor(p.y))
      return false;
  return true;
}

}  // namespace

TEST_CASE("rue placement") {
  const auto pts = generate_placement(spec_of(1000, Placement::rue, WeightClass::C2, 2));
  REQUIRE(pts.size() == 1000);
  CHECK(in_box(pts));
  double mx = 0, my = 0;
  for (auto p : pts) mx += p.x, my += p.y;
  mx /= 1000, my /= 1000;
  // sd of a uniform [0,1000] mean over 1000 draws is about 9.1
  CHECK(std::abs(mx - 500) < 3 * 9.2);
  CHECK(std::abs(my - 500) < 3 * 9.2);
}

TEST_CASE("netgen produces two separated clusters") {
  const auto pts = generate_placement(spec_of(500, Placement::netgen, WeightClass::C2, 2, 9));
  CHECK(in_box(pts));
  // plain 2-means, seeded with the two farthest-apart halves
  Point c[2] = {pts.front(), pts.back()};
  std::vector<int> label(pts.size());
  for (int it = 0; it < 50; ++it) {
    double sx[2] = {0, 0}, sy[2] = {0, 0}, cnt[2] = {0, 0};
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double d0 = std::hypot(pts[i].x - c[0].x, pts[i].y - c[0].y);
      const double d1 = std::hypot(pts[i].x - c[1].x, pts[i].y - c[1].y);
      label[i] = d1 < d0;
      sx[label[i]] += pts[i].x, sy[label[i]] += pts[i].y, cnt[label[i]] += 1;
    }
    for (int k = 0; k < 2; ++k) {
      REQUIRE(cnt[k] > 0);
      c[k] = {sx[k] / cnt[k], sy[k] / cnt[k]};
    }
  }
  double radius = 0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    radius += std::hypot(pts[i].x - c[label[i]].x, pts[i].y - c[label[i]].y);
  radius /= double(pts.size());
  CHECK(std::hypot(c[0].x - c[1].x, c[0].y - c[1].y) > 4 * radius);
}

TEST_CASE("tspgen") {
  auto s = spec_of(300, Placement::tspgen, WeightClass::C2, 2, 4);
  const auto pts = generate_placement(s);
  CHECK(in_box(pts));
  CHECK(pts != generate_placement(spec_of(300, Placement::rue, WeightClass::C2, 2, 4)));
  s.tspgen_rounds = 0;
  CHECK(generate_placement(s) == generate_placement(spec_of(300, Placement::rue, WeightClass::C2, 2, 4)));
}

TEST_CASE("placement errors") {
  CHECK_THROWS_AS(generate_placement(spec_of(1, Placement::rue, WeightClass::C2, 2)), ValidationError);
}

TEST_CASE("weight classes") {
  const auto c1 = assign_weights(50, {WeightClass::C1, 0.0}, 1);
  CHECK(c1[0] == 1);
  for (std::size_t i = 1; i < 50; ++i) CHECK(c1[i] == 0);
  const auto c1b = assign_weights(50, {WeightClass::C1, 0.3}, 1);
  for (std::size_t i = 1; i < 50; ++i) CHECK(c1b[i] == 0.3);

  const auto c2 = assign_weights(10000, {WeightClass::C2, 2}, 5);
  CHECK(c2[0] == 1);
  double ones = 0;
  for (std::size_t i = 1; i < c2.size(); ++i) {
    CHECK((c2[i] == 1 || c2[i] == 2));
    ones += c2[i] == 1;
  }
  CHECK(std::abs(ones / 9999 - 0.5) < 0.02);

  std::set<double> support;
  for (double w : assign_weights(2000, {WeightClass::C3, 1}, 6)) support.insert(w);
  CHECK(support == std::set<double>{0, 1});
  std::set<double> c3;
  for (double w : assign_weights(5000, {WeightClass::C3, 10}, 6)) c3.insert(w);
  CHECK(c3.size() == 11);

  CHECK_THROWS_AS(validate({WeightClass::C1, 1.5}), ValidationError);
  CHECK_THROWS_AS(validate({WeightClass::C2, 0}), ValidationError);
  CHECK_THROWS_AS(validate({WeightClass::C2, 2.5}), ValidationError);
  CHECK_THROWS_AS(validate({WeightClass::C3, 11}), ValidationError);
  CHECK_NOTHROW(validate({WeightClass::C2, 1}));
  CHECK_NOTHROW(validate({WeightClass::C3, 1}));
  CHECK(assign_weights(10, {WeightClass::C3, 4}, 3) == assign_weights(10, {WeightClass::C3, 4}, 3));
}

TEST_CASE("instance files round trip") {
  for (auto cls : {WeightClass::C1, WeightClass::C2, WeightClass::C3}) {
    const auto s = spec_of(40, Placement::netgen, cls, cls == WeightClass::C1 ? 0.1 : 5, 3, 8);
    const auto inst = generate_instance(s);
    const auto text = format_instance(inst, meta_for(s));
    std::istringstream in(text);
    const auto back = parse_instance(in);
    CHECK(back.instance.size() == inst.size());
    CHECK(std::vector<double>(back.instance.weights().begin(), back.instance.weights().end()) ==
          std::vector<double>(inst.weights().begin(), inst.weights().end()));
    CHECK(std::vector<double>(back.instance.matrix().begin(), back.instance.matrix().end()) ==
          std::vector<double>(inst.matrix().begin(), inst.matrix().end()));
    CHECK(back.meta.name == instance_id(s));
    CHECK(back.meta.placement == s.placement);
    REQUIRE(back.meta.weights.has_value());
    CHECK(back.meta.weights->d == s.weights.d);
    CHECK(back.meta.placement_seed == s.placement_seed);
    CHECK_FALSE(back.weights_defaulted);
    CHECK(format_instance(back.instance, back.meta) == text);
  }
}

TEST_CASE("generation is byte deterministic") {
  const auto s = spec_of(100, Placement::tspgen, WeightClass::C3, 7, 5, 6);
  CHECK(format_instance(generate_instance(s), meta_for(s)) ==
        format_instance(generate_instance(s), meta_for(s)));
}

TEST_CASE("explicit matrix files round trip") {
  Rng rng(1);
  const auto src = testing::random_one_two(6, rng);
  const auto text = format_instance(src, {});
  std::istringstream in(text);
  const auto back = parse_instance(in);
  CHECK(std::vector<double>(back.instance.matrix().begin(), back.instance.matrix().end()) ==
        std::vector<double>(src.matrix().begin(), src.matrix().end()));
}

TEST_CASE("classical tsplib file without weights") {
  std::istringstream in(
      "NAME: tiny\nTYPE: TSP\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n"
      "1 0 0\n2 3 4\n3 0 1.4\nEOF\n");
  const auto f = parse_instance(in);
  CHECK(f.weights_defaulted);
  CHECK(f.instance.size() == 3);
  for (double w : f.instance.weights()) CHECK(w == 1);
  CHECK(f.instance.distance(0, 1) == 5);
  CHECK(f.instance.distance(0, 2) == 1);  // rounded
}

TEST_CASE("start weight other than one is flagged") {
  std::istringstream in(
      "NAME: x\nTYPE: WTSP\nDIMENSION: 2\nEDGE_WEIGHT_TYPE: EUC_2D_REAL\nNODE_COORD_SECTION\n"
      "1 0 0\n2 1 0\nNODE_WEIGHT_SECTION\n1 3\n2 1\nEOF\n");
  const auto f = parse_instance(in);
  CHECK(f.start_weight_flagged);
  CHECK(f.instance.weight(0) == 3);
}

TEST_CASE("malformed files report the line") {
  auto line_of = [](const std::string& text) -> std::size_t {
    std::istringstream in(text);
    try {
      parse_instance(in);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  const std::string head = "NAME: x\nDIMENSION: 2\nEDGE_WEIGHT_TYPE: EUC_2D_REAL\nNODE_COORD_SECTION\n";
  CHECK(line_of(head + "1 0 0\n2 abc 0\nEOF\n") == 6);
  CHECK(line_of(head + "1 0 0\n3 1 1\nEOF\n") == 6);
  CHECK(line_of("NAME: x\nDIMENSION: -4\n") == 2);
  CHECK(line_of(head + "1 0 0\n2 1 0\nNODE_WEIGHT_SECTION\n1 1\n2 -1\nEOF\n") == 9);
  CHECK(line_of(head + "1 0 0\n") > 0);
}

TEST_CASE("benchmark suite") {
  CHECK(suite_weight_configs().size() == 30);
  const auto suite = benchmark_suite(1, Placement::rue);
  CHECK(suite.size() == 15000);
  std::set<std::string> ids;
  for (const auto& e : suite) ids.insert(e.id);
  CHECK(ids.size() == suite.size());
  const std::vector<std::size_t> small{25};
  const auto a = benchmark_suite(1, Placement::netgen, small, 2, 2);
  CHECK(a.size() == 30 * 4);
  // placement seeds are shared across weight configurations
  CHECK(a[0].spec.placement_seed == a[4].spec.placement_seed);
  CHECK(a[0].spec.weight_seed != a[1].spec.weight_seed);

  const auto path = std::filesystem::temp_directory_path() / "wtsp_manifest_test.csv";
  write_manifest(a, path);
  const auto back = read_manifest(path);
  REQUIRE(back.size() == a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(back[i].id == a[i].id);
    CHECK(back[i].spec.placement_seed == a[i].spec.placement_seed);
    CHECK(back[i].spec.weight_seed == a[i].spec.weight_seed);
    CHECK(back[i].spec.weights.d == a[i].spec.weights.d);
  }
  std::filesystem::remove(path);
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(5) == "5");
  CHECK(std::stod(format_number(1.0 / 3)) == 1.0 / 3);
  CHECK(format_d({WeightClass::C1, 0.0}) == "0.0");
  CHECK(format_d({WeightClass::C2, 5}) == "5");
}

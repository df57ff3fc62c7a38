#include <doctest.h>

#include <random>

#include "lgp/classify.hpp"
#include "lgp/error.hpp"
#include "lgp/io.hpp"
#include "oracles.hpp"

using namespace lgp;
using oracle::pi;

namespace {

const ConvexDomain disk = ConvexDomain::unit_disk();

ImportedStructure load(const std::string& name) { return parse_structure(read_file(oracle::fixture(name))); }

struct Classified {
  RegionGraph graph;
  FamilyEnumeration result;
};

Classified classify(const ImportedStructure& s) {
  RegionGraph g = region_graph(s);
  auto r = enumerate_families(g);
  return {std::move(g), std::move(r)};
}

Classified classify(const BoundaryData& h) {
  const auto built = build_solution(disk, h);
  RegionGraph g = region_graph(built.solution, built.ties);
  auto r = enumerate_families(g);
  return {std::move(g), std::move(r)};
}

std::vector<double> random_feasible(const SolutionFamily& f, std::mt19937_64& rng) {
  for (int tries = 0; tries < 100000; ++tries) {
    std::vector<double> t;
    for (const auto& b : f.bounds) t.push_back(std::uniform_real_distribution<double>(b.lo, b.hi)(rng));
    bool ok = true;
    for (const auto& c : f.constraints) ok = ok && c.satisfied(t);
    if (ok) return t;
  }
  FAIL("no feasible sample found");
  return {};
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::InvalidInput;
}

/// Random interior points away from the skeleton of both solutions.
std::vector<Point> probe_points(const std::vector<const PiecewiseSolution*>& us, std::mt19937_64& rng, int count) {
  std::uniform_real_distribution<double> R(-1.0, 1.0);
  std::vector<Point> out;
  while (static_cast<int>(out.size()) < count) {
    const Point p{R(rng), R(rng)};
    if (norm(p) > 0.999) continue;
    bool near = false;
    for (const auto* u : us) {
      for (const auto& c : u->arrangement().chords())
        near = near || distance_to_segment(p, disk.boundary_point(c.a), disk.boundary_point(c.b)) < 1e-6;
    }
    if (!near) out.push_back(p);
  }
  return out;
}

void check_interlacing_and_green(const SolutionFamily& f, double tol) {
  for (const auto& r : f.regions) {
    REQUIRE(r.sides.size() % 2 == 0);
    REQUIRE(r.sides.size() >= 4);
    double lower = 0.0, upper = 0.0;
    for (std::size_t k = 0; k < r.sides.size(); ++k) {
      CHECK(r.sides[k].type != r.sides[(k + 1) % r.sides.size()].type);
      (r.sides[k].type == SideType::Lower ? lower : upper) += r.sides[k].length;
    }
    CHECK(std::fabs(lower - upper) <= tol * (lower + upper));
  }
}

}  // namespace

TEST_CASE("three-value data has no free set") {
  const auto c = classify(oracle::three_value());
  CHECK(c.graph.pinned.size() == 3);
  CHECK(c.graph.free_components.empty());
  CHECK(c.result.families.empty());
}

TEST_CASE("four-arc tie") {
  const auto c = classify(oracle::four_arc());
  CHECK(c.graph.pinned.size() == 4);
  REQUIRE(c.graph.free_components.size() == 1);
  const auto& comp = c.graph.free_components[0];
  REQUIRE(comp.sides.size() == 4);
  const std::vector<double> alphas{0, 1, 0, 1};
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(comp.vertices[k] == doctest::Approx(pi / 4 + k * pi / 2));
    CHECK(comp.sides[k].alpha == alphas[k]);
    CHECK(comp.sides[k].length == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  }
  CHECK(comp.area == doctest::Approx(2.0).epsilon(1e-12));

  REQUIRE(c.result.families.size() == 1);
  const auto& f = c.result.families[0];
  REQUIRE(f.regions.size() == 1);
  CHECK(f.bounds[0].lo == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(f.bounds[0].hi == doctest::Approx(1.0).epsilon(1e-12));
  check_interlacing_and_green(f, kGreenRelTol);

  const auto h = oracle::four_arc();
  const auto u0 = build_solution(disk, h).solution;
  std::mt19937_64 rng(1);
  for (int k = 0; k <= 10; ++k) {
    const double t = k / 10.0;
    const auto m = sample_member(f, {t}, c.graph);
    CHECK(verify_least_gradient(m, u0, h));
    CHECK(total_variation(m) == doctest::Approx(total_variation(u0)).epsilon(1e-12));
    CHECK(family_energy_delta(f, {t}) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(evaluate(m, {0, 0}) == t);
    const auto direct = oracle::four_arc_member(t);
    for (const auto& p : probe_points({&m, &direct}, rng, 50)) CHECK(evaluate(m, p) == evaluate(direct, p));
  }
}

TEST_CASE("every tied matching is a family member") {
  const auto h = oracle::four_arc();
  const auto built = build_solution(disk, h);
  const auto c = classify(h);
  REQUIRE(c.result.families.size() == 1);
  const auto& f = c.result.families[0];
  const auto arcs = h.superlevel_arcs(0.5);
  std::mt19937_64 rng(4);
  for (const auto& m : built.ties[0].all_minimal_matchings) {
    const ChordSystem s{0.5, m};
    const auto induced = PiecewiseSolution::from_chords(
        disk, m, [&](Point p) { return in_superlevel_region(disk, s, arcs, p) ? 1.0 : 0.0; }, h);
    const double t = evaluate(induced, {0, 0});
    const auto member = sample_member(f, {t}, c.graph);
    for (const auto& p : probe_points({&member, &induced}, rng, 200)) CHECK(evaluate(member, p) == evaluate(induced, p));
  }
}

TEST_CASE("equilateral hexagon") {
  const auto s = load("hexagon_equilateral.json");
  const auto c = classify(s);
  REQUIRE(c.graph.pinned.size() == 6);
  REQUIRE(c.graph.free_components.size() == 1);
  const auto& comp = c.graph.free_components[0];
  REQUIRE(comp.sides.size() == 6);
  for (std::size_t k = 0; k < 6; ++k) CHECK(comp.sides[k].alpha == (k % 2 == 0 ? -1.0 : 1.0));

  REQUIRE(c.result.families.size() == 1);
  const auto& f = c.result.families[0];
  REQUIRE(f.regions.size() == 1);
  CHECK(std::fabs(f.bounds[0].lo + 1.0) <= 1e-9);
  CHECK(std::fabs(f.bounds[0].hi - 1.0) <= 1e-9);
  check_interlacing_and_green(f, kGreenRelTol);

  const auto m = sample_member(f, {0.0}, c.graph);
  CHECK(evaluate(m, {0, 0}) == 0.0);
  CHECK(evaluate(m, {0.2, -0.3}) == 0.0);
  CHECK(evaluate(m, {0.0, 0.99}) == 1.0);
  CHECK(evaluate(m, {0.9, 0.2}) == -1.0);

  std::mt19937_64 rng(8);
  for (int k = 0; k < 10; ++k) {
    const auto t = random_feasible(f, rng);
    CHECK(std::fabs(family_energy_delta(f, t)) <= 1e-9);
    CHECK(verify_least_gradient(sample_member(f, t, c.graph), c.graph.base));
  }

  const double direct = oracle::polygon_jump_sum(s.free_vertices, s.side_traces, 2.0) -
                        oracle::polygon_jump_sum(s.free_vertices, s.side_traces, 0.0);
  CHECK(direct > 0.0);
  CHECK(family_energy_delta(f, {2.0}) == doctest::Approx(direct).epsilon(1e-12));
  CHECK(kind_of([&] { sample_member(f, {2.0}, c.graph); }) == ErrorKind::ConstraintViolation);
}

TEST_CASE("Green-split hexagon") {
  const auto s = load("hexagon_green_split.json");
  const auto expected = oracle::green_split_hexagon();
  REQUIRE(s.free_vertices.size() == 6);
  for (std::size_t k = 0; k < 6; ++k) CHECK(s.free_vertices[k] == doctest::Approx(expected[k]).epsilon(1e-14));
  auto len = [&](int i, int j) { return oracle::chord_len(s.free_vertices[i - 1], s.free_vertices[j - 1]); };
  CHECK(std::fabs(len(1, 2) + len(3, 4) - len(2, 3) - len(1, 4)) <= 1e-12);
  CHECK(std::fabs(len(4, 5) + len(6, 1) - len(5, 6) - len(1, 4)) <= 1e-12);

  const auto c = classify(s);
  REQUIRE(c.result.families.size() == 1);
  const auto& f = c.result.families[0];
  REQUIRE(f.regions.size() == 2);
  REQUIRE(f.diagonals.size() == 1);
  CHECK(f.diagonals[0] == std::pair<std::size_t, std::size_t>{0, 3});
  check_interlacing_and_green(f, kGreenRelTol);
  CHECK(c.result.dropped.size() == 1);

  std::vector<std::string> text;
  for (const auto& con : f.constraints) text.push_back(con.to_string());
  for (const char* want : {"t1 >= -1", "t1 <= 1", "t2 >= -1", "t2 <= 1", "t1 >= t2"})
    CHECK(std::find(text.begin(), text.end(), want) != text.end());
  CHECK(text.size() == 5);
  for (const auto& b : f.bounds) {
    CHECK(std::fabs(b.lo + 1.0) <= 1e-9);
    CHECK(std::fabs(b.hi - 1.0) <= 1e-9);
  }

  std::mt19937_64 rng(21);
  for (int k = 0; k < 20; ++k) {
    const auto t = random_feasible(f, rng);
    CHECK(std::fabs(family_energy_delta(f, t)) <= 1e-9);
  }

  CHECK(kind_of([&] { sample_member(f, {-0.5, 0.5}, c.graph); }) == ErrorKind::ConstraintViolation);
  const auto m = sample_member(f, {0.5, -0.5}, c.graph);
  CHECK(evaluate(m, {0, 0.3}) == (f.regions[0].vertices[1] == 1 ? 0.5 : -0.5));
  CHECK(verify_least_gradient(m, c.graph.base));

  const auto sel = smallest_norm_member(f, 2.0);
  CHECK(sel.values == std::vector<double>{0.0, 0.0});
}

TEST_CASE("Brothers structure") {
  const auto c = classify(load("brothers.json"));
  REQUIRE(c.result.families.size() == 1);
  const auto& f = c.result.families[0];
  REQUIRE(f.regions.size() == 1);
  CHECK(f.bounds[0].lo == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(f.bounds[0].hi == doctest::Approx(1.0).epsilon(1e-12));
  for (double p : {1.0, 1.5}) CHECK(smallest_norm_member(f, p).values == std::vector<double>{0.0});
  const auto m = sample_member(f, {-0.5}, c.graph);
  CHECK(evaluate(m, {0, 0}) == -0.5);
  CHECK(verify_least_gradient(m, c.graph.base));
  CHECK(std::fabs(family_energy_delta(f, {0.7})) <= 1e-12);
  CHECK(total_variation(c.graph.base) == doctest::Approx(16 / (3 * std::sqrt(2.0)) + 4 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("smallest norm on a one-sided box") {
  SolutionFamily f;
  Region r;
  r.area = 1.0;
  f.regions.push_back(r);
  f.constraints = {{Constraint::Kind::AtLeast, 0, 0, 0.5}, {Constraint::Kind::AtMost, 0, 0, 1.0}};
  f.bounds = {{0.5, 1.0}};
  CHECK(smallest_norm_member(f, 1.5).values == std::vector<double>{0.5});
  f.bounds = {{0.5, 0.25}};
  CHECK(kind_of([&] { smallest_norm_member(f, 1.5); }) == ErrorKind::Infeasible);
}

TEST_CASE("members agree off the free set and are closed under min and max") {
  std::mt19937_64 rng(33);
  for (const std::string name : {"hexagon_equilateral.json", "hexagon_green_split.json", "brothers.json"}) {
    CAPTURE(name);
    const auto c = classify(load(name));
    for (const auto& f : c.result.families) {
      for (int k = 0; k < 10; ++k) {
        const auto a = random_feasible(f, rng);
        const auto b = random_feasible(f, rng);
        const auto ma = sample_member(f, a, c.graph);
        const auto mb = sample_member(f, b, c.graph);
        CHECK(verify_least_gradient(ma, c.graph.base));

        std::vector<double> lo(a.size()), hi(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
          lo[i] = std::min(a[i], b[i]);
          hi[i] = std::max(a[i], b[i]);
        }
        for (const auto& con : f.constraints) {
          CHECK(con.satisfied(lo));
          CHECK(con.satisfied(hi));
        }
        const auto mlo = combine(ma, mb, CombineMode::Min);
        const auto mhi = combine(ma, mb, CombineMode::Max);
        CHECK(verify_least_gradient(mlo, c.graph.base));
        CHECK(verify_least_gradient(mhi, c.graph.base));
        const auto slo = sample_member(f, lo, c.graph);
        for (const auto& p : probe_points({&mlo, &slo, &ma, &mb}, rng, 30)) CHECK(evaluate(mlo, p) == evaluate(slo, p));
      }
      const auto m = sample_member(f, random_feasible(f, rng), c.graph);
      const auto& arr = c.graph.base.arrangement();
      int checked = 0;
      for (const auto& p : probe_points({&m, &c.graph.base}, rng, 2000)) {
        const std::size_t face = arr.locate(p);
        if (arr.faces()[face].boundary_contact <= kSkeletonTol) continue;
        CHECK(evaluate(m, p) == c.graph.base.face_values()[face]);
        if (++checked == 100) break;
      }
      CHECK(checked == 100);
    }
  }
}

TEST_CASE("structure validation") {
  ImportedStructure s = load("hexagon_equilateral.json");
  s.side_traces.pop_back();
  CHECK(kind_of([&] { s.validate(); }) == ErrorKind::InvalidInput);

  ImportedStructure big;
  for (int k = 0; k < 14; ++k) {
    big.free_vertices.push_back(k * 2 * pi / 14);
    big.side_traces.push_back(k % 2 == 0 ? -1.0 : 1.0);
  }
  CHECK(kind_of([&] { enumerate_families(region_graph(big)); }) == ErrorKind::TooManyVertices);
}

#include <doctest.h>

#include <filesystem>

#include "lgp/error.hpp"
#include "lgp/io.hpp"
#include "oracles.hpp"

using namespace lgp;
using oracle::pi;

namespace {

const ConvexDomain disk = ConvexDomain::unit_disk();

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::InvalidInput;
}

std::filesystem::path scratch() {
  const auto dir = std::filesystem::temp_directory_path() / "lgp_io_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("problem documents round-trip") {
  for (const char* name : {"three_value.json", "four_arc_tie.json", "brothers_problem.json"}) {
    CAPTURE(std::string(name));
    const auto spec = parse_problem(read_file(oracle::fixture(name)));
    const std::string once = serialize(spec);
    CHECK(serialize(parse_problem(once)) == once);
  }
  const auto bro = parse_problem(read_file(oracle::fixture("brothers_problem.json")));
  CHECK_FALSE(bro.piecewise_constant());
  CHECK(kind_of([&] { bro.data(); }) == ErrorKind::InvalidInput);
  const auto f = bro.function();
  CHECK(f(0.0) == doctest::Approx(2.0));
  CHECK(f(pi / 2) == doctest::Approx(-2.0));
  CHECK(f(pi) == doctest::Approx(2.0));
  CHECK(bro.probe_polygon().size() == 4);

  const auto three = parse_problem(read_file(oracle::fixture("three_value.json")));
  CHECK(three.data() == oracle::three_value());
}

TEST_CASE("structure documents round-trip") {
  for (const char* name : {"hexagon_equilateral.json", "hexagon_green_split.json", "brothers.json"}) {
    CAPTURE(std::string(name));
    const auto s = parse_structure(read_file(oracle::fixture(name)));
    const std::string once = serialize(s);
    CHECK(serialize(parse_structure(once)) == once);
    const auto back = parse_structure(once);
    CHECK(back.free_vertices == s.free_vertices);
    CHECK(back.side_traces == s.side_traces);
    CHECK(back.tv_offset == s.tv_offset);
  }
}

TEST_CASE("solution documents round-trip") {
  const auto built = build_solution(disk, oracle::four_arc());
  const std::string once = serialize(built.solution);
  const auto back = parse_solution(once);
  CHECK(serialize(back) == once);
  CHECK(back.face_values() == built.solution.face_values());
  CHECK(total_variation(back) == total_variation(built.solution));
  CHECK(back.trace() == built.solution.trace());
  CHECK(back.chord_systems().size() == built.solution.chord_systems().size());
}

TEST_CASE("family documents round-trip") {
  for (const char* name : {"hexagon_equilateral.json", "hexagon_green_split.json", "brothers.json"}) {
    CAPTURE(std::string(name));
    const auto g = region_graph(parse_structure(read_file(oracle::fixture(name))));
    const auto doc = FamilyDocument::from(g, enumerate_families(g), {});
    const std::string once = serialize(doc);
    const auto back = parse_family_document(once);
    CHECK(serialize(back) == once);
    REQUIRE(back.families.size() == doc.families.size());
    for (std::size_t k = 0; k < doc.families.size(); ++k) {
      CHECK(back.families[k].constraints.size() == doc.families[k].constraints.size());
      for (std::size_t r = 0; r < doc.families[k].bounds.size(); ++r) {
        CHECK(back.families[k].bounds[r].lo == doc.families[k].bounds[r].lo);
        CHECK(back.families[k].bounds[r].hi == doc.families[k].bounds[r].hi);
      }
    }
  }
  const auto built = build_solution(disk, oracle::four_arc());
  const auto g = region_graph(built.solution, built.ties);
  const auto doc = FamilyDocument::from(g, enumerate_families(g), built.ties);
  const std::string once = serialize(doc);
  const auto back = parse_family_document(once);
  CHECK(serialize(back) == once);
  REQUIRE(back.ties.size() == 1);
  CHECK(back.ties[0].all_minimal_matchings.size() == 2);
  CHECK(once.find("\"t1 >= 0\"") != std::string::npos);
  CHECK(once.find("\"t1 <= 1\"") != std::string::npos);
}

TEST_CASE("serialisation is deterministic") {
  const auto g = region_graph(parse_structure(read_file(oracle::fixture("hexagon_green_split.json"))));
  const auto a = serialize(FamilyDocument::from(g, enumerate_families(g), {}));
  const auto g2 = region_graph(parse_structure(read_file(oracle::fixture("hexagon_green_split.json"))));
  const auto b = serialize(FamilyDocument::from(g2, enumerate_families(g2), {}));
  CHECK(a == b);
}

TEST_CASE("malformed documents") {
  CHECK(kind_of([] { parse_problem("{"); }) == ErrorKind::InvalidInput);
  CHECK(kind_of([] { parse_problem(R"({"domain": {"type": "disk"}})"); }) == ErrorKind::InvalidInput);
  CHECK(kind_of([] { parse_problem(R"({"domain": {"type": "torus"}, "boundary": [{"start_angle": 0, "value": 1}]})"); }) ==
        ErrorKind::InvalidInput);
  CHECK(kind_of([] { parse_problem(R"({"domain": {"type": "disk"}, "boundary": []})"); }) == ErrorKind::InvalidInput);
  CHECK(kind_of([] {
          parse_problem(R"({"domain": {"type": "disk"}, "boundary": [{"start_angle": 0, "poly": [1, 2]}]})");
        }) == ErrorKind::InvalidInput);
  CHECK(kind_of([] { parse_problem(read_file(oracle::fixture("nonconvex_quarter.json"))); }) ==
        ErrorKind::NonConvexDomain);
  CHECK(kind_of([] { read_file("/nonexistent/lgp.json"); }) == ErrorKind::InvalidInput);
}

TEST_CASE("atomic writes leave no temporary files") {
  const auto dir = scratch();
  const std::string path = (dir / "out.txt").string();
  write_file_atomic(path, "first");
  write_file_atomic(path, "second");
  CHECK(read_file(path) == "second");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++entries;
  CHECK(entries == 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("report csv") {
  SelectionReport rep;
  SweepStep s;
  s.eps = 0.1;
  s.F = 1.5;
  s.G = 2.0;
  s.pnorm = 0.25;
  s.lambda_hat = std::numeric_limits<double>::quiet_NaN();
  rep.steps.push_back(s);
  const auto dir = scratch();
  const std::string path = (dir / "r.csv").string();
  write_report_csv(path, rep);
  CHECK(read_file(path) == "eps,F,G,pnorm,lambda_hat\n0.1,1.5,2,0.25,nan\n");
  std::filesystem::remove_all(dir);
}

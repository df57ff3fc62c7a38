// Command-line front end: solve, classify, select and verify.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lgp/classify.hpp"
#include "lgp/construct.hpp"
#include "lgp/error.hpp"
#include "lgp/io.hpp"
#include "lgp/selector_grid.hpp"

namespace {

int run_solve(const std::string& input, const std::string& out) {
  const lgp::ProblemSpec spec = lgp::parse_problem(lgp::read_file(input));
  const auto built = lgp::build_solution(spec.domain, spec.data());
  lgp::write_file_atomic(out, lgp::serialize(built.solution));
  std::printf("chords %zu faces %zu tv %.17g\n", built.solution.arrangement().chords().size(),
              built.solution.arrangement().face_count(), lgp::total_variation(built.solution));
  return 0;
}

int run_classify(const std::string& input, const std::string& structure, const std::string& out) {
  std::vector<lgp::TieRecord> ties;
  lgp::RegionGraph graph = [&] {
    if (!structure.empty()) return lgp::region_graph(lgp::parse_structure(lgp::read_file(structure)));
    const lgp::ProblemSpec spec = lgp::parse_problem(lgp::read_file(input));
    auto built = lgp::build_solution(spec.domain, spec.data());
    ties = built.ties;
    return lgp::region_graph(built.solution, built.ties);
  }();
  const auto result = lgp::enumerate_families(graph);
  lgp::write_file_atomic(out, lgp::serialize(lgp::FamilyDocument::from(graph, result, ties)));
  std::printf("pinned %zu free_components %zu families %zu dropped %zu\n", graph.pinned.size(),
              graph.free_components.size(), result.families.size(), result.dropped.size());
  for (const auto& f : result.families) {
    for (std::size_t r = 0; r < f.bounds.size(); ++r)
      std::printf("  component %zu t%zu in [%.17g, %.17g]\n", f.component, r + 1, f.bounds[r].lo, f.bounds[r].hi);
  }
  if (!graph.free_components.empty() && result.families.empty()) {
    std::fprintf(stderr, "error: no feasible solution family for the free set\n");
    return 1;
  }
  return 0;
}

struct SelectArgs {
  std::string input;
  double p = 1.5;
  int grid = 128;
  double eps_start = 1e-1;
  double eps_factor = 1e-1;
  int steps = 5;
  std::string report;
  std::string images;
  int max_iters = 50000;
  double tol = 1e-8;
};

int run_select(const SelectArgs& a) {
  const lgp::ProblemSpec spec = lgp::parse_problem(lgp::read_file(a.input));
  if (!(a.eps_factor > 0.0 && a.eps_factor < 1.0)) lgp::fail(lgp::ErrorKind::InvalidInput, "eps factor must lie in (0, 1)");
  lgp::GridProblem prob = lgp::rasterize(spec.domain, spec.function(), a.grid);
  prob.p = a.p;
  prob.max_iters = a.max_iters;
  prob.tol = a.tol;
  std::vector<double> schedule;
  for (int k = 0; k < a.steps; ++k) schedule.push_back(a.eps_start * std::pow(a.eps_factor, k));
  const auto report = lgp::epsilon_sweep(prob, schedule, spec.probe_polygon());
  lgp::write_report_csv(a.report, report);
  if (!a.images.empty()) {
    std::filesystem::create_directories(a.images);
    for (std::size_t k = 0; k < report.steps.size(); ++k) {
      const std::string stem = (std::filesystem::path(a.images) / ("step_" + std::to_string(k))).string();
      lgp::write_pgm(stem + ".pgm", report.steps[k].field);
      lgp::write_field(stem, report.steps[k].field);
    }
  }
  for (const auto& s : report.steps)
    std::printf("eps %.3g F %.10g G %.10g lambda_hat %.3e iters %d\n", s.eps, s.F, s.G, s.lambda_hat, s.info.iterations);
  bool ok = report.f_nonincreasing;
  if (report.pointwise_monotone && !*report.pointwise_monotone) ok = false;
  if (!ok) {
    std::fprintf(stderr, "error: sweep monotonicity check failed\n");
    return 1;
  }
  return 0;
}

int run_verify(const std::string& candidate, const std::string& reference, const std::string& input) {
  const lgp::ProblemSpec spec = lgp::parse_problem(lgp::read_file(input));
  const auto cand = lgp::parse_solution(lgp::read_file(candidate));
  const auto ref = lgp::parse_solution(lgp::read_file(reference));
  const bool ok = lgp::verify_least_gradient(cand, ref, spec.data());
  std::printf("candidate tv %.17g reference tv %.17g %s\n", lgp::total_variation(cand), lgp::total_variation(ref),
              ok ? "least-gradient" : "not least-gradient");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Least gradient problems on convex planar domains"};
  app.require_subcommand(1);

  std::string input, out, structure, candidate, reference;
  auto* solve = app.add_subcommand("solve", "Construct the canonical piecewise-constant solution");
  solve->add_option("--input", input, "Problem JSON")->required();
  solve->add_option("--out", out, "Solution JSON")->required();

  auto* classify = app.add_subcommand("classify", "Enumerate solution families of the free set");
  auto* in_opt = classify->add_option("--input", input, "Problem JSON");
  auto* st_opt = classify->add_option("--structure", structure, "Imported structure JSON");
  in_opt->excludes(st_opt);
  classify->add_option("--out", out, "Family JSON")->required();

  SelectArgs sel;
  auto* select = app.add_subcommand("select", "Sweep eps for the norm-penalised grid energy");
  select->add_option("--input", sel.input, "Problem JSON")->required();
  select->add_option("--p", sel.p, "Norm exponent in [1, 2]");
  select->add_option("--grid", sel.grid, "Cells per side");
  select->add_option("--eps-start", sel.eps_start, "First eps");
  select->add_option("--eps-factor", sel.eps_factor, "Ratio between consecutive eps");
  select->add_option("--steps", sel.steps, "Number of eps values");
  select->add_option("--report", sel.report, "CSV report")->required();
  select->add_option("--images", sel.images, "Directory for PGM images and field dumps");
  select->add_option("--max-iters", sel.max_iters, "Iteration cap per eps");
  select->add_option("--tol", sel.tol, "Relative change stopping tolerance");

  auto* verify = app.add_subcommand("verify", "Check that a candidate has least gradient");
  verify->add_option("--candidate", candidate, "Candidate solution JSON")->required();
  verify->add_option("--reference", reference, "Reference solution JSON")->required();
  verify->add_option("--input", input, "Problem JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*solve) return run_solve(input, out);
    if (*classify) {
      if (input.empty() == structure.empty()) lgp::fail(lgp::ErrorKind::InvalidInput, "classify needs --input or --structure");
      return run_classify(input, structure, out);
    }
    if (*select) return run_select(sel);
    if (*verify) return run_verify(candidate, reference, input);
  } catch (const lgp::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.kind() == lgp::ErrorKind::Infeasible ? 1 : 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}

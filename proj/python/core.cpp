#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lgp/error.hpp"
#include "lgp/io.hpp"

namespace py = pybind11;
using namespace lgp;

namespace {

py::array_t<double> as_array(const ScalarField& f) {
  py::array_t<double> out({f.ny, f.nx});
  auto v = out.mutable_unchecked<2>();
  for (int j = 0; j < f.ny; ++j)
    for (int i = 0; i < f.nx; ++i) v(j, i) = f.mask[f.index(i, j)] ? f.values[f.index(i, j)] : std::nan("");
  return out;
}

std::vector<std::pair<double, double>> chord_pairs(const std::vector<Chord>& cs) {
  std::vector<std::pair<double, double>> out;
  for (const auto& c : cs) out.emplace_back(c.a, c.b);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Least gradient problems on convex planar domains";

  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error;
  error.call_once_and_store_result([&] { return py::exception<Error>(m, "Error"); });
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = error.get_stored()(e.what());
      exc.attr("kind") = std::string(to_string(e.kind()));
      PyErr_SetObject(error.get_stored().ptr(), exc.ptr());
    }
  });

  py::class_<BoundaryData>(m, "BoundaryData")
      .def_static("from_pieces",
                  [](const std::vector<std::pair<double, double>>& pieces) {
                    std::vector<Piece> ps;
                    for (const auto& [s, v] : pieces) ps.push_back({s, v});
                    return BoundaryData::from_pieces(ps);
                  },
                  py::arg("pieces"))
      .def("value_at", &BoundaryData::value_at)
      .def("jump_points", &BoundaryData::jump_points)
      .def("thresholds", &BoundaryData::thresholds)
      .def_property_readonly("pieces", [](const BoundaryData& h) {
        std::vector<std::pair<double, double>> out;
        for (const auto& p : h.pieces()) out.emplace_back(p.start, p.value);
        return out;
      });

  py::class_<PiecewiseSolution>(m, "Solution")
      .def_property_readonly("chords", [](const PiecewiseSolution& u) { return chord_pairs(u.arrangement().chords()); })
      .def_property_readonly("face_values", &PiecewiseSolution::face_values)
      .def_property_readonly("total_variation", [](const PiecewiseSolution& u) { return total_variation(u); })
      .def("__call__", [](const PiecewiseSolution& u, double x, double y) { return evaluate(u, Point{x, y}); })
      .def("to_json", [](const PiecewiseSolution& u) { return serialize(u); })
      .def_static("from_json", &parse_solution);

  py::class_<TieRecord>(m, "Tie")
      .def_readonly("threshold", &TieRecord::threshold)
      .def_readonly("length", &TieRecord::length)
      .def_property_readonly("matchings", [](const TieRecord& t) {
        std::vector<std::vector<std::pair<double, double>>> out;
        for (const auto& mm : t.all_minimal_matchings) out.push_back(chord_pairs(mm));
        return out;
      });

  m.def(
      "solve",
      [](const BoundaryData& h) {
        auto built = build_solution(ConvexDomain::unit_disk(), h);
        return py::make_tuple(std::move(built.solution), std::move(built.ties));
      },
      py::arg("data"), "Canonical solution and tie records on the unit disk.");

  m.def(
      "solve_json",
      [](const std::string& problem) {
        const auto spec = parse_problem(problem);
        return serialize(build_solution(spec.domain, spec.data()).solution);
      },
      py::arg("problem"));

  m.def(
      "classify_json",
      [](const std::string& text, bool structure) {
        std::vector<TieRecord> ties;
        RegionGraph g = [&] {
          if (structure) return region_graph(parse_structure(text));
          const auto spec = parse_problem(text);
          auto built = build_solution(spec.domain, spec.data());
          ties = built.ties;
          return region_graph(built.solution, built.ties);
        }();
        return serialize(FamilyDocument::from(g, enumerate_families(g), ties));
      },
      py::arg("text"), py::arg("structure") = false, "Family document for a problem or an imported structure.");

  m.def(
      "verify",
      [](const PiecewiseSolution& candidate, const PiecewiseSolution& reference, const BoundaryData& h) {
        return verify_least_gradient(candidate, reference, h);
      },
      py::arg("candidate"), py::arg("reference"), py::arg("data"));

  m.def(
      "select",
      [](const BoundaryData& h, int n, double p, const std::vector<double>& schedule, int max_iters, double tol) {
        auto prob = rasterize(ConvexDomain::unit_disk(), h, n);
        prob.p = p;
        prob.max_iters = max_iters;
        prob.tol = tol;
        const auto rep = epsilon_sweep(prob, schedule);
        py::list steps;
        for (const auto& s : rep.steps) {
          py::dict d;
          d["eps"] = s.eps;
          d["F"] = s.F;
          d["G"] = s.G;
          d["pnorm"] = s.pnorm;
          d["iterations"] = s.info.iterations;
          d["field"] = as_array(s.field);
          steps.append(d);
        }
        py::dict out;
        out["steps"] = steps;
        out["f_nonincreasing"] = rep.f_nonincreasing;
        out["pointwise_monotone"] = rep.pointwise_monotone ? py::cast(*rep.pointwise_monotone) : py::none();
        return out;
      },
      py::arg("data"), py::arg("n") = 32, py::arg("p") = 1.5, py::arg("schedule") = std::vector<double>{1e-1, 1e-2, 1e-3},
      py::arg("max_iters") = 50000, py::arg("tol") = 1e-8, "Grid sweep over eps; fields are NaN outside the disk.");
}

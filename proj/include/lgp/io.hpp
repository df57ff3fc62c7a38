#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lgp/boundary_data.hpp"
#include "lgp/classify.hpp"
#include "lgp/construct.hpp"
#include "lgp/selector_grid.hpp"

namespace lgp {

/// Writes to a temporary sibling file and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& bytes);
std::string read_file(const std::string& path);

/// Boundary piece starting at `start`: a constant when coeffs has one entry,
/// otherwise c0 + cx x + cy y + cxx x^2 + cxy xy + cyy y^2 at the boundary point.
struct BoundaryPiece {
  double start = 0.0;
  std::vector<double> coeffs;

  bool constant() const { return coeffs.size() == 1; }
};

struct ProblemSpec {
  std::string name;
  ConvexDomain domain = ConvexDomain::unit_disk();
  std::vector<BoundaryPiece> boundary;
  /// Boundary angles of a convex probe polygon for the sweep statistic.
  std::vector<double> probe_vertices;

  bool piecewise_constant() const;
  /// Throws InvalidInput when some piece is not constant.
  BoundaryData data() const;
  BoundaryFunction function() const;
  std::vector<Point> probe_polygon() const;
};

struct RegionEntry {
  std::size_t face = 0;
  bool free = false;
  std::vector<double> vertex_angles;
  double value = 0.0;
};

struct FamilyDocument {
  std::vector<RegionEntry> regions;
  std::vector<SolutionFamily> families;
  std::vector<SolutionFamily> dropped;
  std::size_t rejected_candidates = 0;
  std::optional<PiecewiseSolution> reference;
  std::vector<TieRecord> ties;

  static FamilyDocument from(const RegionGraph& graph, const FamilyEnumeration& result,
                             const std::vector<TieRecord>& ties);
};

ProblemSpec parse_problem(const std::string& text);
std::string serialize(const ProblemSpec& spec);

ImportedStructure parse_structure(const std::string& text);
std::string serialize(const ImportedStructure& structure);

PiecewiseSolution parse_solution(const std::string& text);
std::string serialize(const PiecewiseSolution& u);

FamilyDocument parse_family_document(const std::string& text);
std::string serialize(const FamilyDocument& doc);

}  // namespace lgp

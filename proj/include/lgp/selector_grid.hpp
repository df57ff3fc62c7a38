#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lgp/boundary_data.hpp"
#include "lgp/construct.hpp"
#include "lgp/geometry.hpp"

namespace lgp {

inline constexpr int kMinGrid = 16;

/// Cell-centred field on the bounding square of the domain, row-major with
/// cell (i, j) at index j * nx + i. Outside cells hold 0 and are ignored.
struct ScalarField {
  int nx = 0;
  int ny = 0;
  double spacing = 0.0;
  Point origin{};
  std::vector<std::uint8_t> mask;
  std::vector<double> values;

  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
  bool inside(int i, int j) const { return i >= 0 && j >= 0 && i < nx && j < ny && mask[index(i, j)] != 0; }
  Point center(int i, int j) const { return {origin.x + (i + 0.5) * spacing, origin.y + (j + 0.5) * spacing}; }
  std::size_t inside_count() const;
  bool same_shape(const ScalarField& other) const;
};

/// Face between an inside cell and an outside one, where the boundary
/// penalty is charged.
struct BoundaryEdge {
  std::size_t cell = 0;
  double theta = 0.0;
  /// spacing * |edge normal . domain normal|.
  double weight = 0.0;
  double sample = 0.0;
};

using BoundaryFunction = std::function<double(double theta)>;

struct GridProblem {
  ScalarField field;
  std::vector<BoundaryEdge> edges;
  double p = 1.5;
  double eps = 1e-2;
  int max_iters = 50000;
  double tol = 1e-8;
  /// Throw NonConvergence instead of returning the best iterate when
  /// max_iters is exhausted.
  bool strict = false;

  void validate() const;
};

ScalarField rasterize(const ConvexDomain& domain, int n);
/// Cell values are the mean of u over samples x samples points spread over a
/// square of side `window` cells around the cell centre.
ScalarField rasterize(const PiecewiseSolution& u, int n, int samples = 1, double window = 1.0);
GridProblem rasterize(const ConvexDomain& domain, const BoundaryFunction& f, int n);
GridProblem rasterize(const ConvexDomain& domain, const BoundaryData& h, int n);

/// Isotropic (or anisotropic) forward-difference total variation over pairs
/// of inside cells.
double grid_tv(const ScalarField& x, bool anisotropic = false);
double grid_energy_F(const ScalarField& x, const GridProblem& prob);
double grid_pnorm(const ScalarField& x, double p);
double grid_energy_G(const ScalarField& x, const GridProblem& prob, double p, double eps);

struct SolveInfo {
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  /// Best G seen at each 50-iteration checkpoint.
  std::vector<double> g_trace;
};

/// Preconditioned primal-dual iteration. `start` (same shape) warm-starts.
ScalarField minimize_G(const GridProblem& prob, SolveInfo* info = nullptr, const ScalarField* start = nullptr);

struct SweepStep {
  double eps = 0.0;
  double F = 0.0;
  double G = 0.0;
  double pnorm = 0.0;
  double lambda_hat = 0.0;
  SolveInfo info;
  ScalarField field;
};

struct SelectionReport {
  std::vector<SweepStep> steps;
  bool f_nonincreasing = true;
  /// Empty when the boundary samples take negative values.
  std::optional<bool> pointwise_monotone;
  std::size_t probe_cells = 0;
};

inline constexpr double kMonotoneTol = 1e-6;

/// Cells whose centres lie inside the convex polygon at distance more than
/// `margin` * spacing from its sides.
std::vector<std::size_t> probe_cells(const ScalarField& grid, const std::vector<Point>& polygon, double margin = 2.0);

/// Solves for each eps in turn, warm-starting from the previous minimiser.
SelectionReport epsilon_sweep(const GridProblem& templ, const std::vector<double>& schedule,
                              const std::vector<Point>& probe = {});

void write_report_csv(const std::string& path, const SelectionReport& report);
/// Linear 8-bit scaling of the inside cells; outside cells are black.
void write_pgm(const std::string& path, const ScalarField& x);
/// Raw little-endian float64 values plus a JSON sidecar; the mask is written
/// as a PGM next to them.
void write_field(const std::string& stem, const ScalarField& x);
ScalarField read_field(const std::string& stem);

}  // namespace lgp

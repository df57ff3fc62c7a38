#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "lgp/boundary_data.hpp"
#include "lgp/geometry.hpp"

namespace lgp {

/// Length ties between matchings are resolved at this absolute tolerance.
inline constexpr double kLengthTieTol = 1e-9;
/// Relative tolerance for total-variation equality.
inline constexpr double kTvRelTol = 1e-9;

/// Boundary of one superlevel set: the chords separating {h > threshold}.
struct ChordSystem {
  double threshold = 0.0;
  std::vector<Chord> chords;
};

/// Every minimum-length non-crossing matching at one threshold, in canonical
/// order (lexicographic on sorted chord lists). The first entry is the
/// canonical matching.
struct TieRecord {
  double threshold = 0.0;
  double length = 0.0;
  std::vector<std::vector<Chord>> all_minimal_matchings;

  bool tied() const { return all_minimal_matchings.size() > 1; }
};

/// Constant value per face of a chord arrangement.
class PiecewiseSolution {
 public:
  PiecewiseSolution(Arrangement arrangement, std::vector<double> face_values,
                    std::optional<BoundaryData> trace = std::nullopt, double tv_offset = 0.0);

  /// Builds the arrangement of `chords` and samples `value_at` at one interior
  /// point of each face.
  static PiecewiseSolution from_chords(const ConvexDomain& domain, std::vector<Chord> chords,
                                       const std::function<double(Point)>& value_at,
                                       std::optional<BoundaryData> trace = std::nullopt,
                                       double tv_offset = 0.0, bool allow_crossings = false);

  const ConvexDomain& domain() const { return arrangement_.domain(); }
  const Arrangement& arrangement() const { return arrangement_; }
  const std::vector<double>& face_values() const { return face_values_; }
  const std::optional<BoundaryData>& trace() const { return trace_; }
  double tv_offset() const { return tv_offset_; }

  /// Per-threshold chord systems this solution was sliced from (empty for
  /// solutions not produced by build_solution).
  const std::vector<ChordSystem>& chord_systems() const { return systems_; }
  void set_chord_systems(std::vector<ChordSystem> systems) { systems_ = std::move(systems); }

  double evaluate(Point p) const;
  /// Value of the face touching the boundary at theta.
  double trace_at(double theta) const;

  /// Drops chords across which the value does not jump.
  PiecewiseSolution simplified() const;

 private:
  Arrangement arrangement_;
  std::vector<double> face_values_;
  std::optional<BoundaryData> trace_;
  double tv_offset_ = 0.0;
  std::vector<ChordSystem> systems_;
};

/// Minimum-length non-crossing matchings of the interface points of `arcs`
/// by interval dynamic programming, with every tied optimum enumerated.
/// Returns an empty matching for empty or full arc sets.
TieRecord minimal_separators(const ConvexDomain& domain, const ArcSet& arcs, double threshold = 0.0);

struct Construction {
  PiecewiseSolution solution;
  std::vector<TieRecord> ties;
};

/// Canonical least gradient solution u0 for piecewise-constant data, one chord
/// system per value-gap midpoint. Throws NestingConflict when no combination
/// of tied matchings nests.
Construction build_solution(const ConvexDomain& domain, const BoundaryData& h);

/// Whether point p lies in the superlevel region bounded by `system` whose
/// boundary part is `arcs`.
bool in_superlevel_region(const ConvexDomain& domain, const ChordSystem& system, const ArcSet& arcs, Point p);

double total_variation(const PiecewiseSolution& u);

/// Total variation plus the boundary mismatch ∫|Tu - h|.
double energy_F_exact(const PiecewiseSolution& u, const BoundaryData& h);

double evaluate(const PiecewiseSolution& u, Point p);

enum class CombineMode { Min, Max };

/// Facewise min/max on the common refinement of both arrangements.
PiecewiseSolution combine(const PiecewiseSolution& u, const PiecewiseSolution& v, CombineMode mode);

/// Candidate and reference must attain h (TraceMismatch otherwise); true iff
/// their total variations agree to relative tolerance.
bool verify_least_gradient(const PiecewiseSolution& candidate, const PiecewiseSolution& reference,
                           const BoundaryData& h);

/// Same comparison for structures whose trace is not piecewise constant; the
/// caller vouches for trace agreement.
bool verify_least_gradient(const PiecewiseSolution& candidate, const PiecewiseSolution& reference);

}  // namespace lgp

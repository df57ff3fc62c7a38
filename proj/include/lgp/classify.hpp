#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lgp/construct.hpp"

namespace lgp {

/// Free components with more boundary vertices than this are rejected with
/// TooManyVertices; enumeration is exponential in the vertex count.
inline constexpr std::size_t kMaxFreeVertices = 12;
inline constexpr double kGreenRelTol = 1e-9;

/// Side of a free component: the chord from vertex k to vertex k+1 and the
/// one-sided trace of the reference from the pinned region beyond it.
struct FreeSide {
  Chord chord;
  double alpha = 0.0;
  double length = 0.0;
  std::size_t pinned_face = 0;
};

struct InternalEdge {
  std::size_t face_a = 0;
  std::size_t face_b = 0;
  double length = 0.0;
};

/// Connected union of free faces: an inscribed polygon whose vertices are
/// boundary points where the data jumps.
struct FreeComponent {
  std::vector<double> vertices;
  std::vector<FreeSide> sides;
  std::vector<std::size_t> faces;
  std::vector<InternalEdge> internal_edges;
  double area = 0.0;
  /// Variation of the reference across the sides of C and inside C.
  double reference_tv = 0.0;
};

struct PinnedRegion {
  std::size_t face = 0;
  double value = 0.0;
};

struct RegionGraph {
  /// Reference solution on the (possibly augmented) arrangement used for
  /// labelling; family members reuse it off the free set.
  PiecewiseSolution base;
  std::vector<PinnedRegion> pinned;
  std::vector<FreeComponent> free_components;
  double green_tolerance = kGreenRelTol;
};

/// Solution structure supplied from outside, for boundary data the automatic
/// constructor does not handle. The free set is one inscribed polygon; the
/// region beyond side k carries the one-sided trace side_traces[k] on that side.
struct ImportedStructure {
  struct ReferenceRegion {
    std::vector<std::size_t> vertices;
    double value = 0.0;
  };

  std::string name;
  ConvexDomain domain = ConvexDomain::unit_disk();
  std::vector<double> free_vertices;
  std::vector<double> side_traces;
  /// Reference decomposition of the free polygon; empty means one region with
  /// value reference_value.
  std::vector<ReferenceRegion> reference_regions;
  double reference_value = 0.0;
  double tv_offset = 0.0;
  double green_tolerance = kGreenRelTol;

  /// Validates ordering and sizes; throws InvalidInput.
  void validate() const;
  /// Piecewise-constant shell: flaps carry their side trace, the free
  /// polygon carries the reference values.
  PiecewiseSolution to_solution() const;
};

/// Pinned/free labelling by boundary contact. In the automatic pipeline every
/// chord of every tied minimal matching is added so that free faces appear.
RegionGraph region_graph(const PiecewiseSolution& u0, const std::vector<TieRecord>& ties,
                         double green_tolerance = kGreenRelTol);
RegionGraph region_graph(const ImportedStructure& structure);

enum class SideType {
  Lower,  ///< Trace beyond the side is <= the region value.
  Upper,  ///< Trace beyond the side is >= the region value.
};

struct RegionSide {
  enum class Kind { Pinned, Internal };
  Kind kind = Kind::Pinned;
  /// Pinned: side index of the component. Internal: diagonal index.
  std::size_t index = 0;
  SideType type = SideType::Lower;
  double length = 0.0;
  double alpha = 0.0;
  std::size_t neighbor = 0;
};

struct Region {
  /// Component vertex indices, ccw.
  std::vector<std::size_t> vertices;
  std::vector<RegionSide> sides;
  double area = 0.0;
};

struct Constraint {
  enum class Kind { AtLeast, AtMost, AtLeastRegion };
  Kind kind = Kind::AtLeast;
  std::size_t region = 0;
  /// Other region for AtLeastRegion.
  std::size_t other = 0;
  double value = 0.0;

  bool satisfied(const std::vector<double>& t, double tol = 1e-12) const;
  /// Human-readable form with 1-based names, e.g. "t1 >= -1" or "t1 <= t2".
  std::string to_string() const;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct SolutionFamily {
  std::size_t component = 0;
  std::vector<double> vertices;
  std::vector<FreeSide> sides;
  std::vector<std::pair<std::size_t, std::size_t>> diagonals;
  std::vector<Region> regions;
  std::vector<Constraint> constraints;
  std::vector<Interval> bounds;
  double reference_tv = 0.0;
};

struct FamilyEnumeration {
  std::vector<SolutionFamily> families;
  /// Coarser families removed because a finer family contains them.
  std::vector<SolutionFamily> dropped;
  /// Green-feasible candidates whose constraint system was empty or whose
  /// energy differed from the reference.
  std::size_t rejected_candidates = 0;
};

/// All finest decompositions of each free component into even-sided
/// sub-polygons satisfying Green's formula, with their inequality systems.
FamilyEnumeration enumerate_families(const RegionGraph& graph);

/// Member with the given region values; equal to the base off the free set.
/// Throws ConstraintViolation naming the first violated inequality.
PiecewiseSolution sample_member(const SolutionFamily& family, const std::vector<double>& values,
                                const RegionGraph& graph);

/// TV(member) - TV(reference), from the sides of the free set and the
/// decomposition chords only.
double family_energy_delta(const SolutionFamily& family, const std::vector<double>& values);

struct NormSelection {
  std::vector<double> values;
  double objective = 0.0;
};

/// Feasible values minimising Σ area_i |t_i|^p for 1 <= p < 2.
NormSelection smallest_norm_member(const SolutionFamily& family, double p);

}  // namespace lgp

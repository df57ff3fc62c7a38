#pragma once

#include <vector>

#include "lgp/geometry.hpp"

namespace lgp {

struct Piece {
  double start = 0.0;
  double value = 0.0;
};

/// Counterclockwise boundary arc (start, end); `end` may wrap past 2π.
struct Arc {
  double start = 0.0;
  double end = 0.0;
};

/// Disjoint boundary arcs. A full circle is flagged separately because it has
/// no endpoints.
struct ArcSet {
  std::vector<Arc> arcs;
  bool full = false;

  bool empty() const { return !full && arcs.empty(); }
  bool proper() const { return !full && !arcs.empty(); }
  double total_length(const ConvexDomain& domain) const;
  /// Interface points in ccw order, starting at the first arc's start.
  std::vector<double> interface_points() const;
};

/// Piecewise-constant function on the boundary, stored as a circular list
/// of pieces; each piece runs from its start angle to the next piece's start.
class BoundaryData {
 public:
  /// Angles are normalised and sorted, adjacent equal values are merged.
  /// Throws InvalidInput on an empty list or duplicated start angles.
  static BoundaryData from_pieces(std::vector<Piece> pieces);
  static BoundaryData constant(double value);

  const std::vector<Piece>& pieces() const { return pieces_; }
  bool is_constant() const { return pieces_.size() == 1; }

  /// End angle of piece i (start of the following piece).
  double piece_end(std::size_t i) const;
  double value_at(double theta) const;

  std::vector<double> jump_points() const;
  std::vector<double> distinct_values() const;
  /// Midpoints of consecutive distinct values.
  std::vector<double> thresholds() const;

  /// Maximal arcs where h > t. Throws PlateauThreshold when t is a value of h.
  ArcSet superlevel_arcs(double t) const;

  double min_value() const;
  double max_value() const;

  /// ∫ |c - h| over the ccw arc (a, b).
  double mismatch_on_arc(const ConvexDomain& domain, double a, double b, double c) const;

  /// Pointwise min/max of two boundary functions.
  static BoundaryData pointwise_min(const BoundaryData& u, const BoundaryData& v);
  static BoundaryData pointwise_max(const BoundaryData& u, const BoundaryData& v);

  bool operator==(const BoundaryData& o) const;

 private:
  std::vector<Piece> pieces_;
};

}  // namespace lgp

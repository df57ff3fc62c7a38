#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <utility>
#include <vector>

namespace lgp {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
/// Tolerance for comparing user-given angles (radians).
inline constexpr double kAngleTol = 1e-12;
/// Distance below which a point counts as lying on a chord.
inline constexpr double kSkeletonTol = 1e-12;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(b - a); }

/// Maps any angle into [0, 2π).
double normalize_angle(double theta);

/// Counterclockwise angular distance from a to b, in [0, 2π).
double ccw_span(double a, double b);

/// True iff `theta` lies strictly inside the counterclockwise arc (a, b).
bool angle_strictly_between(double theta, double a, double b);

double distance_to_segment(Point p, Point a, Point b);

/// Convex planar domain with a boundary parameterised by an angle.
///
/// For the unit disk the parameter is the polar angle. For a convex polygon
/// it is the polar angle of the ray cast from the area centroid, which hits
/// the boundary exactly once.
class ConvexDomain {
 public:
  enum class Kind { UnitDisk, ConvexPolygon };

  static ConvexDomain unit_disk();
  /// Vertices must be counterclockwise and strictly convex; throws
  /// NonConvexDomain otherwise.
  static ConvexDomain convex_polygon(std::vector<Point> vertices);

  Kind kind() const { return kind_; }
  bool is_disk() const { return kind_ == Kind::UnitDisk; }
  const std::vector<Point>& vertices() const { return vertices_; }
  Point center() const { return center_; }

  Point boundary_point(double theta) const;
  /// Boundary parameter of the ray from the center through `p`.
  double boundary_angle(Point p) const;
  /// Outward unit normal at the boundary point with parameter theta.
  Point outward_normal(double theta) const;

  double arc_length(double a, double b) const;
  double chord_length(double a, double b) const;
  double perimeter() const;
  double area() const;

  /// Strict interior test.
  bool contains(Point p) const;

  /// Boundary points strictly inside the ccw arc (a, b) where the boundary
  /// turns (polygon corners); empty for the disk.
  std::vector<Point> arc_corners(double a, double b) const;

  /// Line integral of (x dy - y dx) / 2 along the ccw boundary arc a -> b.
  /// A full turn is requested with b = a + 2π.
  double arc_area_term(double a, double b) const;

  /// Axis-aligned bounding box (min corner, max corner).
  std::pair<Point, Point> bounding_box() const;

  bool operator==(const ConvexDomain& other) const;

 private:
  ConvexDomain() = default;
  double perimeter_param(double theta) const;

  Kind kind_ = Kind::UnitDisk;
  std::vector<Point> vertices_;
  std::vector<double> vertex_angles_;
  std::vector<double> cumulative_;
  Point center_{};
};

/// A chord of the domain between two boundary parameters, stored with
/// 0 <= a < b < 2π.
struct Chord {
  double a = 0.0;
  double b = 0.0;

  bool operator==(const Chord& o) const { return a == o.a && b == o.b; }
  bool operator<(const Chord& o) const { return a < o.a || (a == o.a && b < o.b); }
};

/// Normalises both endpoints; rejects zero-length chords with InvalidInput.
Chord make_chord(double a, double b);

bool same_chord(const Chord& c1, const Chord& c2);

/// Closed chords intersect: endpoints strictly interleave or are shared.
bool chords_cross(const Chord& c1, const Chord& c2);

/// Chords meet at an interior point of the domain (strict interleaving).
/// Chords that only share an endpoint do not interleave.
bool chords_interleave(const Chord& c1, const Chord& c2);

double chord_length(const ConvexDomain& domain, const Chord& c);

/// Sums chord lengths in sorted chord order so that equal chord sets give
/// bit-identical totals.
double total_length(const ConvexDomain& domain, std::vector<Chord> chords);

struct ArrangementEdge {
  enum class Kind { Segment, Arc };
  Kind kind = Kind::Segment;
  std::size_t index = 0;
  /// Segments: traversed from `from` to `to`. Arcs are always traversed ccw.
  bool forward = true;
};

/// Piece of a chord between consecutive vertices of the arrangement.
struct ChordSegment {
  std::size_t chord = 0;
  Point from{};
  Point to{};
  double length = 0.0;
  /// Faces on the left/right when walking from `from` to `to`.
  std::size_t left_face = 0;
  std::size_t right_face = 0;
};

/// Boundary piece between consecutive chord endpoints; ccw from start to end.
struct BoundaryArc {
  double start = 0.0;
  double end = 0.0;
  double length = 0.0;
  std::size_t face = 0;
};

struct Face {
  std::vector<ArrangementEdge> boundary;
  double area = 0.0;
  double boundary_contact = 0.0;
  Point interior{};
};

/// Planar subdivision of the domain induced by a finite set of chords.
class Arrangement {
 public:
  /// Identical chords are merged and the rest sorted. Chords sharing an
  /// endpoint are fine; chords crossing in the interior raise CrossingChords
  /// unless `allow_crossings` is set, in which case faces are refined at
  /// every crossing point.
  static Arrangement build(const ConvexDomain& domain, std::vector<Chord> chords,
                           bool allow_crossings = false);

  const ConvexDomain& domain() const { return domain_; }
  const std::vector<Chord>& chords() const { return chords_; }
  const std::vector<ChordSegment>& segments() const { return segments_; }
  const std::vector<BoundaryArc>& arcs() const { return arcs_; }
  const std::vector<Face>& faces() const { return faces_; }
  std::size_t face_count() const { return faces_.size(); }
  bool has_crossings() const { return has_crossings_; }

  /// Face containing a strictly interior point away from the skeleton.
  /// Throws OutsideDomain or OnSkeleton.
  std::size_t locate(Point p) const;

  /// Face whose boundary contains the boundary parameter theta (theta must
  /// not be a chord endpoint).
  std::size_t face_at_boundary(double theta) const;

  /// Pairs (face, face) that share at least one chord segment, each listed once
  /// with the smaller id first.
  std::vector<std::pair<std::size_t, std::size_t>> adjacency() const;

  /// Segment indices belonging to chord c.
  std::vector<std::size_t> segments_of_chord(std::size_t c) const;

 private:
  ConvexDomain domain_ = ConvexDomain::unit_disk();
  std::vector<Chord> chords_;
  std::vector<ChordSegment> segments_;
  std::vector<BoundaryArc> arcs_;
  std::vector<Face> faces_;
  bool has_crossings_ = false;
};

}  // namespace lgp

#include "lgp/geometry.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <sstream>

#include "lgp/error.hpp"

namespace lgp {

namespace {

double circular_gap(double a, double b) {
  const double d = std::fabs(normalize_angle(a) - normalize_angle(b));
  return std::min(d, kTwoPi - d);
}

bool same_angle(double a, double b) { return circular_gap(a, b) <= kAngleTol; }

}  // namespace

double normalize_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

double ccw_span(double a, double b) { return normalize_angle(b - a); }

bool angle_strictly_between(double theta, double a, double b) {
  const double span = ccw_span(a, b);
  const double off = ccw_span(a, theta);
  return off > kAngleTol && off < span - kAngleTol;
}

double distance_to_segment(Point p, Point a, Point b) {
  const Point ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return distance(p, a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(p, a + t * ab);
}

// ---------------------------------------------------------------------------
// ConvexDomain

ConvexDomain ConvexDomain::unit_disk() {
  ConvexDomain d;
  d.kind_ = Kind::UnitDisk;
  return d;
}

ConvexDomain ConvexDomain::convex_polygon(std::vector<Point> vertices) {
  const std::size_t n = vertices.size();
  if (n < 3) fail(ErrorKind::NonConvexDomain, "domain must be convex (fewer than 3 vertices)");

  double scale = 0.0;
  for (const auto& v : vertices) scale = std::max({scale, std::fabs(v.x), std::fabs(v.y)});
  const double tol = 1e-14 * std::max(1.0, scale * scale);

  double turning = 0.0;
  double twice_area = 0.0;
  Point moment{};
  for (std::size_t i = 0; i < n; ++i) {
    const Point p0 = vertices[i];
    const Point p1 = vertices[(i + 1) % n];
    const Point p2 = vertices[(i + 2) % n];
    const Point e0 = p1 - p0;
    const Point e1 = p2 - p1;
    const double c = cross(e0, e1);
    if (!(c > tol)) fail(ErrorKind::NonConvexDomain, "domain must be convex");
    turning += std::atan2(c, dot(e0, e1));
    const double w = cross(p0, p1);
    twice_area += w;
    moment = moment + (w / 3.0) * (p0 + p1);
  }
  if (std::fabs(turning - kTwoPi) > 1e-9) fail(ErrorKind::NonConvexDomain, "domain must be convex");

  ConvexDomain d;
  d.kind_ = Kind::ConvexPolygon;
  d.center_ = (1.0 / twice_area) * moment;
  d.vertex_angles_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point r = vertices[i] - d.center_;
    d.vertex_angles_[i] = normalize_angle(std::atan2(r.y, r.x));
  }
  // Rotate so that vertex angles increase from the smallest one.
  const auto first = static_cast<std::size_t>(
      std::min_element(d.vertex_angles_.begin(), d.vertex_angles_.end()) - d.vertex_angles_.begin());
  std::rotate(vertices.begin(), vertices.begin() + static_cast<std::ptrdiff_t>(first), vertices.end());
  std::rotate(d.vertex_angles_.begin(), d.vertex_angles_.begin() + static_cast<std::ptrdiff_t>(first),
              d.vertex_angles_.end());
  d.vertices_ = std::move(vertices);
  d.cumulative_.assign(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    d.cumulative_[i + 1] = d.cumulative_[i] + distance(d.vertices_[i], d.vertices_[(i + 1) % n]);
  return d;
}

namespace {

// Edge k of a polygon runs from vertex k to k+1; returns the edge hit by the
// ray at parameter theta.
std::size_t polygon_edge(const std::vector<double>& angles, double theta) {
  const std::size_t n = angles.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double a = angles[k];
    const double b = angles[(k + 1) % n];
    if (ccw_span(a, theta) < ccw_span(a, b) || ccw_span(a, b) == 0.0) return k;
  }
  return n - 1;
}

}  // namespace

Point ConvexDomain::boundary_point(double theta) const {
  if (is_disk()) return {std::cos(theta), std::sin(theta)};
  const double t = normalize_angle(theta);
  const std::size_t n = vertices_.size();
  const std::size_t k = polygon_edge(vertex_angles_, t);
  const Point v0 = vertices_[k];
  const Point v1 = vertices_[(k + 1) % n];
  const Point dir{std::cos(t), std::sin(t)};
  const Point e = v1 - v0;
  const double denom = cross(dir, e);
  // center + s*dir = v0 + u*e  =>  u = cross(dir, center - v0) / cross(dir, e)
  const double u = std::clamp(cross(dir, center_ - v0) / denom, 0.0, 1.0);
  return v0 + u * e;
}

double ConvexDomain::boundary_angle(Point p) const {
  const Point r = p - center_;
  return normalize_angle(std::atan2(r.y, r.x));
}

Point ConvexDomain::outward_normal(double theta) const {
  if (is_disk()) return {std::cos(theta), std::sin(theta)};
  const double t = normalize_angle(theta);
  const std::size_t n = vertices_.size();
  auto edge_normal = [&](std::size_t k) {
    const Point e = vertices_[(k + 1) % n] - vertices_[k];
    const double len = norm(e);
    return Point{e.y / len, -e.x / len};
  };
  for (std::size_t k = 0; k < n; ++k) {
    if (same_angle(t, vertex_angles_[k])) {
      const Point m = edge_normal(k) + edge_normal((k + n - 1) % n);
      return (1.0 / norm(m)) * m;
    }
  }
  return edge_normal(polygon_edge(vertex_angles_, t));
}

double ConvexDomain::perimeter_param(double theta) const {
  const double t = normalize_angle(theta);
  const std::size_t k = polygon_edge(vertex_angles_, t);
  return cumulative_[k] + distance(vertices_[k], boundary_point(t));
}

double ConvexDomain::arc_length(double a, double b) const {
  if (is_disk()) return ccw_span(a, b);
  if (ccw_span(a, b) == 0.0) return 0.0;
  const double per = perimeter();
  double s = perimeter_param(b) - perimeter_param(a);
  if (s < 0.0) s += per;
  return s;
}

double ConvexDomain::chord_length(double a, double b) const {
  if (is_disk()) {
    const double d = ccw_span(a, b);
    return 2.0 * std::sin(std::min(d, kTwoPi - d) / 2.0);
  }
  return distance(boundary_point(a), boundary_point(b));
}

double ConvexDomain::perimeter() const { return is_disk() ? kTwoPi : cumulative_.back(); }

double ConvexDomain::area() const {
  if (is_disk()) return std::numbers::pi;
  double twice = 0.0;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) twice += cross(vertices_[i], vertices_[(i + 1) % n]);
  return twice / 2.0;
}

bool ConvexDomain::contains(Point p) const {
  if (is_disk()) return p.x * p.x + p.y * p.y < 1.0;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!(cross(vertices_[(i + 1) % n] - vertices_[i], p - vertices_[i]) > 0.0)) return false;
  }
  return true;
}

std::vector<Point> ConvexDomain::arc_corners(double a, double b) const {
  std::vector<Point> out;
  if (is_disk()) return out;
  const std::size_t n = vertices_.size();
  const bool full = b - a >= kTwoPi - kAngleTol;
  std::vector<std::pair<double, std::size_t>> hits;
  for (std::size_t k = 0; k < n; ++k) {
    const double off = ccw_span(a, vertex_angles_[k]);
    if (full ? off > kAngleTol : angle_strictly_between(vertex_angles_[k], a, b)) hits.emplace_back(off, k);
  }
  std::sort(hits.begin(), hits.end());
  for (const auto& [off, k] : hits) out.push_back(vertices_[k]);
  return out;
}

double ConvexDomain::arc_area_term(double a, double b) const {
  const bool full = b - a >= kTwoPi - kAngleTol;
  if (is_disk()) return (full ? kTwoPi : ccw_span(a, b)) / 2.0;
  std::vector<Point> path;
  path.push_back(boundary_point(a));
  for (const auto& c : arc_corners(a, b)) path.push_back(c);
  path.push_back(boundary_point(b));
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) sum += cross(path[i], path[i + 1]);
  return sum / 2.0;
}

std::pair<Point, Point> ConvexDomain::bounding_box() const {
  if (is_disk()) return {{-1.0, -1.0}, {1.0, 1.0}};
  Point lo = vertices_.front();
  Point hi = vertices_.front();
  for (const auto& v : vertices_) {
    lo = {std::min(lo.x, v.x), std::min(lo.y, v.y)};
    hi = {std::max(hi.x, v.x), std::max(hi.y, v.y)};
  }
  return {lo, hi};
}

bool ConvexDomain::operator==(const ConvexDomain& other) const {
  if (kind_ != other.kind_) return false;
  if (is_disk()) return true;
  if (vertices_.size() != other.vertices_.size()) return false;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (vertices_[i].x != other.vertices_[i].x || vertices_[i].y != other.vertices_[i].y) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Chords

Chord make_chord(double a, double b) {
  double x = normalize_angle(a);
  double y = normalize_angle(b);
  if (same_angle(x, y)) fail(ErrorKind::InvalidInput, "zero-length chord");
  if (x > y) std::swap(x, y);
  return {x, y};
}

bool same_chord(const Chord& c1, const Chord& c2) {
  return (same_angle(c1.a, c2.a) && same_angle(c1.b, c2.b)) ||
         (same_angle(c1.a, c2.b) && same_angle(c1.b, c2.a));
}

namespace {

bool share_endpoint(const Chord& c1, const Chord& c2) {
  return same_angle(c1.a, c2.a) || same_angle(c1.a, c2.b) || same_angle(c1.b, c2.a) ||
         same_angle(c1.b, c2.b);
}

}  // namespace

bool chords_interleave(const Chord& c1, const Chord& c2) {
  if (share_endpoint(c1, c2)) return false;
  const bool a_in = angle_strictly_between(c2.a, c1.a, c1.b);
  const bool b_in = angle_strictly_between(c2.b, c1.a, c1.b);
  return a_in != b_in;
}

bool chords_cross(const Chord& c1, const Chord& c2) {
  return share_endpoint(c1, c2) || chords_interleave(c1, c2);
}

double chord_length(const ConvexDomain& domain, const Chord& c) { return domain.chord_length(c.a, c.b); }

double total_length(const ConvexDomain& domain, std::vector<Chord> chords) {
  std::sort(chords.begin(), chords.end());
  double sum = 0.0;
  for (const auto& c : chords) sum += chord_length(domain, c);
  return sum;
}

// ---------------------------------------------------------------------------
// Arrangement

namespace {

struct HalfEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  ArrangementEdge edge;
  Point direction{};
  std::size_t twin = 0;
  std::size_t face = SIZE_MAX;
};

struct Vertex {
  Point p{};
  bool on_boundary = false;
  double theta = 0.0;
  std::vector<std::size_t> out;
};

Point segment_intersection(Point p, Point p2, Point q, Point q2) {
  const Point r = p2 - p;
  const Point s = q2 - q;
  const double t = cross(q - p, s) / cross(r, s);
  return p + t * r;
}

}  // namespace

Arrangement Arrangement::build(const ConvexDomain& domain, std::vector<Chord> chords, bool allow_crossings) {
  Arrangement arr;
  arr.domain_ = domain;

  std::sort(chords.begin(), chords.end());
  std::vector<Chord> unique;
  for (const auto& c : chords) {
    if (std::none_of(unique.begin(), unique.end(), [&](const Chord& u) { return same_chord(u, c); }))
      unique.push_back(c);
  }
  arr.chords_ = std::move(unique);
  const auto& cs = arr.chords_;
  const std::size_t nc = cs.size();

  if (nc == 0) {
    Face f;
    f.boundary.push_back({ArrangementEdge::Kind::Arc, 0, true});
    f.area = domain.area();
    f.boundary_contact = domain.perimeter();
    f.interior = domain.center();
    arr.faces_.push_back(f);
    arr.arcs_.push_back({0.0, kTwoPi, domain.perimeter(), 0});
    return arr;
  }

  std::vector<std::pair<std::size_t, std::size_t>> crossing_pairs;
  for (std::size_t i = 0; i < nc; ++i) {
    for (std::size_t j = i + 1; j < nc; ++j) {
      if (chords_interleave(cs[i], cs[j])) {
        if (!allow_crossings) {
          std::ostringstream msg;
          msg << "chords (" << cs[i].a << ", " << cs[i].b << ") and (" << cs[j].a << ", " << cs[j].b
              << ") cross";
          fail(ErrorKind::CrossingChords, msg.str());
        }
        crossing_pairs.emplace_back(i, j);
      }
    }
  }
  arr.has_crossings_ = !crossing_pairs.empty();

  // Boundary vertices: distinct endpoint angles in ccw order.
  std::vector<double> angles;
  for (const auto& c : cs) {
    angles.push_back(c.a);
    angles.push_back(c.b);
  }
  std::sort(angles.begin(), angles.end());
  std::vector<double> distinct;
  for (double t : angles) {
    if (distinct.empty() || !same_angle(distinct.back(), t)) distinct.push_back(t);
  }
  if (distinct.size() > 1 && same_angle(distinct.front(), distinct.back())) distinct.pop_back();

  std::vector<Vertex> vertices;
  for (double t : distinct) vertices.push_back({domain.boundary_point(t), true, t, {}});
  const std::size_t nb = vertices.size();
  auto boundary_vertex = [&](double t) {
    for (std::size_t i = 0; i < nb; ++i)
      if (same_angle(vertices[i].theta, t)) return i;
    return nb;
  };

  // Points along each chord, keyed by the parameter along the chord.
  std::vector<std::vector<std::pair<double, std::size_t>>> along(nc);
  for (std::size_t i = 0; i < nc; ++i) {
    along[i].emplace_back(0.0, boundary_vertex(cs[i].a));
    along[i].emplace_back(1.0, boundary_vertex(cs[i].b));
  }
  for (const auto& [i, j] : crossing_pairs) {
    const Point pa = vertices[along[i][0].second].p;
    const Point pb = vertices[along[i][1].second].p;
    const Point qa = vertices[along[j][0].second].p;
    const Point qb = vertices[along[j][1].second].p;
    const Point x = segment_intersection(pa, pb, qa, qb);
    std::size_t vid = vertices.size();
    for (std::size_t k = nb; k < vertices.size(); ++k) {
      if (distance(vertices[k].p, x) < 1e-10) {
        vid = k;
        break;
      }
    }
    if (vid == vertices.size()) vertices.push_back({x, false, 0.0, {}});
    auto param = [&](Point a, Point b) { return dot(x - a, b - a) / dot(b - a, b - a); };
    along[i].emplace_back(param(pa, pb), vid);
    along[j].emplace_back(param(qa, qb), vid);
  }

  std::vector<HalfEdge> hes;
  auto add_pair = [&](std::size_t u, std::size_t v, ArrangementEdge fwd, Point dir_u, Point dir_v) {
    const std::size_t k = hes.size();
    ArrangementEdge bwd = fwd;
    bwd.forward = false;
    hes.push_back({u, v, fwd, dir_u, k + 1, SIZE_MAX});
    hes.push_back({v, u, bwd, dir_v, k, SIZE_MAX});
    vertices[u].out.push_back(k);
    vertices[v].out.push_back(k + 1);
  };

  for (std::size_t i = 0; i < nc; ++i) {
    auto& pts = along[i];
    std::sort(pts.begin(), pts.end());
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
      const std::size_t u = pts[k].second;
      const std::size_t v = pts[k + 1].second;
      if (u == v) continue;
      const Point pu = vertices[u].p;
      const Point pv = vertices[v].p;
      const std::size_t sid = arr.segments_.size();
      const double len = pts.size() == 2 ? domain.chord_length(cs[i].a, cs[i].b) : distance(pu, pv);
      arr.segments_.push_back({i, pu, pv, len, 0, 0});
      add_pair(u, v, {ArrangementEdge::Kind::Segment, sid, true}, pv - pu, pu - pv);
    }
  }

  for (std::size_t i = 0; i < nb; ++i) {
    const std::size_t j = (i + 1) % nb;
    const double a = vertices[i].theta;
    const double b = vertices[j].theta;
    const std::size_t aid = arr.arcs_.size();
    arr.arcs_.push_back({a, b, domain.arc_length(a, b), 0});
    Point dir_a, dir_b;
    if (domain.is_disk()) {
      dir_a = {-std::sin(a), std::cos(a)};
      dir_b = {std::sin(b), -std::cos(b)};
    } else {
      const auto corners = domain.arc_corners(a, b);
      const Point first = corners.empty() ? vertices[j].p : corners.front();
      const Point last = corners.empty() ? vertices[i].p : corners.back();
      dir_a = first - vertices[i].p;
      dir_b = last - vertices[j].p;
    }
    add_pair(i, j, {ArrangementEdge::Kind::Arc, aid, true}, dir_a, dir_b);
  }

  for (auto& v : vertices) {
    std::sort(v.out.begin(), v.out.end(), [&](std::size_t x, std::size_t y) {
      return std::atan2(hes[x].direction.y, hes[x].direction.x) <
             std::atan2(hes[y].direction.y, hes[y].direction.x);
    });
  }

  auto next_of = [&](std::size_t h) {
    const auto& out = vertices[hes[h].to].out;
    const std::size_t twin = hes[h].twin;
    const auto pos = static_cast<std::size_t>(std::find(out.begin(), out.end(), twin) - out.begin());
    return out[(pos + out.size() - 1) % out.size()];
  };

  for (std::size_t start = 0; start < hes.size(); ++start) {
    if (hes[start].face != SIZE_MAX) continue;
    std::vector<std::size_t> cycle;
    std::size_t h = start;
    bool exterior = false;
    do {
      cycle.push_back(h);
      hes[h].face = SIZE_MAX - 1;
      if (hes[h].edge.kind == ArrangementEdge::Kind::Arc && !hes[h].edge.forward) exterior = true;
      h = next_of(h);
    } while (h != start && cycle.size() <= hes.size());
    if (exterior) continue;

    const std::size_t fid = arr.faces_.size();
    Face face;
    double twice_area = 0.0;
    Point sum{};
    std::size_t count = 0;
    for (std::size_t e : cycle) {
      hes[e].face = fid;
      const auto& he = hes[e];
      face.boundary.push_back(he.edge);
      if (he.edge.kind == ArrangementEdge::Kind::Segment) {
        const auto& seg = arr.segments_[he.edge.index];
        const Point p = he.edge.forward ? seg.from : seg.to;
        const Point q = he.edge.forward ? seg.to : seg.from;
        twice_area += cross(p, q);
        sum = sum + p;
        ++count;
        if (he.edge.forward) {
          arr.segments_[he.edge.index].left_face = fid;
        } else {
          arr.segments_[he.edge.index].right_face = fid;
        }
      } else {
        auto& arc = arr.arcs_[he.edge.index];
        arc.face = fid;
        twice_area += 2.0 * domain.arc_area_term(arc.start, arc.end);
        face.boundary_contact += arc.length;
        sum = sum + domain.boundary_point(arc.start);
        const double mid = arc.start + ccw_span(arc.start, arc.end) / 2.0;
        sum = sum + domain.boundary_point(mid);
        count += 2;
        for (const auto& c : domain.arc_corners(arc.start, arc.end)) {
          sum = sum + c;
          ++count;
        }
      }
    }
    face.area = twice_area / 2.0;
    face.interior = (1.0 / static_cast<double>(count)) * sum;
    arr.faces_.push_back(std::move(face));
  }
  // Mark the exterior half-edges as faceless again.
  for (auto& he : hes)
    if (he.face == SIZE_MAX - 1) he.face = SIZE_MAX;

  if (!arr.has_crossings_ && arr.faces_.size() != nc + 1) {
    fail(ErrorKind::InvalidInput, "arrangement violates the Euler relation; chords may be degenerate");
  }
  return arr;
}

std::size_t Arrangement::locate(Point p) const {
  if (!domain_.contains(p)) fail(ErrorKind::OutsideDomain, "point lies outside the domain");
  for (const auto& s : segments_) {
    if (distance_to_segment(p, s.from, s.to) <= kSkeletonTol)
      fail(ErrorKind::OnSkeleton, "point lies on a chord");
  }
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    bool inside = true;
    for (const auto& e : faces_[f].boundary) {
      if (e.kind != ArrangementEdge::Kind::Segment) continue;
      const auto& s = segments_[e.index];
      const Point a = e.forward ? s.from : s.to;
      const Point b = e.forward ? s.to : s.from;
      if (!(cross(b - a, p - a) > 0.0)) {
        inside = false;
        break;
      }
    }
    if (inside) return f;
  }
  fail(ErrorKind::OnSkeleton, "point could not be assigned to a face");
}

std::size_t Arrangement::face_at_boundary(double theta) const {
  if (arcs_.size() == 1) return arcs_.front().face;
  for (const auto& arc : arcs_) {
    if (angle_strictly_between(theta, arc.start, arc.end)) return arc.face;
  }
  fail(ErrorKind::OnSkeleton, "boundary parameter coincides with a chord endpoint");
}

std::vector<std::pair<std::size_t, std::size_t>> Arrangement::adjacency() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& s : segments_) {
    out.emplace_back(std::min(s.left_face, s.right_face), std::max(s.left_face, s.right_face));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::size_t> Arrangement::segments_of_chord(std::size_t c) const {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < segments_.size(); ++s)
    if (segments_[s].chord == c) out.push_back(s);
  return out;
}

}  // namespace lgp

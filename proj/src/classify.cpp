#include "lgp/classify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <tuple>

#include "lgp/error.hpp"

namespace lgp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBoundTol = 1e-12;

double polygon_area(const ConvexDomain& domain, const std::vector<double>& angles) {
  double a = 0.0;
  for (std::size_t k = 0; k < angles.size(); ++k) {
    const Point p = domain.boundary_point(angles[k]);
    const Point q = domain.boundary_point(angles[(k + 1) % angles.size()]);
    a += cross(p, q);
  }
  return 0.5 * a;
}

bool inside_polygon(const std::vector<Point>& poly, Point p) {
  for (std::size_t k = 0; k < poly.size(); ++k) {
    const Point a = poly[k];
    const Point b = poly[(k + 1) % poly.size()];
    if (cross(b - a, p - a) <= kSkeletonTol * norm(b - a)) return false;
  }
  return true;
}

std::vector<Point> polygon_points(const ConvexDomain& domain, const std::vector<double>& angles,
                                  const std::vector<std::size_t>& idx) {
  std::vector<Point> out;
  for (std::size_t i : idx) out.push_back(domain.boundary_point(angles[i]));
  return out;
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

FreeComponent build_component(const PiecewiseSolution& base, const std::vector<std::size_t>& faces,
                              const std::vector<bool>& is_free) {
  const Arrangement& arr = base.arrangement();
  const auto& vals = base.face_values();
  const std::set<std::size_t> members(faces.begin(), faces.end());

  FreeComponent comp;
  comp.faces = faces;
  std::vector<FreeSide> sides;
  for (std::size_t s = 0; s < arr.segments().size(); ++s) {
    const auto& seg = arr.segments()[s];
    const bool l = members.count(seg.left_face) > 0;
    const bool r = members.count(seg.right_face) > 0;
    if (l && r) {
      comp.internal_edges.push_back({seg.left_face, seg.right_face, seg.length});
      comp.reference_tv += std::fabs(vals[seg.left_face] - vals[seg.right_face]) * seg.length;
      continue;
    }
    if (!l && !r) continue;
    const std::size_t inner = l ? seg.left_face : seg.right_face;
    const std::size_t outer = l ? seg.right_face : seg.left_face;
    if (is_free[outer]) fail(ErrorKind::InvalidInput, "free faces of different components share a chord");
    if (arr.segments_of_chord(seg.chord).size() != 1)
      fail(ErrorKind::InvalidInput, "free component boundary is not an inscribed polygon");
    FreeSide side;
    side.chord = arr.chords()[seg.chord];
    side.alpha = vals[outer];
    side.length = seg.length;
    side.pinned_face = outer;
    comp.reference_tv += std::fabs(vals[inner] - vals[outer]) * seg.length;
    sides.push_back(side);
  }

  std::vector<double> verts;
  for (const auto& s : sides) {
    verts.push_back(s.chord.a);
    verts.push_back(s.chord.b);
  }
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  if (verts.size() < 3 || verts.size() != sides.size())
    fail(ErrorKind::InvalidInput, "free component boundary is not an inscribed polygon");
  if (verts.size() > kMaxFreeVertices) {
    std::ostringstream msg;
    msg << "free component has " << verts.size() << " vertices; at most " << kMaxFreeVertices << " are supported";
    fail(ErrorKind::TooManyVertices, msg.str());
  }
  for (std::size_t k = 0; k < verts.size(); ++k) {
    const Chord want = make_chord(verts[k], verts[(k + 1) % verts.size()]);
    auto it = std::find_if(sides.begin(), sides.end(), [&](const FreeSide& s) { return s.chord == want; });
    if (it == sides.end()) fail(ErrorKind::InvalidInput, "free component boundary is not an inscribed polygon");
    comp.sides.push_back(*it);
  }
  comp.vertices = std::move(verts);
  for (std::size_t f : faces) comp.area += arr.faces()[f].area;
  return comp;
}

}  // namespace

void ImportedStructure::validate() const {
  const std::size_t n = free_vertices.size();
  if (n < 3) fail(ErrorKind::InvalidInput, "free polygon needs at least 3 vertices");
  if (side_traces.size() != n) fail(ErrorKind::InvalidInput, "one side trace per free polygon side is required");
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (!(free_vertices[k] < free_vertices[k + 1]))
      fail(ErrorKind::InvalidInput, "free polygon vertices must be strictly increasing angles");
  }
  if (free_vertices.front() < 0.0 || free_vertices.back() >= kTwoPi)
    fail(ErrorKind::InvalidInput, "free polygon vertex angles must lie in [0, 2pi)");
  if (!(green_tolerance > 0.0)) fail(ErrorKind::InvalidInput, "green tolerance must be positive");
  for (const auto& r : reference_regions) {
    if (r.vertices.size() < 3) fail(ErrorKind::InvalidInput, "reference region needs at least 3 vertices");
    for (std::size_t k = 0; k < r.vertices.size(); ++k) {
      if (r.vertices[k] >= n) fail(ErrorKind::InvalidInput, "reference region vertex out of range");
      if (k > 0 && !(r.vertices[k - 1] < r.vertices[k]))
        fail(ErrorKind::InvalidInput, "reference region vertices must be increasing");
    }
  }
}

PiecewiseSolution ImportedStructure::to_solution() const {
  validate();
  const std::size_t n = free_vertices.size();
  std::vector<Chord> chords;
  for (std::size_t k = 0; k < n; ++k) chords.push_back(make_chord(free_vertices[k], free_vertices[(k + 1) % n]));
  std::vector<std::vector<Point>> regions;
  for (const auto& r : reference_regions) {
    for (std::size_t k = 0; k < r.vertices.size(); ++k) {
      const std::size_t a = r.vertices[k];
      const std::size_t b = r.vertices[(k + 1) % r.vertices.size()];
      if ((a + 1) % n != b && (b + 1) % n != a) chords.push_back(make_chord(free_vertices[a], free_vertices[b]));
    }
    regions.push_back(polygon_points(domain, free_vertices, r.vertices));
  }
  const std::vector<Point> poly = polygon_points(domain, free_vertices, [&] {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    return idx;
  }());

  auto value_at = [&](Point p) {
    if (inside_polygon(poly, p)) {
      for (std::size_t r = 0; r < regions.size(); ++r) {
        if (inside_polygon(regions[r], p)) return reference_regions[r].value;
      }
      if (!reference_regions.empty()) fail(ErrorKind::InvalidInput, "reference regions do not cover the free polygon");
      return reference_value;
    }
    for (std::size_t k = 0; k < n; ++k) {
      const Point a = poly[k];
      const Point b = poly[(k + 1) % n];
      if (cross(b - a, p - a) < 0.0) return side_traces[k];
    }
    fail(ErrorKind::InvalidInput, "point lies on the free polygon boundary");
  };
  return PiecewiseSolution::from_chords(domain, chords, value_at, std::nullopt, tv_offset);
}

RegionGraph region_graph(const PiecewiseSolution& u0, const std::vector<TieRecord>& ties, double green_tolerance) {
  std::vector<Chord> chords = u0.arrangement().chords();
  bool extra = false;
  for (const auto& rec : ties) {
    if (!rec.tied()) continue;
    for (const auto& m : rec.all_minimal_matchings) {
      chords.insert(chords.end(), m.begin(), m.end());
      extra = true;
    }
  }
  RegionGraph g{u0, {}, {}, green_tolerance};
  if (extra) {
    Arrangement arr = Arrangement::build(u0.domain(), chords, true);
    std::vector<double> values;
    for (const auto& f : arr.faces()) values.push_back(u0.evaluate(f.interior));
    g.base = PiecewiseSolution(std::move(arr), std::move(values), u0.trace(), u0.tv_offset());
    g.base.set_chord_systems(u0.chord_systems());
  }

  const Arrangement& arr = g.base.arrangement();
  const std::size_t nf = arr.face_count();
  std::vector<bool> is_free(nf, false);
  for (std::size_t f = 0; f < nf; ++f) {
    if (arr.faces()[f].boundary_contact > kSkeletonTol) {
      g.pinned.push_back({f, g.base.face_values()[f]});
    } else {
      is_free[f] = true;
    }
  }
  if (g.pinned.empty()) fail(ErrorKind::AllFree, "no face touches the boundary on an arc");

  UnionFind uf(nf);
  for (const auto& s : arr.segments()) {
    if (is_free[s.left_face] && is_free[s.right_face]) uf.unite(s.left_face, s.right_face);
  }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t f = 0; f < nf; ++f) {
    if (is_free[f]) groups[uf.find(f)].push_back(f);
  }
  for (const auto& [root, faces] : groups) g.free_components.push_back(build_component(g.base, faces, is_free));
  std::sort(g.free_components.begin(), g.free_components.end(),
            [](const FreeComponent& a, const FreeComponent& b) { return a.vertices < b.vertices; });
  return g;
}

RegionGraph region_graph(const ImportedStructure& structure) {
  return region_graph(structure.to_solution(), {}, structure.green_tolerance);
}

bool Constraint::satisfied(const std::vector<double>& t, double tol) const {
  switch (kind) {
    case Kind::AtLeast: return t[region] >= value - tol;
    case Kind::AtMost: return t[region] <= value + tol;
    case Kind::AtLeastRegion: return t[region] >= t[other] - tol;
  }
  return false;
}

std::string Constraint::to_string() const {
  std::ostringstream out;
  out.precision(17);
  out << "t" << region + 1;
  switch (kind) {
    case Kind::AtLeast: out << " >= " << value; break;
    case Kind::AtMost: out << " <= " << value; break;
    case Kind::AtLeastRegion: out << " >= t" << other + 1; break;
  }
  return out.str();
}

namespace {

using Polygon = std::vector<std::size_t>;
using Dissection = std::vector<Polygon>;

/// Dissections of an inscribed polygon into even-sided convex pieces obeying
/// Green's formula, memoized on vertex intervals [i, j] closed by edge (i, j).
class Dissector {
 public:
  Dissector(const ConvexDomain& domain, const std::vector<double>& angles, double tol)
      : n_(angles.size()), tol_(tol), len_(n_ * n_) {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) len_[i * n_ + j] = i == j ? 0.0 : domain.chord_length(angles[i], angles[j]);
  }

  std::vector<Dissection> all() { return solve(0, n_ - 1); }

  bool green(const Polygon& face) const {
    double alt = 0.0;
    double sum = 0.0;
    for (std::size_t k = 0; k < face.size(); ++k) {
      const double l = len_[face[k] * n_ + face[(k + 1) % face.size()]];
      alt += (k % 2 == 0) ? l : -l;
      sum += l;
    }
    return std::fabs(alt) <= tol_ * sum;
  }

 private:
  const std::vector<Dissection>& solve(std::size_t i, std::size_t j) {
    const auto key = std::make_pair(i, j);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::vector<Dissection> out;
    const std::size_t inner = j - i - 1;
    for (std::size_t mask = 0; mask < (std::size_t{1} << inner); ++mask) {
      const auto picked = static_cast<std::size_t>(std::popcount(mask));
      if (picked % 2 != 0 || picked < 2) continue;
      Polygon face{i};
      for (std::size_t b = 0; b < inner; ++b)
        if (mask & (std::size_t{1} << b)) face.push_back(i + 1 + b);
      face.push_back(j);
      if (!green(face)) continue;

      std::vector<Dissection> partial{{face}};
      for (std::size_t k = 0; k + 1 < face.size() && !partial.empty(); ++k) {
        if (face[k + 1] == face[k] + 1) continue;
        const auto& sub = solve(face[k], face[k + 1]);
        std::vector<Dissection> next;
        for (const auto& p : partial) {
          for (const auto& s : sub) {
            Dissection d = p;
            d.insert(d.end(), s.begin(), s.end());
            next.push_back(std::move(d));
          }
        }
        partial = std::move(next);
      }
      out.insert(out.end(), partial.begin(), partial.end());
    }
    return memo_.emplace(key, std::move(out)).first->second;
  }

  std::size_t n_;
  double tol_;
  std::vector<double> len_;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<Dissection>> memo_;
};

std::vector<Interval> propagate(std::size_t nregions, const std::vector<Constraint>& cs) {
  std::vector<Interval> b(nregions, Interval{-kInf, kInf});
  for (const auto& c : cs) {
    if (c.kind == Constraint::Kind::AtLeast) b[c.region].lo = std::max(b[c.region].lo, c.value);
    if (c.kind == Constraint::Kind::AtMost) b[c.region].hi = std::min(b[c.region].hi, c.value);
  }
  for (std::size_t pass = 0; pass <= nregions; ++pass) {
    bool changed = false;
    for (const auto& c : cs) {
      if (c.kind != Constraint::Kind::AtLeastRegion) continue;
      if (b[c.other].lo > b[c.region].lo) {
        b[c.region].lo = b[c.other].lo;
        changed = true;
      }
      if (b[c.region].hi < b[c.other].hi) {
        b[c.other].hi = b[c.region].hi;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return b;
}

bool feasible(const std::vector<Interval>& bounds) {
  return std::all_of(bounds.begin(), bounds.end(), [](const Interval& i) { return i.lo <= i.hi + kBoundTol; });
}

std::vector<double> clamp_to_zero(const SolutionFamily& f) {
  std::vector<double> x(f.regions.size());
  for (std::size_t r = 0; r < x.size(); ++r) x[r] = std::clamp(0.0, f.bounds[r].lo, std::max(f.bounds[r].lo, f.bounds[r].hi));
  // Coordinate-wise projection; with propagated bounds on a tree the clamp is
  // already feasible and this loop exits after one pass.
  for (std::size_t pass = 0; pass < 4 * x.size() + 4; ++pass) {
    bool changed = false;
    for (std::size_t r = 0; r < x.size(); ++r) {
      double lo = f.bounds[r].lo;
      double hi = f.bounds[r].hi;
      for (const auto& c : f.constraints) {
        if (c.kind != Constraint::Kind::AtLeastRegion) continue;
        if (c.region == r) lo = std::max(lo, x[c.other]);
        if (c.other == r) hi = std::min(hi, x[c.region]);
      }
      const double v = std::clamp(0.0, lo, std::max(lo, hi));
      if (v != x[r]) {
        x[r] = v;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return x;
}

/// Builds the family for one dissection and global parity, or nothing when
/// the inequality system is empty.
std::optional<SolutionFamily> make_family(const ConvexDomain& domain, std::size_t ci, const FreeComponent& comp,
                                          const Dissection& dis, int parity0) {
  const std::size_t n = comp.vertices.size();
  SolutionFamily f;
  f.component = ci;
  f.vertices = comp.vertices;
  f.sides = comp.sides;
  f.reference_tv = comp.reference_tv;

  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::pair<std::size_t, std::size_t>>> diag_faces;
  for (std::size_t r = 0; r < dis.size(); ++r) {
    Region reg;
    reg.vertices = dis[r];
    std::vector<double> pts;
    for (std::size_t v : dis[r]) pts.push_back(comp.vertices[v]);
    reg.area = polygon_area(domain, pts);
    for (std::size_t k = 0; k < dis[r].size(); ++k) {
      const std::size_t a = dis[r][k];
      const std::size_t b = dis[r][(k + 1) % dis[r].size()];
      RegionSide side;
      side.length = domain.chord_length(comp.vertices[a], comp.vertices[b]);
      if ((a + 1) % n == b || (b + 1) % n == a) {
        side.kind = RegionSide::Kind::Pinned;
        side.index = (a + 1) % n == b ? a : b;
        side.alpha = comp.sides[side.index].alpha;
      } else {
        side.kind = RegionSide::Kind::Internal;
        diag_faces[{std::min(a, b), std::max(a, b)}].push_back({r, k});
      }
      reg.sides.push_back(side);
    }
    f.regions.push_back(std::move(reg));
  }
  for (const auto& [d, uses] : diag_faces) {
    if (uses.size() != 2) fail(ErrorKind::InvalidInput, "dissection diagonal is not shared by two regions");
    const std::size_t idx = f.diagonals.size();
    f.diagonals.push_back(d);
    auto& s0 = f.regions[uses[0].first].sides[uses[0].second];
    auto& s1 = f.regions[uses[1].first].sides[uses[1].second];
    s0.index = s1.index = idx;
    s0.neighbor = uses[1].first;
    s1.neighbor = uses[0].first;
  }

  // Parities over the dual tree: a diagonal has opposite types on its faces.
  std::vector<int> parity(f.regions.size(), -1);
  parity[0] = parity0;
  std::vector<std::size_t> stack{0};
  auto type_of = [&](std::size_t r, std::size_t k) { return (k + parity[r]) % 2 == 0 ? SideType::Lower : SideType::Upper; };
  while (!stack.empty()) {
    const std::size_t r = stack.back();
    stack.pop_back();
    for (std::size_t k = 0; k < f.regions[r].sides.size(); ++k) {
      const auto& s = f.regions[r].sides[k];
      if (s.kind != RegionSide::Kind::Internal) continue;
      const std::size_t o = s.neighbor;
      if (parity[o] >= 0) continue;
      const std::size_t ko = static_cast<std::size_t>(
          std::find_if(f.regions[o].sides.begin(), f.regions[o].sides.end(),
                       [&](const RegionSide& t) { return t.kind == RegionSide::Kind::Internal && t.index == s.index; }) -
          f.regions[o].sides.begin());
      const SideType want = type_of(r, k) == SideType::Lower ? SideType::Upper : SideType::Lower;
      parity[o] = ((ko % 2 == 0) == (want == SideType::Lower)) ? 0 : 1;
      stack.push_back(o);
    }
  }
  for (std::size_t r = 0; r < f.regions.size(); ++r) {
    for (std::size_t k = 0; k < f.regions[r].sides.size(); ++k) {
      auto& s = f.regions[r].sides[k];
      s.type = type_of(r, k);
      if (s.kind == RegionSide::Kind::Pinned) {
        Constraint c;
        c.kind = s.type == SideType::Lower ? Constraint::Kind::AtLeast : Constraint::Kind::AtMost;
        c.region = r;
        c.value = s.alpha;
        f.constraints.push_back(c);
      } else if (s.type == SideType::Lower) {
        Constraint c;
        c.kind = Constraint::Kind::AtLeastRegion;
        c.region = r;
        c.other = s.neighbor;
        f.constraints.push_back(c);
      }
    }
  }
  auto key = [](const Constraint& c) { return std::make_tuple(c.region, static_cast<int>(c.kind), c.other, c.value); };
  std::sort(f.constraints.begin(), f.constraints.end(), [&](const Constraint& a, const Constraint& b) { return key(a) < key(b); });
  f.constraints.erase(std::unique(f.constraints.begin(), f.constraints.end(),
                                  [&](const Constraint& a, const Constraint& b) { return key(a) == key(b); }),
                      f.constraints.end());
  f.bounds = propagate(f.regions.size(), f.constraints);
  if (!feasible(f.bounds)) return std::nullopt;
  return f;
}

bool region_inside(const Region& fine, const Region& coarse) {
  return std::all_of(fine.vertices.begin(), fine.vertices.end(), [&](std::size_t v) {
    return std::find(coarse.vertices.begin(), coarse.vertices.end(), v) != coarse.vertices.end();
  });
}

bool order_path(const SolutionFamily& f, std::size_t from, std::size_t to) {
  std::vector<bool> seen(f.regions.size(), false);
  std::vector<std::size_t> stack{from};
  while (!stack.empty()) {
    const std::size_t r = stack.back();
    stack.pop_back();
    if (r == to) return true;
    if (seen[r]) continue;
    seen[r] = true;
    for (const auto& c : f.constraints)
      if (c.kind == Constraint::Kind::AtLeastRegion && c.region == r) stack.push_back(c.other);
  }
  return false;
}

/// Whether every coarse member, spread over the finer regions, satisfies the
/// finer system.
bool contains_coarse(const SolutionFamily& fine, const SolutionFamily& coarse) {
  if (fine.component != coarse.component || fine.diagonals.size() <= coarse.diagonals.size()) return false;
  if (!std::includes(fine.diagonals.begin(), fine.diagonals.end(), coarse.diagonals.begin(), coarse.diagonals.end()))
    return false;
  std::vector<std::size_t> parent(fine.regions.size());
  for (std::size_t r = 0; r < fine.regions.size(); ++r) {
    bool found = false;
    for (std::size_t c = 0; c < coarse.regions.size() && !found; ++c) {
      if (region_inside(fine.regions[r], coarse.regions[c])) {
        parent[r] = c;
        found = true;
      }
    }
    if (!found) return false;
  }
  for (const auto& c : fine.constraints) {
    const std::size_t p = parent[c.region];
    switch (c.kind) {
      case Constraint::Kind::AtLeast:
        if (coarse.bounds[p].lo < c.value - kBoundTol) return false;
        break;
      case Constraint::Kind::AtMost:
        if (coarse.bounds[p].hi > c.value + kBoundTol) return false;
        break;
      case Constraint::Kind::AtLeastRegion: {
        const std::size_t q = parent[c.other];
        if (p == q || coarse.bounds[p].lo >= coarse.bounds[q].hi - kBoundTol) break;
        if (!order_path(coarse, p, q)) return false;
        break;
      }
    }
  }
  return true;
}

auto family_key(const SolutionFamily& f) {
  std::vector<std::string> cs;
  for (const auto& c : f.constraints) cs.push_back(c.to_string());
  std::vector<std::vector<std::size_t>> regs;
  for (const auto& r : f.regions) regs.push_back(r.vertices);
  std::sort(regs.begin(), regs.end());
  return std::make_tuple(f.component, -static_cast<long>(f.regions.size()), f.diagonals, regs, cs);
}

}  // namespace

double family_energy_delta(const SolutionFamily& family, const std::vector<double>& values) {
  if (values.size() != family.regions.size())
    fail(ErrorKind::InvalidInput, "one value per family region is required");
  double tv = 0.0;
  for (std::size_t r = 0; r < family.regions.size(); ++r) {
    for (const auto& s : family.regions[r].sides) {
      if (s.kind == RegionSide::Kind::Pinned) {
        tv += std::fabs(values[r] - s.alpha) * s.length;
      } else if (r < s.neighbor) {
        tv += std::fabs(values[r] - values[s.neighbor]) * s.length;
      }
    }
  }
  return tv - family.reference_tv;
}

FamilyEnumeration enumerate_families(const RegionGraph& graph) {
  FamilyEnumeration out;
  const ConvexDomain& domain = graph.base.domain();
  std::vector<SolutionFamily> candidates;
  for (std::size_t ci = 0; ci < graph.free_components.size(); ++ci) {
    const auto& comp = graph.free_components[ci];
    Dissector dissector(domain, comp.vertices, graph.green_tolerance);
    for (const auto& dis : dissector.all()) {
      for (int parity = 0; parity < 2; ++parity) {
        auto f = make_family(domain, ci, comp, dis, parity);
        if (!f) {
          ++out.rejected_candidates;
          continue;
        }
        const double delta = family_energy_delta(*f, clamp_to_zero(*f));
        if (std::fabs(delta) > std::max(kTvRelTol, graph.green_tolerance) * (1.0 + f->reference_tv) * 10.0) {
          ++out.rejected_candidates;
          continue;
        }
        candidates.push_back(std::move(*f));
      }
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const SolutionFamily& a, const SolutionFamily& b) { return family_key(a) < family_key(b); });
  candidates.erase(std::unique(candidates.begin(), candidates.end(),
                               [](const SolutionFamily& a, const SolutionFamily& b) {
                                 return family_key(a) == family_key(b);
                               }),
                   candidates.end());
  for (const auto& c : candidates) {
    const bool covered = std::any_of(candidates.begin(), candidates.end(),
                                     [&](const SolutionFamily& fine) { return contains_coarse(fine, c); });
    (covered ? out.dropped : out.families).push_back(c);
  }
  return out;
}

PiecewiseSolution sample_member(const SolutionFamily& family, const std::vector<double>& values,
                                const RegionGraph& graph) {
  if (values.size() != family.regions.size())
    fail(ErrorKind::InvalidInput, "one value per family region is required");
  for (const auto& c : family.constraints) {
    if (!c.satisfied(values, kBoundTol)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "constraint " << c.to_string() << " violated by t" << c.region + 1 << " = " << values[c.region];
      if (c.kind == Constraint::Kind::AtLeastRegion) msg << ", t" << c.other + 1 << " = " << values[c.other];
      fail(ErrorKind::ConstraintViolation, msg.str());
    }
  }
  const PiecewiseSolution& base = graph.base;
  const ConvexDomain& domain = base.domain();
  const std::size_t n = family.vertices.size();

  std::vector<Chord> chords;
  for (const auto& c : base.arrangement().chords()) {
    bool outside = false;
    for (std::size_t k = 0; k < n && !outside; ++k) {
      const double v0 = family.vertices[k];
      const double span = ccw_span(v0, family.vertices[(k + 1) % n]);
      outside = ccw_span(v0, c.a) <= span + kAngleTol && ccw_span(v0, c.b) <= span + kAngleTol;
    }
    if (outside) chords.push_back(c);
  }
  for (const auto& s : family.sides) chords.push_back(s.chord);
  for (const auto& [a, b] : family.diagonals) chords.push_back(make_chord(family.vertices[a], family.vertices[b]));
  Arrangement arr = Arrangement::build(domain, chords, base.arrangement().has_crossings());

  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  const auto poly = polygon_points(domain, family.vertices, all);
  std::vector<std::vector<Point>> regions;
  for (const auto& r : family.regions) regions.push_back(polygon_points(domain, family.vertices, r.vertices));

  std::vector<double> out(arr.face_count(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t f = 0; f < arr.face_count(); ++f) {
    const Point p = arr.faces()[f].interior;
    if (!inside_polygon(poly, p)) continue;
    for (std::size_t r = 0; r < regions.size(); ++r) {
      if (inside_polygon(regions[r], p)) out[f] = values[r];
    }
  }
  const auto& bfaces = base.arrangement().faces();
  for (std::size_t f = 0; f < bfaces.size(); ++f) {
    if (inside_polygon(poly, bfaces[f].interior)) continue;
    const std::size_t j = arr.locate(bfaces[f].interior);
    if (std::isnan(out[j])) out[j] = base.face_values()[f];
  }
  for (std::size_t f = 0; f < out.size(); ++f) {
    if (std::isnan(out[f])) out[f] = base.evaluate(arr.faces()[f].interior);
  }
  PiecewiseSolution member(std::move(arr), std::move(out), base.trace(), base.tv_offset());
  return member.simplified();
}

NormSelection smallest_norm_member(const SolutionFamily& family, double p) {
  if (!(p >= 1.0)) fail(ErrorKind::InvalidInput, "norm exponent must be at least 1");
  if (!feasible(family.bounds)) fail(ErrorKind::Infeasible, "family constraint system is empty");
  NormSelection sel;
  sel.values = clamp_to_zero(family);
  for (const auto& c : family.constraints) {
    if (!c.satisfied(sel.values, kBoundTol)) fail(ErrorKind::Infeasible, "no feasible member found");
  }
  for (std::size_t r = 0; r < sel.values.size(); ++r)
    sel.objective += family.regions[r].area * std::pow(std::fabs(sel.values[r]), p);
  return sel;
}

}  // namespace lgp

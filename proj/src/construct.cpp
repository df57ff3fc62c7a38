#include "lgp/construct.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lgp/error.hpp"

namespace lgp {

PiecewiseSolution::PiecewiseSolution(Arrangement arrangement, std::vector<double> face_values,
                                     std::optional<BoundaryData> trace, double tv_offset)
    : arrangement_(std::move(arrangement)),
      face_values_(std::move(face_values)),
      trace_(std::move(trace)),
      tv_offset_(tv_offset) {
  if (face_values_.size() != arrangement_.face_count())
    fail(ErrorKind::InvalidInput, "one value per face is required");
}

PiecewiseSolution PiecewiseSolution::from_chords(const ConvexDomain& domain, std::vector<Chord> chords,
                                                 const std::function<double(Point)>& value_at,
                                                 std::optional<BoundaryData> trace, double tv_offset,
                                                 bool allow_crossings) {
  Arrangement arr = Arrangement::build(domain, std::move(chords), allow_crossings);
  std::vector<double> values;
  values.reserve(arr.face_count());
  for (const auto& f : arr.faces()) values.push_back(value_at(f.interior));
  return PiecewiseSolution(std::move(arr), std::move(values), std::move(trace), tv_offset);
}

double PiecewiseSolution::evaluate(Point p) const { return face_values_[arrangement_.locate(p)]; }

double PiecewiseSolution::trace_at(double theta) const {
  return face_values_[arrangement_.face_at_boundary(theta)];
}

PiecewiseSolution PiecewiseSolution::simplified() const {
  const auto& arr = arrangement_;
  std::vector<Chord> keep;
  for (std::size_t c = 0; c < arr.chords().size(); ++c) {
    bool jumps = false;
    for (std::size_t s : arr.segments_of_chord(c)) {
      const auto& seg = arr.segments()[s];
      if (face_values_[seg.left_face] != face_values_[seg.right_face]) jumps = true;
    }
    if (jumps) keep.push_back(arr.chords()[c]);
  }
  if (keep.size() == arr.chords().size()) return *this;
  Arrangement coarse = Arrangement::build(arr.domain(), keep, arr.has_crossings());
  // Every coarse face contains at least one old face; transfer values that way
  // since a coarse face's own sample point may sit on a dropped chord.
  std::vector<double> values(coarse.face_count(), 0.0);
  for (std::size_t f = 0; f < arr.face_count(); ++f) {
    values[coarse.locate(arr.faces()[f].interior)] = face_values_[f];
  }
  PiecewiseSolution out(std::move(coarse), std::move(values), trace_, tv_offset_);
  out.systems_ = systems_;
  return out;
}

bool in_superlevel_region(const ConvexDomain& domain, const ChordSystem& system, const ArcSet& arcs, Point p) {
  if (arcs.full) return true;
  if (arcs.empty()) return false;
  const Arc& first = arcs.arcs.front();
  const Point anchor = domain.boundary_point(first.start + (first.end - first.start) / 2.0);
  bool inside = true;
  for (const auto& c : system.chords) {
    const Point a = domain.boundary_point(c.a);
    const Point b = domain.boundary_point(c.b);
    const bool side_p = cross(b - a, p - a) > 0.0;
    const bool side_anchor = cross(b - a, anchor - a) > 0.0;
    if (side_p != side_anchor) inside = !inside;
  }
  return inside;
}

namespace {

struct Level {
  double threshold;
  double jump;
  ArcSet arcs;
  ChordSystem system;
};

bool nests_inside(const ConvexDomain& domain, const Level& lower, const Level& upper) {
  std::vector<Chord> chords = lower.system.chords;
  chords.insert(chords.end(), upper.system.chords.begin(), upper.system.chords.end());
  const Arrangement arr = Arrangement::build(domain, chords);
  for (const auto& f : arr.faces()) {
    if (in_superlevel_region(domain, upper.system, upper.arcs, f.interior) &&
        !in_superlevel_region(domain, lower.system, lower.arcs, f.interior))
      return false;
  }
  return true;
}

}  // namespace

Construction build_solution(const ConvexDomain& domain, const BoundaryData& h) {
  const auto values = h.distinct_values();
  const auto taus = h.thresholds();

  std::vector<Level> levels;
  std::vector<TieRecord> ties;
  std::vector<Chord> chosen;
  for (std::size_t j = 0; j < taus.size(); ++j) {
    const ArcSet arcs = h.superlevel_arcs(taus[j]);
    TieRecord rec = minimal_separators(domain, arcs, taus[j]);
    bool placed = false;
    for (const auto& cand : rec.all_minimal_matchings) {
      const bool crosses = std::any_of(cand.begin(), cand.end(), [&](const Chord& c) {
        return std::any_of(chosen.begin(), chosen.end(), [&](const Chord& d) { return chords_interleave(c, d); });
      });
      if (crosses) continue;
      Level level{taus[j], values[j + 1] - values[j], arcs, {taus[j], cand}};
      if (!levels.empty() && !nests_inside(domain, levels.back(), level)) continue;
      chosen.insert(chosen.end(), cand.begin(), cand.end());
      levels.push_back(std::move(level));
      placed = true;
      break;
    }
    if (!placed) {
      std::ostringstream msg;
      msg << "no minimal chord system at threshold " << taus[j] << " nests with the lower levels";
      fail(ErrorKind::NestingConflict, msg.str());
    }
    ties.push_back(std::move(rec));
  }

  const double base = values.front();
  auto value_at = [&](Point p) {
    double v = base;
    for (const auto& level : levels) {
      if (in_superlevel_region(domain, level.system, level.arcs, p)) v += level.jump;
    }
    return v;
  };
  PiecewiseSolution u = PiecewiseSolution::from_chords(domain, chosen, value_at, h);
  std::vector<ChordSystem> systems;
  for (const auto& level : levels) systems.push_back(level.system);
  u.set_chord_systems(std::move(systems));
  return {std::move(u), std::move(ties)};
}

double total_variation(const PiecewiseSolution& u) {
  const auto& vals = u.face_values();
  double tv = 0.0;
  for (const auto& s : u.arrangement().segments()) tv += std::fabs(vals[s.left_face] - vals[s.right_face]) * s.length;
  return tv + u.tv_offset();
}

double energy_F_exact(const PiecewiseSolution& u, const BoundaryData& h) {
  const auto& vals = u.face_values();
  double mismatch = 0.0;
  for (const auto& arc : u.arrangement().arcs())
    mismatch += h.mismatch_on_arc(u.domain(), arc.start, arc.end, vals[arc.face]);
  return total_variation(u) + mismatch;
}

double evaluate(const PiecewiseSolution& u, Point p) { return u.evaluate(p); }

PiecewiseSolution combine(const PiecewiseSolution& u, const PiecewiseSolution& v, CombineMode mode) {
  if (!(u.domain() == v.domain())) fail(ErrorKind::DomainMismatch, "solutions live on different domains");
  if (u.tv_offset() != v.tv_offset())
    fail(ErrorKind::InvalidInput, "solutions carry different external variation offsets");
  std::vector<Chord> chords = u.arrangement().chords();
  chords.insert(chords.end(), v.arrangement().chords().begin(), v.arrangement().chords().end());
  auto op = [mode](double a, double b) { return mode == CombineMode::Min ? std::min(a, b) : std::max(a, b); };
  std::optional<BoundaryData> trace;
  if (u.trace() && v.trace()) {
    trace = mode == CombineMode::Min ? BoundaryData::pointwise_min(*u.trace(), *v.trace())
                                     : BoundaryData::pointwise_max(*u.trace(), *v.trace());
  }
  auto value_at = [&](Point p) { return op(u.evaluate(p), v.evaluate(p)); };
  return PiecewiseSolution::from_chords(u.domain(), chords, value_at, trace, u.tv_offset(), true).simplified();
}

namespace {

void require_trace(const PiecewiseSolution& x, const BoundaryData& h, const char* which) {
  const double tv = total_variation(x);
  const double mismatch = energy_F_exact(x, h) - tv;
  if (mismatch > kTvRelTol * (1.0 + tv)) {
    std::ostringstream msg;
    msg << which << " does not attain the boundary data (mismatch " << mismatch << ")";
    fail(ErrorKind::TraceMismatch, msg.str());
  }
}

}  // namespace

bool verify_least_gradient(const PiecewiseSolution& candidate, const PiecewiseSolution& reference,
                           const BoundaryData& h) {
  require_trace(candidate, h, "candidate");
  require_trace(reference, h, "reference");
  return verify_least_gradient(candidate, reference);
}

bool verify_least_gradient(const PiecewiseSolution& candidate, const PiecewiseSolution& reference) {
  const double ref = total_variation(reference);
  return std::fabs(total_variation(candidate) - ref) <= kTvRelTol * (1.0 + ref);
}

}  // namespace lgp

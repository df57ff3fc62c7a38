#include "lgp/boundary_data.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "lgp/error.hpp"

namespace lgp {

double ArcSet::total_length(const ConvexDomain& domain) const {
  if (full) return domain.perimeter();
  double sum = 0.0;
  for (const auto& a : arcs) sum += domain.arc_length(a.start, a.end);
  return sum;
}

std::vector<double> ArcSet::interface_points() const {
  std::vector<double> out;
  for (const auto& a : arcs) {
    out.push_back(normalize_angle(a.start));
    out.push_back(normalize_angle(a.end));
  }
  return out;
}

BoundaryData BoundaryData::from_pieces(std::vector<Piece> pieces) {
  if (pieces.empty()) fail(ErrorKind::InvalidInput, "boundary data needs at least one piece");
  for (auto& p : pieces) {
    if (!std::isfinite(p.value) || !std::isfinite(p.start))
      fail(ErrorKind::InvalidInput, "boundary data must be finite");
    p.start = normalize_angle(p.start);
  }
  std::sort(pieces.begin(), pieces.end(), [](const Piece& x, const Piece& y) { return x.start < y.start; });
  for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
    if (pieces[i + 1].start - pieces[i].start <= kAngleTol)
      fail(ErrorKind::InvalidInput, "duplicate piece start angle");
  }
  if (pieces.size() > 1 && pieces.front().start + kTwoPi - pieces.back().start <= kAngleTol)
    fail(ErrorKind::InvalidInput, "duplicate piece start angle");

  std::vector<Piece> merged;
  for (const auto& p : pieces) {
    if (merged.empty() || merged.back().value != p.value) merged.push_back(p);
  }
  // Merge across the seam: the last piece continues into the first.
  if (merged.size() > 1 && merged.back().value == merged.front().value) {
    merged.front().start = merged.back().start;
    merged.pop_back();
    std::rotate(merged.begin(), merged.begin() + 1, merged.end());
  }
  BoundaryData h;
  h.pieces_ = std::move(merged);
  return h;
}

BoundaryData BoundaryData::constant(double value) { return from_pieces({{0.0, value}}); }

double BoundaryData::piece_end(std::size_t i) const {
  if (pieces_.size() == 1) return pieces_[0].start + kTwoPi;
  return pieces_[(i + 1) % pieces_.size()].start;
}

double BoundaryData::value_at(double theta) const {
  if (pieces_.size() == 1) return pieces_[0].value;
  const double t = normalize_angle(theta);
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const double a = pieces_[i].start;
    if (ccw_span(a, t) < ccw_span(a, piece_end(i))) return pieces_[i].value;
  }
  return pieces_.back().value;
}

std::vector<double> BoundaryData::jump_points() const {
  std::vector<double> out;
  if (pieces_.size() == 1) return out;
  for (const auto& p : pieces_) out.push_back(p.start);
  return out;
}

std::vector<double> BoundaryData::distinct_values() const {
  std::vector<double> vals;
  for (const auto& p : pieces_) vals.push_back(p.value);
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  return vals;
}

std::vector<double> BoundaryData::thresholds() const {
  const auto vals = distinct_values();
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < vals.size(); ++i) out.push_back((vals[i] + vals[i + 1]) / 2.0);
  return out;
}

ArcSet BoundaryData::superlevel_arcs(double t) const {
  for (const auto& p : pieces_) {
    if (p.value == t) {
      std::ostringstream msg;
      msg << "threshold " << t << " equals a value of the boundary data";
      fail(ErrorKind::PlateauThreshold, msg.str());
    }
  }
  ArcSet out;
  const std::size_t n = pieces_.size();
  std::size_t above = 0;
  for (const auto& p : pieces_) above += p.value > t ? 1 : 0;
  if (above == n) {
    out.full = true;
    return out;
  }
  if (above == 0) return out;
  // Start scanning right after a piece below t so no run is split by the seam.
  std::size_t first = 0;
  while (pieces_[first].value > t) ++first;
  for (std::size_t k = 1; k <= n; ++k) {
    const std::size_t i = (first + k) % n;
    const std::size_t prev = (i + n - 1) % n;
    if (pieces_[i].value > t && !(pieces_[prev].value > t)) {
      std::size_t j = i;
      while (pieces_[(j + 1) % n].value > t) j = (j + 1) % n;
      double end = piece_end(j);
      double start = pieces_[i].start;
      if (end <= start) end += kTwoPi;
      out.arcs.push_back({start, end});
    }
  }
  std::sort(out.arcs.begin(), out.arcs.end(), [](const Arc& x, const Arc& y) { return x.start < y.start; });
  return out;
}

double BoundaryData::min_value() const { return distinct_values().front(); }
double BoundaryData::max_value() const { return distinct_values().back(); }

double BoundaryData::mismatch_on_arc(const ConvexDomain& domain, double a, double b, double c) const {
  if (pieces_.size() == 1) {
    const double len = b - a >= kTwoPi - kAngleTol ? domain.perimeter() : domain.arc_length(a, b);
    return std::fabs(c - pieces_[0].value) * len;
  }
  const bool full = b - a >= kTwoPi - kAngleTol;
  const double span = full ? kTwoPi : ccw_span(a, b);
  std::vector<double> cuts{0.0};
  for (const auto& p : pieces_) {
    const double off = ccw_span(a, p.start);
    if (off > 0.0 && off < span) cuts.push_back(off);
  }
  cuts.push_back(span);
  std::sort(cuts.begin(), cuts.end());
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = a + cuts[i];
    const double hi = a + cuts[i + 1];
    if (hi - lo <= 0.0) continue;
    const double v = value_at(lo + (hi - lo) / 2.0);
    sum += std::fabs(c - v) * domain.arc_length(lo, hi);
  }
  return sum;
}

namespace {

BoundaryData combine_pointwise(const BoundaryData& u, const BoundaryData& v,
                               const std::function<double(double, double)>& op) {
  std::vector<double> cuts;
  for (const auto& p : u.pieces()) cuts.push_back(p.start);
  for (const auto& p : v.pieces()) cuts.push_back(p.start);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = i + 1 < cuts.size() ? cuts[i + 1] : cuts[0] + kTwoPi;
    const double mid = a + (b - a) / 2.0;
    pieces.push_back({a, op(u.value_at(mid), v.value_at(mid))});
  }
  return BoundaryData::from_pieces(std::move(pieces));
}

}  // namespace

BoundaryData BoundaryData::pointwise_min(const BoundaryData& u, const BoundaryData& v) {
  return combine_pointwise(u, v, [](double x, double y) { return std::min(x, y); });
}

BoundaryData BoundaryData::pointwise_max(const BoundaryData& u, const BoundaryData& v) {
  return combine_pointwise(u, v, [](double x, double y) { return std::max(x, y); });
}

bool BoundaryData::operator==(const BoundaryData& o) const {
  if (pieces_.size() != o.pieces_.size()) return false;
  if (pieces_.size() == 1) return pieces_[0].value == o.pieces_[0].value;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (pieces_[i].start != o.pieces_[i].start || pieces_[i].value != o.pieces_[i].value) return false;
  }
  return true;
}

}  // namespace lgp

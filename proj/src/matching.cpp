#include <algorithm>
#include <limits>
#include <map>

#include "lgp/construct.hpp"
#include "lgp/error.hpp"

namespace lgp {

namespace {

constexpr std::size_t kMaxTiedMatchings = 20000;

using Pairs = std::vector<std::pair<std::size_t, std::size_t>>;

class IntervalMatcher {
 public:
  IntervalMatcher(const ConvexDomain& domain, std::vector<double> points)
      : points_(std::move(points)), n_(points_.size()) {
    cost_.assign(n_ * n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) cost_[i * n_ + j] = domain.chord_length(points_[i], points_[j]);
    best_.assign((n_ + 1) * (n_ + 1), 0.0);
    // best(i, j) over the closed interval [i, j]; empty intervals cost 0.
    for (std::size_t len = 2; len <= n_; len += 2) {
      for (std::size_t i = 0; i + len <= n_; ++i) {
        const std::size_t j = i + len - 1;
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t k = i + 1; k <= j; k += 2) b = std::min(b, split_cost(i, j, k));
        best(i, j) = b;
      }
    }
  }

  double optimum() const { return n_ == 0 ? 0.0 : best_at(0, n_ - 1); }

  std::vector<Pairs> all_optimal() { return enumerate(0, n_ == 0 ? 0 : n_ - 1); }

 private:
  double& best(std::size_t i, std::size_t j) { return best_[i * (n_ + 1) + j]; }
  double best_at(std::size_t i, std::size_t j) const {
    if (j < i || i >= n_) return 0.0;
    return best_[i * (n_ + 1) + j];
  }
  double split_cost(std::size_t i, std::size_t j, std::size_t k) const {
    const double inner = k > i + 1 ? best_at(i + 1, k - 1) : 0.0;
    const double outer = k < j ? best_at(k + 1, j) : 0.0;
    return cost_[i * n_ + k] + inner + outer;
  }

  std::vector<Pairs> enumerate(std::size_t i, std::size_t j) {
    if (n_ == 0 || j < i) return {Pairs{}};
    const auto key = std::make_pair(i, j);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::vector<Pairs> out;
    const double b = best_at(i, j);
    for (std::size_t k = i + 1; k <= j; k += 2) {
      if (split_cost(i, j, k) > b + kLengthTieTol) continue;
      const auto inner = k > i + 1 ? enumerate(i + 1, k - 1) : std::vector<Pairs>{Pairs{}};
      const auto outer = k < j ? enumerate(k + 1, j) : std::vector<Pairs>{Pairs{}};
      for (const auto& a : inner) {
        for (const auto& c : outer) {
          Pairs m;
          m.emplace_back(i, k);
          m.insert(m.end(), a.begin(), a.end());
          m.insert(m.end(), c.begin(), c.end());
          out.push_back(std::move(m));
          if (out.size() > kMaxTiedMatchings)
            fail(ErrorKind::InvalidInput, "too many tied minimal matchings to enumerate");
        }
      }
    }
    memo_.emplace(key, out);
    return out;
  }

  std::vector<double> points_;
  std::size_t n_;
  std::vector<double> cost_;
  std::vector<double> best_;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<Pairs>> memo_;
};

}  // namespace

TieRecord minimal_separators(const ConvexDomain& domain, const ArcSet& arcs, double threshold) {
  TieRecord rec;
  rec.threshold = threshold;
  if (!arcs.proper()) {
    rec.all_minimal_matchings.push_back({});
    return rec;
  }
  std::vector<double> points = arcs.interface_points();
  std::sort(points.begin(), points.end());
  IntervalMatcher matcher(domain, points);

  std::vector<std::vector<Chord>> matchings;
  for (const auto& pairs : matcher.all_optimal()) {
    std::vector<Chord> chords;
    for (const auto& [i, k] : pairs) chords.push_back(make_chord(points[i], points[k]));
    std::sort(chords.begin(), chords.end());
    matchings.push_back(std::move(chords));
  }
  std::sort(matchings.begin(), matchings.end());
  matchings.erase(std::unique(matchings.begin(), matchings.end()), matchings.end());

  double best = std::numeric_limits<double>::infinity();
  for (const auto& m : matchings) best = std::min(best, total_length(domain, m));
  for (const auto& m : matchings) {
    if (total_length(domain, m) <= best + kLengthTieTol) rec.all_minimal_matchings.push_back(m);
  }
  rec.length = total_length(domain, rec.all_minimal_matchings.front());
  return rec;
}

}  // namespace lgp

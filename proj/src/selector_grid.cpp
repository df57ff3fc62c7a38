#include "lgp/selector_grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "lgp/error.hpp"
#include "lgp/io.hpp"

namespace lgp {

std::size_t ScalarField::inside_count() const {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

bool ScalarField::same_shape(const ScalarField& other) const {
  return nx == other.nx && ny == other.ny && spacing == other.spacing && mask == other.mask;
}

void GridProblem::validate() const {
  if (!(p >= 1.0 && p <= 2.0)) fail(ErrorKind::InvalidInput, "norm exponent must lie in [1, 2]");
  if (!(eps >= 0.0 && eps <= 1.0)) fail(ErrorKind::InvalidInput, "eps must lie in [0, 1]");
  if (max_iters <= 0) fail(ErrorKind::InvalidInput, "max_iters must be positive");
  if (!(tol > 0.0)) fail(ErrorKind::InvalidInput, "tolerance must be positive");
  if (field.values.size() != field.mask.size() || field.mask.size() != static_cast<std::size_t>(field.nx) * field.ny)
    fail(ErrorKind::ShapeMismatch, "field arrays do not match the grid size");
  for (const auto& e : edges) {
    if (e.cell >= field.mask.size() || !field.mask[e.cell])
      fail(ErrorKind::ShapeMismatch, "boundary edge refers to a cell outside the mask");
  }
}

ScalarField rasterize(const ConvexDomain& domain, int n) {
  if (n < kMinGrid) {
    std::ostringstream msg;
    msg << "grid size " << n << " is below the minimum of " << kMinGrid;
    fail(ErrorKind::GridTooCoarse, msg.str());
  }
  const auto [lo, hi] = domain.bounding_box();
  const double extent = std::max(hi.x - lo.x, hi.y - lo.y);
  ScalarField g;
  g.nx = g.ny = n;
  g.spacing = extent / n;
  g.origin = {0.5 * (lo.x + hi.x) - 0.5 * extent, 0.5 * (lo.y + hi.y) - 0.5 * extent};
  g.mask.assign(static_cast<std::size_t>(n) * n, 0);
  g.values.assign(g.mask.size(), 0.0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g.mask[g.index(i, j)] = domain.contains(g.center(i, j)) ? 1 : 0;
  return g;
}

namespace {

double evaluate_near(const PiecewiseSolution& u, Point p, double h) {
  static constexpr double kNudge[][2] = {{0.0, 0.0}, {1e-7, 3e-7}, {-3e-7, 1e-7}, {2e-7, -5e-7}};
  for (const auto& d : kNudge) {
    try {
      return u.evaluate({p.x + d[0] * h, p.y + d[1] * h});
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::OnSkeleton) throw;
    }
  }
  fail(ErrorKind::OnSkeleton, "cell sample lies on the chord skeleton");
}

}  // namespace

ScalarField rasterize(const PiecewiseSolution& u, int n, int samples, double window) {
  if (samples < 1) fail(ErrorKind::InvalidInput, "samples per cell must be positive");
  if (!(window > 0.0)) fail(ErrorKind::InvalidInput, "sampling window must be positive");
  ScalarField g = rasterize(u.domain(), n);
  const double h = g.spacing;
  const double w = window * h;
  const double sub = w / samples;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (!g.inside(i, j)) continue;
      const Point c = g.center(i, j);
      if (samples == 1) {
        g.values[g.index(i, j)] = evaluate_near(u, c, h);
        continue;
      }
      double sum = 0.0;
      int count = 0;
      for (int b = 0; b < samples; ++b) {
        for (int a = 0; a < samples; ++a) {
          const Point p{c.x - 0.5 * w + (a + 0.5) * sub, c.y - 0.5 * w + (b + 0.5) * sub};
          if (!u.domain().contains(p)) continue;
          sum += evaluate_near(u, p, h);
          ++count;
        }
      }
      g.values[g.index(i, j)] = count > 0 ? sum / count : evaluate_near(u, c, h);
    }
  }
  return g;
}

GridProblem rasterize(const ConvexDomain& domain, const BoundaryFunction& f, int n) {
  GridProblem prob;
  prob.field = rasterize(domain, n);
  const ScalarField& g = prob.field;
  static constexpr int kDirs[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (!g.inside(i, j)) continue;
      const Point c = g.center(i, j);
      for (const auto& d : kDirs) {
        if (g.inside(i + d[0], j + d[1])) continue;
        const Point mid{c.x + 0.5 * g.spacing * d[0], c.y + 0.5 * g.spacing * d[1]};
        BoundaryEdge e;
        e.cell = g.index(i, j);
        e.theta = domain.boundary_angle(mid);
        const Point nu = domain.outward_normal(e.theta);
        e.weight = g.spacing * std::fabs(nu.x * d[0] + nu.y * d[1]);
        e.sample = f(e.theta);
        prob.edges.push_back(e);
      }
    }
  }
  return prob;
}

GridProblem rasterize(const ConvexDomain& domain, const BoundaryData& h, int n) {
  return rasterize(domain, [&h](double theta) { return h.value_at(theta); }, n);
}

double grid_tv(const ScalarField& x, bool anisotropic) {
  double tv = 0.0;
  for (int j = 0; j < x.ny; ++j) {
    for (int i = 0; i < x.nx; ++i) {
      if (!x.inside(i, j)) continue;
      const double u = x.values[x.index(i, j)];
      const double dx = x.inside(i + 1, j) ? x.values[x.index(i + 1, j)] - u : 0.0;
      const double dy = x.inside(i, j + 1) ? x.values[x.index(i, j + 1)] - u : 0.0;
      tv += anisotropic ? std::fabs(dx) + std::fabs(dy) : std::hypot(dx, dy);
    }
  }
  return tv * x.spacing;
}

double grid_energy_F(const ScalarField& x, const GridProblem& prob) {
  if (!x.same_shape(prob.field) || x.values.size() != x.mask.size())
    fail(ErrorKind::ShapeMismatch, "field does not match the problem grid");
  double mismatch = 0.0;
  for (const auto& e : prob.edges) mismatch += e.weight * std::fabs(x.values[e.cell] - e.sample);
  return grid_tv(x) + mismatch;
}

double grid_pnorm(const ScalarField& x, double p) {
  const double area = x.spacing * x.spacing;
  double s = 0.0;
  for (std::size_t k = 0; k < x.values.size(); ++k) {
    if (x.mask[k]) s += area * std::pow(std::fabs(x.values[k]), p);
  }
  return std::pow(s, 1.0 / p);
}

double grid_energy_G(const ScalarField& x, const GridProblem& prob, double p, double eps) {
  const double F = grid_energy_F(x, prob);
  if (eps == 0.0) return F;
  return std::pow(eps, 1.0 / (2.0 * p)) * grid_pnorm(x, p) + F;
}

namespace {

struct EdgeTerm {
  double a;
  double f;
};

/// argmin_x (x - v)^2 / (2 tau) + sum_e a_e |x - f_e|.
double prox_abs_sum(double v, double tau, const EdgeTerm* terms, std::size_t m) {
  if (m == 0) return v;
  double fs[4];
  double as[4];
  for (std::size_t e = 0; e < m; ++e) {
    fs[e] = terms[e].f;
    as[e] = terms[e].a;
  }
  for (std::size_t e = 1; e < m; ++e) {
    for (std::size_t k = e; k > 0 && fs[k - 1] > fs[k]; --k) {
      std::swap(fs[k - 1], fs[k]);
      std::swap(as[k - 1], as[k]);
    }
  }
  double total = 0.0;
  for (std::size_t e = 0; e < m; ++e) total += as[e];
  // Slope of the penalty on interval k (left of fs[k]) is (below) - (above).
  double below = 0.0;
  for (std::size_t k = 0; k <= m; ++k) {
    const double slope = below - (total - below);
    const double x = v - tau * slope;
    const bool left_ok = k == 0 || x > fs[k - 1];
    const bool right_ok = k == m || x < fs[k];
    if (left_ok && right_ok) return x;
    if (k < m) {
      // Breakpoint fs[k]: subdifferential spans [slope, slope + 2 a_k].
      const double g = (v - fs[k]) / tau;
      if (g >= slope && g <= slope + 2.0 * as[k]) return fs[k];
      below += as[k];
    }
  }
  return v;
}

/// Euclidean projection onto {q : ||q||_r <= radius}, r = p / (p - 1).
class BallProjector {
 public:
  BallProjector(double p, double radius) : p_(p), radius_(radius) {
    if (p_ > 1.0) {
      r_ = p_ / (p_ - 1.0);
      target_ = std::pow(radius_, r_);
    }
  }

  void project(std::vector<double>& q) {
    if (p_ == 1.0) {
      for (double& v : q) v = std::clamp(v, -radius_, radius_);
      return;
    }
    double norm_r = 0.0;
    for (double v : q) norm_r += power(std::fabs(v), r_);
    if (norm_r <= target_) return;
    if (radius_ == 0.0) {
      std::fill(q.begin(), q.end(), 0.0);
      return;
    }
    if (r_ == 2.0) {
      const double s = radius_ / std::sqrt(norm_r);
      for (double& v : q) v *= s;
      return;
    }
    abs_.resize(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) abs_[i] = std::fabs(q[i]);

    // phi(mu) = sum t_i(mu)^r - R^r is decreasing; safeguarded Newton.
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    double mu = mu_ > 0.0 ? mu_ : 1.0;
    for (int it = 0; it < 100; ++it) {
      double phi = -target_;
      double dphi = 0.0;
      for (double a : abs_) {
        const double t = solve_t(a, mu);
        const double tr1 = power(t, r_ - 1.0);
        phi += tr1 * t;
        const double dt = -r_ * tr1 / (1.0 + mu * r_ * (r_ - 1.0) * power(t, r_ - 2.0));
        dphi += r_ * tr1 * dt;
      }
      if (std::fabs(phi) <= 1e-13 * target_) break;
      if (phi > 0.0) lo = mu; else hi = mu;
      double next = dphi < 0.0 ? mu - phi / dphi : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = std::isfinite(hi) ? 0.5 * (lo + hi) : 2.0 * mu + 1.0;
      if (std::fabs(next - mu) <= 1e-15 * mu) {
        mu = next;
        break;
      }
      mu = next;
    }
    mu_ = mu;
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = std::copysign(solve_t(abs_[i], mu), q[i]);
  }

 private:
  double power(double t, double e) const {
    if (r_ == 3.0) {
      if (e == 3.0) return t * t * t;
      if (e == 2.0) return t * t;
      if (e == 1.0) return t;
    }
    return std::pow(t, e);
  }

  /// Root of t + mu r t^(r-1) = a on [0, a].
  double solve_t(double a, double mu) const {
    if (a == 0.0) return 0.0;
    if (r_ == 3.0) return 2.0 * a / (1.0 + std::sqrt(1.0 + 12.0 * mu * a));
    double t = std::min(a, std::pow(a / (mu * r_), 1.0 / (r_ - 1.0)));
    for (int it = 0; it < 60; ++it) {
      const double g = t + mu * r_ * std::pow(t, r_ - 1.0) - a;
      const double dg = 1.0 + mu * r_ * (r_ - 1.0) * std::pow(t, r_ - 2.0);
      const double next = std::max(0.0, t - g / dg);
      if (std::fabs(next - t) <= 1e-16 * a) return next;
      t = next;
    }
    return t;
  }

  double p_;
  double radius_;
  double r_ = 0.0;
  double target_ = 0.0;
  double mu_ = 0.0;
  std::vector<double> abs_;
};

struct Layout {
  std::vector<std::size_t> cells;
  std::vector<long> right, up, left, down;
  std::vector<double> tau;
  std::vector<std::size_t> term_start;
  std::vector<EdgeTerm> terms;

  explicit Layout(const GridProblem& prob) {
    const ScalarField& g = prob.field;
    std::vector<long> slot(g.mask.size(), -1);
    for (std::size_t k = 0; k < g.mask.size(); ++k) {
      if (g.mask[k]) {
        slot[k] = static_cast<long>(cells.size());
        cells.push_back(k);
      }
    }
    const std::size_t n = cells.size();
    right.assign(n, -1);
    up.assign(n, -1);
    left.assign(n, -1);
    down.assign(n, -1);
    for (std::size_t c = 0; c < n; ++c) {
      const int i = static_cast<int>(cells[c] % g.nx);
      const int j = static_cast<int>(cells[c] / g.nx);
      if (g.inside(i + 1, j)) right[c] = slot[g.index(i + 1, j)];
      if (g.inside(i, j + 1)) up[c] = slot[g.index(i, j + 1)];
      if (g.inside(i - 1, j)) left[c] = slot[g.index(i - 1, j)];
      if (g.inside(i, j - 1)) down[c] = slot[g.index(i, j - 1)];
    }
    tau.resize(n);
    for (std::size_t c = 0; c < n; ++c) {
      const int deg = (right[c] >= 0) + (up[c] >= 0) + (left[c] >= 0) + (down[c] >= 0);
      tau[c] = 1.0 / (deg + 1.0);
    }
    std::vector<std::vector<EdgeTerm>> per(n);
    for (const auto& e : prob.edges) per[slot[e.cell]].push_back({e.weight / g.spacing, e.sample});
    term_start.assign(n + 1, 0);
    for (std::size_t c = 0; c < n; ++c) {
      if (per[c].size() > 4) fail(ErrorKind::ShapeMismatch, "a cell has more than four boundary edges");
      term_start[c + 1] = term_start[c] + per[c].size();
      terms.insert(terms.end(), per[c].begin(), per[c].end());
    }
  }
};

struct DualState {
  std::vector<double> yx, yy, q;
};

ScalarField solve(const GridProblem& prob, SolveInfo* info, const ScalarField* start, DualState* dual) {
  prob.validate();
  const Layout lay(prob);
  const std::size_t n = lay.cells.size();
  const double h = prob.field.spacing;

  std::vector<double> u(n, 0.0);
  if (start) {
    if (!start->same_shape(prob.field)) fail(ErrorKind::ShapeMismatch, "warm start does not match the problem grid");
    for (std::size_t c = 0; c < n; ++c) u[c] = start->values[lay.cells[c]];
  }
  DualState local;
  DualState& d = dual ? *dual : local;
  if (d.yx.size() != n) {
    d.yx.assign(n, 0.0);
    d.yy.assign(n, 0.0);
    d.q.assign(n, 0.0);
  }
  const double radius = prob.eps == 0.0 ? 0.0 : std::pow(prob.eps, 1.0 / (2.0 * prob.p)) * std::pow(h, 2.0 / prob.p) / h;
  BallProjector ball(prob.p, radius);

  ScalarField out = prob.field;
  auto to_field = [&](const std::vector<double>& v) {
    std::fill(out.values.begin(), out.values.end(), 0.0);
    for (std::size_t c = 0; c < n; ++c) out.values[lay.cells[c]] = v[c];
    return out;
  };
  auto energy = [&](const std::vector<double>& v) { return grid_energy_G(to_field(v), prob, prob.p, prob.eps); };

  std::vector<double> best = u;
  double best_g = energy(u);
  std::vector<double> next(n), bar(n);
  SolveInfo local_info;
  SolveInfo& inf = info ? *info : local_info;
  inf = SolveInfo{};
  inf.g_trace.push_back(best_g);

  // Primal/dual step balance, adapted from the residual ratio with a
  // geometrically decaying adaptation rate.
  double omega = 1.0;
  double adapt = 0.5;
  std::vector<double> kt_prev(n, 0.0);
  std::vector<double> du_prev(n, 0.0);
  bool have_prev = false;
  double dual_res = 0.0;
  double residual = std::numeric_limits<double>::infinity();
  int it = 0;
  for (it = 1; it <= prob.max_iters; ++it) {
    double diff2 = 0.0;
    double norm2 = 0.0;
    double primal_res = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      double kt = d.q[c];
      if (lay.right[c] >= 0) kt -= d.yx[c];
      if (lay.up[c] >= 0) kt -= d.yy[c];
      if (lay.left[c] >= 0) kt += d.yx[lay.left[c]];
      if (lay.down[c] >= 0) kt += d.yy[lay.down[c]];
      if (have_prev) primal_res += std::fabs(du_prev[c] - (kt_prev[c] - kt));
      kt_prev[c] = kt;
      const double tc = lay.tau[c] / omega;
      const double v = u[c] - tc * kt;
      const std::size_t s = lay.term_start[c];
      next[c] = prox_abs_sum(v, tc, lay.terms.data() + s, lay.term_start[c + 1] - s);
      const double delta = next[c] - u[c];
      diff2 += delta * delta;
      norm2 += next[c] * next[c];
      bar[c] = 2.0 * next[c] - u[c];
      du_prev[c] = -delta / tc;
    }
    if (have_prev && it % 10 == 0 && adapt > 1e-6) {
      if (primal_res > 1.5 * dual_res) {
        omega *= 1.0 - adapt;
        adapt *= 0.98;
      } else if (dual_res > 1.5 * primal_res) {
        omega /= 1.0 - adapt;
        adapt *= 0.98;
      }
    }
    u.swap(next);
    dual_res = 0.0;
    const double sy = 0.5 * omega;
    for (std::size_t c = 0; c < n; ++c) {
      const double gx = lay.right[c] >= 0 ? bar[lay.right[c]] - bar[c] : 0.0;
      const double gy = lay.up[c] >= 0 ? bar[lay.up[c]] - bar[c] : 0.0;
      double yx = d.yx[c] + sy * gx;
      double yy = d.yy[c] + sy * gy;
      const double m = std::hypot(yx, yy);
      if (m > 1.0) {
        yx /= m;
        yy /= m;
      }
      // K(u_new - u_old) = K(bar - u_new).
      const double ex = lay.right[c] >= 0 ? (bar[lay.right[c]] - u[lay.right[c]]) - (bar[c] - u[c]) : 0.0;
      const double ey = lay.up[c] >= 0 ? (bar[lay.up[c]] - u[lay.up[c]]) - (bar[c] - u[c]) : 0.0;
      dual_res += std::fabs((d.yx[c] - yx) / sy + ex) + std::fabs((d.yy[c] - yy) / sy + ey);
      d.yx[c] = yx;
      d.yy[c] = yy;
      next[c] = d.q[c];
      d.q[c] += omega * bar[c];
    }
    ball.project(d.q);
    for (std::size_t c = 0; c < n; ++c) dual_res += std::fabs((next[c] - d.q[c]) / omega + (bar[c] - u[c]));
    have_prev = true;

    residual = std::sqrt(diff2) / std::max(std::sqrt(norm2), 1e-300);
    if (!std::isfinite(residual)) fail(ErrorKind::NonConvergence, "primal-dual iteration diverged");
    const bool done = residual < prob.tol || (norm2 == 0.0 && diff2 == 0.0);
    if (it % 50 == 0 || done) {
      const double g = energy(u);
      if (g < best_g) {
        best_g = g;
        best = u;
      }
      inf.g_trace.push_back(best_g);
    }
    if (done) break;
  }
  inf.iterations = std::min(it, prob.max_iters);
  inf.residual = residual;
  inf.converged = it <= prob.max_iters;
  if (!inf.converged && prob.strict) {
    std::ostringstream msg;
    msg << "no convergence after " << prob.max_iters << " iterations (relative change " << residual << ")";
    fail(ErrorKind::NonConvergence, msg.str());
  }
  return to_field(best);
}

std::string shortest(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

ScalarField minimize_G(const GridProblem& prob, SolveInfo* info, const ScalarField* start) {
  return solve(prob, info, start, nullptr);
}

std::vector<std::size_t> probe_cells(const ScalarField& grid, const std::vector<Point>& polygon, double margin) {
  std::vector<std::size_t> out;
  const double m = margin * grid.spacing;
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      if (!grid.inside(i, j)) continue;
      const Point c = grid.center(i, j);
      bool ok = !polygon.empty();
      for (std::size_t k = 0; k < polygon.size() && ok; ++k) {
        const Point a = polygon[k];
        const Point b = polygon[(k + 1) % polygon.size()];
        ok = cross(b - a, c - a) / norm(b - a) > m;
      }
      if (ok) out.push_back(grid.index(i, j));
    }
  }
  return out;
}

SelectionReport epsilon_sweep(const GridProblem& templ, const std::vector<double>& schedule,
                              const std::vector<Point>& probe) {
  if (schedule.size() < 3) fail(ErrorKind::InvalidInput, "eps schedule needs at least 3 entries");
  for (std::size_t k = 1; k < schedule.size(); ++k) {
    if (!(schedule[k] < schedule[k - 1])) fail(ErrorKind::InvalidInput, "eps schedule must be strictly decreasing");
  }
  SelectionReport report;
  const auto probes = probe_cells(templ.field, probe);
  report.probe_cells = probes.size();
  DualState dual;
  const ScalarField* start = nullptr;
  for (double eps : schedule) {
    GridProblem prob = templ;
    prob.eps = eps;
    SweepStep step;
    step.eps = eps;
    step.field = solve(prob, &step.info, start, &dual);
    step.F = grid_energy_F(step.field, prob);
    step.G = grid_energy_G(step.field, prob, prob.p, eps);
    step.pnorm = grid_pnorm(step.field, prob.p);
    step.lambda_hat = std::numeric_limits<double>::quiet_NaN();
    if (!probes.empty()) {
      double s = 0.0;
      for (std::size_t c : probes) s += step.field.values[c];
      step.lambda_hat = s / static_cast<double>(probes.size());
    }
    report.steps.push_back(std::move(step));
    start = &report.steps.back().field;
  }
  for (std::size_t k = 1; k < report.steps.size(); ++k) {
    const double prev = report.steps[k - 1].F;
    if (report.steps[k].F > prev + kMonotoneTol * std::max(1.0, std::fabs(prev))) report.f_nonincreasing = false;
  }
  const bool nonnegative =
      std::all_of(templ.edges.begin(), templ.edges.end(), [](const BoundaryEdge& e) { return e.sample >= 0.0; });
  if (nonnegative) {
    bool mono = true;
    for (std::size_t k = 1; k < report.steps.size(); ++k) {
      const auto& a = report.steps[k - 1].field;
      const auto& b = report.steps[k].field;
      for (std::size_t c = 0; c < a.values.size(); ++c) {
        if (a.mask[c] && a.values[c] > b.values[c] + kMonotoneTol) mono = false;
      }
    }
    report.pointwise_monotone = mono;
  }
  return report;
}

void write_report_csv(const std::string& path, const SelectionReport& report) {
  std::ostringstream out;
  out << "eps,F,G,pnorm,lambda_hat\n";
  for (const auto& s : report.steps) {
    out << shortest(s.eps) << ',' << shortest(s.F) << ',' << shortest(s.G) << ',' << shortest(s.pnorm) << ','
        << shortest(s.lambda_hat) << '\n';
  }
  write_file_atomic(path, out.str());
}

namespace {

std::string pgm_bytes(int nx, int ny, const std::vector<std::uint8_t>& pixels) {
  std::string out = "P5\n" + std::to_string(nx) + " " + std::to_string(ny) + "\n255\n";
  for (int j = ny - 1; j >= 0; --j)
    out.append(reinterpret_cast<const char*>(pixels.data()) + static_cast<std::size_t>(j) * nx, nx);
  return out;
}

}  // namespace

void write_pgm(const std::string& path, const ScalarField& x) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t k = 0; k < x.values.size(); ++k) {
    if (!x.mask[k]) continue;
    lo = std::min(lo, x.values[k]);
    hi = std::max(hi, x.values[k]);
  }
  std::vector<std::uint8_t> px(x.values.size(), 0);
  for (std::size_t k = 0; k < x.values.size(); ++k) {
    if (!x.mask[k]) continue;
    const double s = hi > lo ? (x.values[k] - lo) / (hi - lo) : 0.5;
    px[k] = static_cast<std::uint8_t>(std::lround(1.0 + 254.0 * s));
  }
  write_file_atomic(path, pgm_bytes(x.nx, x.ny, px));
}

void write_field(const std::string& stem, const ScalarField& x) {
  std::string raw(x.values.size() * sizeof(double), '\0');
  std::memcpy(raw.data(), x.values.data(), raw.size());
  write_file_atomic(stem + ".f64", raw);
  std::vector<std::uint8_t> px(x.mask.size());
  for (std::size_t k = 0; k < px.size(); ++k) px[k] = x.mask[k] ? 255 : 0;
  const std::string mask_name = std::filesystem::path(stem).filename().string() + ".mask.pgm";
  write_file_atomic(stem + ".mask.pgm", pgm_bytes(x.nx, x.ny, px));
  nlohmann::ordered_json side;
  side["mask_file"] = mask_name;
  side["nx"] = x.nx;
  side["ny"] = x.ny;
  side["origin"] = {x.origin.x, x.origin.y};
  side["spacing"] = x.spacing;
  write_file_atomic(stem + ".json", side.dump(2) + "\n");
}

ScalarField read_field(const std::string& stem) {
  const auto side = nlohmann::json::parse(read_file(stem + ".json"));
  ScalarField x;
  x.nx = side.at("nx").get<int>();
  x.ny = side.at("ny").get<int>();
  x.spacing = side.at("spacing").get<double>();
  x.origin = {side.at("origin").at(0).get<double>(), side.at("origin").at(1).get<double>()};
  const std::size_t cells = static_cast<std::size_t>(x.nx) * x.ny;
  const std::string raw = read_file(stem + ".f64");
  if (raw.size() != cells * sizeof(double)) fail(ErrorKind::ShapeMismatch, "field file size does not match its sidecar");
  x.values.resize(cells);
  std::memcpy(x.values.data(), raw.data(), raw.size());

  const auto mask_path = std::filesystem::path(stem).parent_path() / side.at("mask_file").get<std::string>();
  const std::string pgm = read_file(mask_path.string());
  std::istringstream in(pgm);
  std::string magic;
  int w = 0, hgt = 0, maxv = 0;
  in >> magic >> w >> hgt >> maxv;
  in.get();
  if (magic != "P5" || w != x.nx || hgt != x.ny) fail(ErrorKind::ShapeMismatch, "mask image does not match the sidecar");
  const std::size_t offset = static_cast<std::size_t>(in.tellg());
  if (pgm.size() < offset + cells) fail(ErrorKind::ShapeMismatch, "mask image is truncated");
  x.mask.resize(cells);
  for (int j = 0; j < x.ny; ++j) {
    for (int i = 0; i < x.nx; ++i) {
      const auto byte = static_cast<unsigned char>(pgm[offset + static_cast<std::size_t>(x.ny - 1 - j) * x.nx + i]);
      x.mask[x.index(i, j)] = byte > 127 ? 1 : 0;
    }
  }
  return x;
}

}  // namespace lgp

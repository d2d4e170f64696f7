#include "jst/measures.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include "jst/enclosure.hpp"
#include "jst/errors.hpp"
#include "jst/region.hpp"

namespace jst {

double st_cdf(double u) {
  u = std::clamp(u, -2.0, 2.0);
  return 0.5 + ((u / 2) * std::sqrt(4 - u * u) + 2 * std::asin(u / 2)) / (2 * std::numbers::pi);
}

double sin2_weight(double a, double b) {
  return ((b - a) - std::sin(b - a) * std::cos(a + b)) / std::numbers::pi;
}

MeasureValue mu_st(const Interval& interval) {
  const double lo = std::max(interval.lo, -2.0), hi = std::min(interval.hi, 2.0);
  if (!(lo < hi)) return {0, 0};
  return {std::clamp(st_cdf(hi) - st_cdf(lo), 0.0, 1.0), 0};
}

MeasureValue mu_jst_rect(const Interval& first, const Interval& second) {
  return {mu_st(first).value * mu_st(second).value, 0};
}

double d_ell(int ell) {
  if (ell < 1) throw DomainError("d_ell needs l >= 1, got " + std::to_string(ell));
  if (ell % 2) return 0.5;
  const double l = ell;
  return (l + 2) / (2 * (l + 1)) - std::tan(std::numbers::pi / (l + 1)) / (2 * std::numbers::pi);
}

double d_mn(int m, int n) {
  if (m < 0 || n < 0) throw DomainError("d_mn needs nonnegative indices");
  if (m == 0 && n == 0) throw DomainError("d_mn is undefined at (0, 0)");
  if (m == 0) return d_ell(n);
  if (n == 0) return d_ell(m);
  if (m % 2 || n % 2) return 0.5;
  const double pi = std::numbers::pi;
  const double x = pi / (m + 1), y = pi / (n + 1);
  return 0.5 + (std::tan(x) - x) * (std::tan(y) - y) / (2 * pi * pi);
}

namespace {

struct Cell {
  double t0, t1, p0, p1;
  double lo = 0, hi = 0;  // bracket for mu_JST(E ∩ cell)
  std::uint64_t id = 0;
  double width() const { return hi - lo; }
};

struct WiderFirst {
  bool operator()(const Cell& a, const Cell& b) const {
    if (a.width() != b.width()) return a.width() < b.width();
    return a.id > b.id;
  }
};

double sinc(double x) { return std::fabs(x) < 1e-4 ? 1 - x * x / 6 : std::sin(x) / x; }

// Measure (4/pi^2) sin^2(x) sin^2(y) of {a <= x <= b, y(x) <= y <= top}, where y runs
// linearly from ya to yb. With x = m + t, |t| <= h, every piece is an integral of
// sin(ct + d) over a symmetric range, written with sinc so thin cells do not cancel.
double above_line(double a, double b, double ya, double yb, double top) {
  const double m = (a + b) / 2, h = (b - a) / 2;
  const double ym = (ya + yb) / 2, alpha = (yb - ya) / (b - a);
  // (2/pi) * int_y^top sin^2 = (1/pi) (K - y + sin(2y)/2)
  const double K = top - std::sin(2 * top) / 2;
  const double s0 = h * (1 - std::cos(2 * m) * sinc(2 * h));                              // int sin^2
  const double m1 = std::sin(2 * m) * (std::sin(2 * h) / 2 - h * std::cos(2 * h)) / 2;  // int t sin^2
  const double tt = h * std::sin(2 * ym) * sinc(2 * alpha * h) -
                    h / 2 *
                        (std::sin(2 * ym + 2 * m) * sinc((2 * alpha + 2) * h) +
                         std::sin(2 * ym - 2 * m) * sinc((2 * alpha - 2) * h));  // int sin^2 sin(2y)
  const double pi = std::numbers::pi;
  return 2 / (pi * pi) * ((K - ym) * s0 - alpha * m1 + tt / 2);
}

// y = y_ref + slope (x - x_ref); an infinite y_ref is a missing bound.
struct Line {
  double x_ref, y_ref, slope;
  double operator()(double x) const { return std::isinf(y_ref) ? y_ref : y_ref + slope * (x - x_ref); }
  double hits(double y) const {
    return std::isinf(y_ref) || slope == 0 ? std::numeric_limits<double>::quiet_NaN() : x_ref + (y - y_ref) / slope;
  }
  double meets(const Line& o) const {
    if (std::isinf(y_ref) || std::isinf(o.y_ref) || slope == o.slope) return std::numeric_limits<double>::quiet_NaN();
    return (o.y_ref - y_ref + slope * x_ref - o.slope * o.x_ref) / (slope - o.slope);
  }
};

// Bracket for the measure of {sign * (P - bound) >= 0} in a cell where the
// boundary is a graph over one axis. `axis` 0: root in phi as a function of
// theta; axis 1: root in theta as a function of phi.
class GraphBracket {
 public:
  GraphBracket(const RegionEvaluator& eval, std::size_t index, int sign)
      : eval_(eval), index_(index), sign_(sign) {}

  // 0 if |g_phi| dominates |g_theta| over the cell (solve for phi), else 1.
  int steeper_axis(const Cell& c) const {
    const Enclosure U = two_cos(c.t0, c.t1), V = two_cos(c.p0, c.p1);
    const Enclosure gt = sin_range(c.t0, c.t1) * eval_.du(index_, U, V);
    const Enclosure gp = sin_range(c.p0, c.p1) * eval_.dv(index_, U, V);
    auto mig = [](Enclosure e) { return e.contains_zero() ? 0.0 : std::min(std::fabs(e.lo), std::fabs(e.hi)); };
    return mig(gp) >= mig(gt) ? 0 : 1;
  }

  bool run(const Cell& c, int axis, double& lo, double& hi) const {
    // free axis x in [x0, x1], root axis y in [y0, y1]
    const double x0 = axis == 0 ? c.t0 : c.p0, x1 = axis == 0 ? c.t1 : c.p1;
    const double y0 = axis == 0 ? c.p0 : c.t0, y1 = axis == 0 ? c.p1 : c.t1;
    const Enclosure U = two_cos(c.t0, c.t1), V = two_cos(c.p0, c.p1);
    const Enclosure st = sin_range(c.t0, c.t1), sp = sin_range(c.p0, c.p1);

    // g(theta, phi) = sign * (P(2cos theta, 2cos phi) - bound);
    // g_theta = -2 sin(theta) sign P_u, g_phi = -2 sin(phi) sign P_v.
    const Enclosure pu = eval_.du(index_, U, V), pv = eval_.dv(index_, U, V);
    const Enclosure dy = axis == 0 ? pv : pu;  // derivative factor along the root axis
    const Enclosure sy = axis == 0 ? sp : st;
    if (dy.contains_zero() || sy.lo <= 0) return false;
    // sign of dg/dy: -sign * sign(dy)
    const int dir = (dy.lo > 0 ? -1 : 1) * sign_;

    const Enclosure slope = -((axis == 0 ? st : sp) * (axis == 0 ? pu : pv)) / (sy * dy);

    double r0lo, r0hi, r1lo, r1hi;
    root_bracket(axis, x0, y0, y1, dir, r0lo, r0hi);
    root_bracket(axis, x1, y0, y1, dir, r1lo, r1hi);
    if (!std::isfinite(slope.lo) || !std::isfinite(slope.hi)) return false;
    // A root pinned to an edge of the cell may continue past it; that side is unbounded.
    // The clamped root is continuous and moves with slope in `slope` while interior,
    // so cones from these one-sided starts, clamped to [y0, y1], still enclose it.
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (r0lo == y0) r0lo = -inf;
    if (r0hi == y1) r0hi = inf;
    if (r1lo == y0) r1lo = -inf;
    if (r1hi == y1) r1hi = inf;

    // Envelopes of the clamped root: forward cone from x0, backward cone from x1.
    const Line fwd_lo{x0, r0lo, slope.lo}, fwd_hi{x0, r0hi, slope.hi};
    const Line bwd_lo{x1, r1lo, slope.hi}, bwd_hi{x1, r1hi, slope.lo};
    // Envelope values at the ends of a piece on which it is linear. The active branch is
    // picked at the midpoint, because a knot rounded onto a piece end makes steep lines
    // ill-conditioned to evaluate there.
    auto piece = [&](const Line& p, const Line& q, bool take_max, double a, double b, double& ya, double& yb) {
      const double mid = a + (b - a) / 2;
      const double vp = p(mid), vq = q(mid);
      const Line& l = (take_max ? vp >= vq : vp <= vq) ? p : q;
      const double v = take_max ? std::max(vp, vq) : std::min(vp, vq);
      if (v >= y1 || v <= y0) {
        ya = yb = v >= y1 ? y1 : y0;
        return v;
      }
      ya = std::clamp(l(a), y0, y1);
      yb = std::clamp(l(b), y0, y1);
      return v;
    };

    // Both envelopes are linear between these points.
    std::vector<double> knots{x0, x1};
    for (const Line* l : {&fwd_lo, &fwd_hi, &bwd_lo, &bwd_hi}) {
      knots.push_back(l->hits(y0));
      knots.push_back(l->hits(y1));
    }
    knots.push_back(fwd_lo.meets(bwd_lo));
    knots.push_back(fwd_hi.meets(bwd_hi));
    std::erase_if(knots, [&](double k) { return !(k >= x0 && k <= x1); });
    std::sort(knots.begin(), knots.end());

    long double under_hi = 0, under_lo = 0;  // measure of {y >= upper} and {y >= lower}
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
      const double a = knots[i], b = knots[i + 1];
      if (!(a < b)) continue;
      double la, lb, ua, ub;
      const double lm = piece(fwd_lo, bwd_lo, true, a, b, la, lb);
      const double um = piece(fwd_hi, bwd_hi, false, a, b, ua, ub);
      if (lm > um) return false;
      under_hi += above_line(a, b, ua, ub, y1);
      under_lo += above_line(a, b, la, lb, y1);
    }
    const double full = sin2_weight(x0, x1) * sin2_weight(y0, y1);
    // closed forms carry a few ulps of rounding
    const double pad = 1e-14 * full;
    double sum_lo, sum_hi;
    if (dir > 0) {  // set is y >= root
      sum_lo = static_cast<double>(under_hi) - pad;
      sum_hi = static_cast<double>(under_lo) + pad;
    } else {  // set is y <= root
      sum_lo = full - static_cast<double>(under_lo) - pad;
      sum_hi = full - static_cast<double>(under_hi) + pad;
    }
    lo = sum_lo;
    hi = sum_hi;
    return true;
  }

 private:
  // Sign of g at a point, or 0 when undecided.
  int point_sign(int axis, double x, double y) const {
    const double t = axis == 0 ? x : y, p = axis == 0 ? y : x;
    Enclosure e = eval_.value(index_, two_cos(t, t), two_cos(p, p));
    if (sign_ < 0) e = -e;
    if (e.lo > 0) return 1;
    if (e.hi < 0) return -1;
    return 0;
  }

  // Clamped root of y -> g(x, y), monotone with direction dir, bracketed in [rlo, rhi].
  void root_bracket(int axis, double x, double y0, double y1, int dir, double& rlo, double& rhi) const {
    const int s0 = point_sign(axis, x, y0) * dir, s1 = point_sign(axis, x, y1) * dir;
    // after multiplying by dir the function is increasing in y
    if (s0 > 0) {
      rlo = rhi = y0;
      return;
    }
    if (s1 < 0) {
      rlo = rhi = y1;
      return;
    }
    double a = y0, b = y1;
    const double tol = 1e-6 * (y1 - y0);
    for (int it = 0; it < 60 && b - a > tol; ++it) {
      const double mid = a + (b - a) / 2;
      const int s = point_sign(axis, x, mid) * dir;
      if (s < 0) a = mid;
      else if (s > 0) b = mid;
      else break;
    }
    rlo = a;
    rhi = b;
  }

  const RegionEvaluator& eval_;
  std::size_t index_;
  int sign_;
};

class Quadrature {
 public:
  Quadrature(const PolynomialRegion& region, const QuadratureOptions& options)
      : region_(region), eval_(region), options_(options) {}

  QuadratureResult run() {
    constexpr int kInitial = 8;
    const double step = std::numbers::pi / kInitial;
    for (int i = 0; i < kInitial; ++i) {
      for (int j = 0; j < kInitial; ++j) {
        const double t0 = step * i, t1 = i + 1 == kInitial ? std::numbers::pi : step * (i + 1);
        const double p0 = step * j, p1 = j + 1 == kInitial ? std::numbers::pi : step * (j + 1);
        add(Cell{t0, t1, p0, p1});
      }
    }
    bool exhausted = false;
    for (;;) {
      if (open_width_ / 2 <= options_.target_abs_error) break;
      if (queue_.empty()) break;
      if (cells_ + 4 > options_.max_cells) {
        exhausted = true;
        break;
      }
      Cell c = queue_.top();
      queue_.pop();
      sum_lo_ -= c.lo;
      open_width_ -= c.width();
      if (c.t1 - c.t0 < 1e-12 || c.p1 - c.p0 < 1e-12) {
        stuck_.push_back(c);
        sum_lo_ += c.lo;
        open_width_ += c.width();
        continue;
      }
      const double tm = c.t0 + (c.t1 - c.t0) / 2, pm = c.p0 + (c.p1 - c.p0) / 2;
      add(Cell{c.t0, tm, c.p0, pm});
      add(Cell{tm, c.t1, c.p0, pm});
      add(Cell{c.t0, tm, pm, c.p1});
      add(Cell{tm, c.t1, pm, c.p1});
    }
    recompute();
    QuadratureResult r;
    r.lower = std::clamp(static_cast<double>(sum_lo_), 0.0, 1.0);
    r.upper = std::clamp(static_cast<double>(sum_lo_ + open_width_), 0.0, 1.0);
    r.measure = {(r.lower + r.upper) / 2, (r.upper - r.lower) / 2};
    r.cells = cells_;
    r.converged = !exhausted && r.measure.abs_error <= options_.target_abs_error;
    return r;
  }

 private:
  void add(Cell c) {
    c.id = cells_++;
    const double w = sin2_weight(c.t0, c.t1) * sin2_weight(c.p0, c.p1);
    classify(c, w);
    if (c.width() <= 0) {
      decided_lo_ += c.lo;
      sum_lo_ += c.lo;
      return;
    }
    sum_lo_ += c.lo;
    open_width_ += c.width();
    queue_.push(c);
  }

  void classify(Cell& c, double w) {
    const Enclosure U = two_cos(c.t0, c.t1), V = two_cos(c.p0, c.p1);
    const Truth t = eval_.classify(U, V, false, truths_);
    if (t == Truth::True) {
      c.lo = c.hi = w;
      return;
    }
    if (t == Truth::False) {
      c.lo = c.hi = 0;
      return;
    }
    c.lo = 0;
    c.hi = w;
    // One undecided constraint that alone settles the tree admits a graph bracket.
    std::size_t pivot = truths_.size();
    for (std::size_t i = 0; i < truths_.size(); ++i) {
      if (truths_[i] != Truth::Unknown) continue;
      if (pivot != truths_.size()) return;
      pivot = i;
    }
    if (pivot == truths_.size()) return;
    truths_[pivot] = Truth::True;
    const Truth if_true = evaluate(region_.root(), truths_);
    truths_[pivot] = Truth::False;
    const Truth if_false = evaluate(region_.root(), truths_);
    if (if_true == if_false || if_true == Truth::Unknown || if_false == Truth::Unknown) return;
    // The region inside the cell is {constraint holds} or its complement, up to null sets.
    int sign = eval_.wants_positive(pivot) ? 1 : -1;
    if (if_true == Truth::False) sign = -sign;
    GraphBracket g(eval_, pivot, sign);
    // Solve for the coordinate along which the constraint changes fastest.
    const int first = g.steeper_axis(c);
    double lo = 0, hi = w;
    if (!g.run(c, first, lo, hi) && !g.run(c, 1 - first, lo, hi)) return;
    const double best_lo = std::max(0.0, lo), best_hi = std::min(w, hi);
    c.lo = best_lo;
    c.hi = std::max(best_lo, best_hi);
  }

  void recompute() {
    // Fresh sums in cell order; the running totals only steer refinement.
    std::vector<Cell> open;
    open.reserve(queue_.size());
    auto copy = queue_;
    while (!copy.empty()) {
      open.push_back(copy.top());
      copy.pop();
    }
    std::sort(open.begin(), open.end(), [](const Cell& a, const Cell& b) { return a.id < b.id; });
    long double lo = decided_lo_, width = 0;
    for (const auto& c : open) {
      lo += c.lo;
      width += c.width();
    }
    for (const auto& c : stuck_) {
      lo += c.lo;
      width += c.width();
    }
    sum_lo_ = lo;
    open_width_ = width;
  }

  const PolynomialRegion& region_;
  RegionEvaluator eval_;
  QuadratureOptions options_;
  std::priority_queue<Cell, std::vector<Cell>, WiderFirst> queue_;
  std::vector<Cell> stuck_;
  std::vector<Truth> truths_;
  std::size_t cells_ = 0;
  long double decided_lo_ = 0;
  long double sum_lo_ = 0;
  long double open_width_ = 0;
};

}  // namespace

QuadratureResult mu_jst_region_bracket(const PolynomialRegion& region, const QuadratureOptions& options) {
  return Quadrature(region, options).run();
}

MeasureValue mu_jst_region(const PolynomialRegion& region, double target_abs_error, std::size_t max_cells) {
  if (!(target_abs_error >= 1e-8)) {
    throw DomainError("mu_jst_region target must be >= 1e-8, got " + std::to_string(target_abs_error));
  }
  QuadratureOptions options;
  options.target_abs_error = target_abs_error;
  options.max_cells = max_cells;
  auto r = mu_jst_region_bracket(region, options);
  if (!r.converged) {
    throw BudgetError("mu_jst_region: " + std::to_string(r.cells) + " cells reached the budget with error " +
                      std::to_string(r.measure.abs_error) + " above the target " +
                      std::to_string(target_abs_error));
  }
  return r.measure;
}

}  // namespace jst

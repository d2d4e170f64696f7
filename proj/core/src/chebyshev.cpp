#include "jst/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "jst/coeffs.hpp"
#include "jst/errors.hpp"

namespace jst {
namespace {

void check_degree(int m) {
  if (m < 0) throw DomainError("Chebyshev degree must be nonnegative, got " + std::to_string(m));
  if (m > kMaxChebyshevDegree) {
    throw CapError("Chebyshev degree " + std::to_string(m) + " exceeds the cap " +
                   std::to_string(kMaxChebyshevDegree));
  }
}

}  // namespace

ChebyshevU u_poly(int m) {
  check_degree(m);
  std::vector<wide_int> prev{1};
  if (m == 0) return {0, prev};
  std::vector<wide_int> cur{0, 2};
  for (int k = 1; k < m; ++k) {
    std::vector<wide_int> next(cur.size() + 1, 0);
    for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] += 2 * cur[i];
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= prev[i];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return {m, cur};
}

std::vector<wide_int> u_poly_half(int m) {
  check_degree(m);
  std::vector<wide_int> out(static_cast<std::size_t>(m) + 1, 0);
  for (int j = 0; 2 * j <= m; ++j) {
    // C(m-j, j) by the multiplicative formula, exact at every step
    wide_int binom = 1;
    for (int i = 1; i <= j; ++i) binom = binom * (m - 2 * j + i) / i;
    out[static_cast<std::size_t>(m - 2 * j)] = (j % 2) ? -binom : binom;
  }
  return out;
}

double eval_u(int m, double u) {
  check_degree(m);
  if (m == 0) return 1.0;
  double prev = 1.0, cur = 2.0 * u;
  for (int k = 1; k < m; ++k) {
    double next = 2.0 * u * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

namespace {

// (X, X', X'') at u in long double, for locating critical points.
void jet_approx(int m, long double u, long double& x, long double& dx, long double& ddx) {
  long double x0 = 1, d0 = 0, s0 = 0;
  if (m == 0) {
    x = 1, dx = 0, ddx = 0;
    return;
  }
  long double x1 = u, d1 = 1, s1 = 0;
  for (int k = 1; k < m; ++k) {
    const long double x2 = u * x1 - x0, d2 = x1 + u * d1 - d0, s2 = 2 * d1 + u * s1 - s0;
    x0 = x1, d0 = d1, s0 = s1;
    x1 = x2, d1 = d2, s1 = s2;
  }
  x = x1, dx = d1, ddx = s1;
}

// The single zero of f in (a, b), given that f changes sign there.
template <class F>
double bisect_zero(F f, long double a, long double b) {
  const bool rising = f(a) < 0;
  for (int it = 0; it < 200 && b - a > 0; ++it) {
    const long double mid = a + (b - a) / 2;
    if (mid <= a || mid >= b) break;
    if ((f(mid) < 0) == rising) a = mid;
    else b = mid;
  }
  return static_cast<double>(a + (b - a) / 2);
}

// Zeros of f strictly inside consecutive pairs of `nodes`.
template <class F>
std::vector<double> interlaced_zeros(F f, const std::vector<long double>& nodes) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) out.push_back(bisect_zero(f, nodes[i], nodes[i + 1]));
  return out;
}

}  // namespace

HalfChebyshevRange::HalfChebyshevRange(int m) : m_(m) {
  check_degree(m);
  std::vector<long double> zeros;
  for (int k = m; k >= 1; --k) zeros.push_back(2 * std::cos(std::numbers::pi_v<long double> * k / (m + 1)));
  auto dx = [m](long double u) {
    long double x, d, s;
    jet_approx(m, u, x, d, s);
    return d;
  };
  auto ddx = [m](long double u) {
    long double x, d, s;
    jet_approx(m, u, x, d, s);
    return s;
  };
  critical_ = interlaced_zeros(dx, zeros);
  std::vector<long double> nodes(critical_.begin(), critical_.end());
  slope_critical_ = interlaced_zeros(ddx, nodes);
}

HalfChebyshevRange::Jet HalfChebyshevRange::jet(double u) const {
  if (m_ == 0) return {Enclosure(1.0), Enclosure(0.0), Enclosure(0.0)};
  // Interval arithmetic through the recurrence inflates widths like (1+sqrt 2)^m, so
  // run it in doubles and bound the error instead. The recurrence is linear with
  // solutions bounded by (k+1) on [-2, 2], so a local error d_j reaches the end scaled
  // by at most m+1; X' and X'' also inherit the error of their forcing terms.
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double x0 = 1, d0 = 0, s0 = 0, x1 = u, d1 = 1, s1 = 0;
  double lx = 0, ld = 0, ls = 0;  // sums of local rounding errors
  for (int k = 1; k < m_; ++k) {
    const double x2 = u * x1 - x0, d2 = x1 + u * d1 - d0, s2 = 2 * d1 + u * s1 - s0;
    lx += 2 * eps * (std::fabs(u * x1) + std::fabs(x0));
    ld += 3 * eps * (std::fabs(x1) + std::fabs(u * d1) + std::fabs(d0));
    ls += 3 * eps * (std::fabs(2 * d1) + std::fabs(u * s1) + std::fabs(s0));
    x0 = x1, d0 = d1, s0 = s1;
    x1 = x2, d1 = d2, s1 = s2;
  }
  const double grow = m_ + 1.0;
  const double ex = grow * lx * (1 + 1e-6);
  const double ed = grow * (ld + m_ * ex) * (1 + 1e-6);
  const double es = grow * (ls + 2 * m_ * ed) * (1 + 1e-6);
  auto widen = [](double v, double e) { return Enclosure(round_down(v - e), round_up(v + e)); };
  return {widen(x1, ex), widen(d1, ed), widen(s1, es)};
}

Enclosure HalfChebyshevRange::range(Enclosure u, const std::vector<double>& critical, bool derivative) const {
  auto pick = [&](double at) {
    const Jet j = jet(at);
    return derivative ? j.dx : j.x;
  };
  Enclosure out = hull(pick(u.lo), pick(u.hi));
  // Critical points carry long-double bisection error; the extremum moves only
  // quadratically with it, so a slightly outside node and a small pad suffice.
  constexpr double slack = 1e-12;
  auto first = std::lower_bound(critical.begin(), critical.end(), u.lo - slack);
  bool touched = false;
  for (auto it = first; it != critical.end() && *it <= u.hi + slack; ++it) {
    out = hull(out, pick(*it));
    touched = true;
  }
  if (touched) out = out + Enclosure(-1e-13, 1e-13);
  return out;
}

Enclosure HalfChebyshevRange::value(Enclosure u) const { return range(u, critical_, false); }

Enclosure HalfChebyshevRange::derivative(Enclosure u) const { return range(u, slope_critical_, true); }

double sympower_coeff(const CoefficientTable& table, std::uint64_t p, int m) {
  if (table.level() % static_cast<std::int64_t>(p) == 0) {
    throw BadPrimeError("p = " + std::to_string(p) + " divides the level " +
                        std::to_string(table.level()) + " of " + table.descriptor().label);
  }
  return eval_u(m, normalized_prime_value(table, p) / 2.0);
}

}  // namespace jst

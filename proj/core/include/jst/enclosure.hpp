#pragma once

// Closed real intervals with outward rounding. Every operation computes the
// round-to-nearest result and then steps one ulp outward, which contains the
// exact result because a correctly rounded operation is off by at most half an ulp.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cmath>
#include <limits>

namespace jst {

// Next representable double, stepping the IEEE bit pattern (libm nextafter is far slower).
inline double round_up(double x) {
  if (!(x < std::numeric_limits<double>::infinity())) return x;  // +inf, NaN
  if (x == 0) return std::numeric_limits<double>::denorm_min();
  auto bits = std::bit_cast<std::uint64_t>(x);
  bits = x > 0 ? bits + 1 : bits - 1;
  return std::bit_cast<double>(bits);
}
inline double round_down(double x) { return -round_up(-x); }

struct Enclosure {
  double lo = 0;
  double hi = 0;

  constexpr Enclosure() = default;
  constexpr Enclosure(double point) : lo(point), hi(point) {}
  constexpr Enclosure(double l, double h) : lo(l), hi(h) {}

  /// The double nearest to x, widened so it certainly contains x's true value.
  static Enclosure around(double x) { return {round_down(x), round_up(x)}; }

  double mid() const { return lo + (hi - lo) / 2; }
  double width() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool contains_zero() const { return lo <= 0 && 0 <= hi; }
  bool positive() const { return lo > 0; }
  bool negative() const { return hi < 0; }
  bool nonnegative() const { return lo >= 0; }
  bool nonpositive() const { return hi <= 0; }
};

inline Enclosure operator+(Enclosure a, Enclosure b) {
  return {round_down(a.lo + b.lo), round_up(a.hi + b.hi)};
}
inline Enclosure operator-(Enclosure a) { return {-a.hi, -a.lo}; }
inline Enclosure operator-(Enclosure a, Enclosure b) {
  return {round_down(a.lo - b.hi), round_up(a.hi - b.lo)};
}
inline Enclosure operator*(Enclosure a, Enclosure b) {
  if (a.lo == a.hi && a.lo == 0) return {0, 0};
  if (b.lo == b.hi && b.lo == 0) return {0, 0};
  const double p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
  return {round_down(std::min({p1, p2, p3, p4})), round_up(std::max({p1, p2, p3, p4}))};
}
/// Requires 0 outside b; callers check.
inline Enclosure operator/(Enclosure a, Enclosure b) {
  const double q1 = a.lo / b.lo, q2 = a.lo / b.hi, q3 = a.hi / b.lo, q4 = a.hi / b.hi;
  return {round_down(std::min({q1, q2, q3, q4})), round_up(std::max({q1, q2, q3, q4}))};
}

inline Enclosure hull(Enclosure a, Enclosure b) { return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)}; }

/// Intersection; callers must know both contain a common value.
inline Enclosure intersect(Enclosure a, Enclosure b) { return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)}; }

/// 2cos(t) over [t0, t1] within [0, pi]; cos is decreasing there.
inline Enclosure two_cos(double t0, double t1) {
  // libm cos is faithful to about 1 ulp; two steps outward cover it.
  const double a = 2 * std::cos(t1), b = 2 * std::cos(t0);
  return {std::max(-2.0, round_down(round_down(a))), std::min(2.0, round_up(round_up(b)))};
}

/// sin over [t0, t1] within [0, pi].
inline Enclosure sin_range(double t0, double t1) {
  constexpr double half_pi = 1.5707963267948966;
  const double s0 = std::sin(t0), s1 = std::sin(t1);
  double lo = std::min(s0, s1), hi = std::max(s0, s1);
  if (t0 <= half_pi && half_pi <= t1) hi = 1;
  return {std::max(0.0, round_down(round_down(lo))), std::min(1.0, round_up(round_up(hi)))};
}

}  // namespace jst

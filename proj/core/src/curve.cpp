#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <cmath>
#include <vector>

#include "jst/errors.hpp"
#include "jst/region.hpp"

namespace jst {
namespace {

using boost::multiprecision::cpp_rational;
using RPoly = std::vector<cpp_rational>;  // lowest degree first

cpp_rational to_rational(wide_int v) {
  // cpp_int has no __int128 constructor on every Boost; go through two 64-bit halves.
  const bool neg = v < 0;
  unsigned __int128 mag = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  boost::multiprecision::cpp_int r = static_cast<std::uint64_t>(mag >> 64);
  r <<= 64;
  r += static_cast<std::uint64_t>(mag);
  return neg ? cpp_rational(-r) : cpp_rational(r);
}

void trim(RPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

RPoly derivative(const RPoly& p) {
  RPoly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<int>(i));
  trim(d);
  return d;
}

RPoly remainder(RPoly a, const RPoly& b) {
  trim(a);
  while (a.size() >= b.size() && !a.empty()) {
    const cpp_rational f = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= f * b[i];
    a.pop_back();
    trim(a);
  }
  return a;
}

cpp_rational eval(const RPoly& p, const cpp_rational& x) {
  cpp_rational r = 0;
  for (std::size_t i = p.size(); i-- > 0;) r = r * x + p[i];
  return r;
}

int variations(const std::vector<RPoly>& chain, const cpp_rational& x) {
  int count = 0, last = 0;
  for (const auto& p : chain) {
    const cpp_rational v = eval(p, x);
    const int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

// Distinct real roots in [-2, 2] by a Sturm chain.
int roots_in_square(const std::vector<wide_int>& coeffs) {
  RPoly p;
  for (auto c : coeffs) p.push_back(to_rational(c));
  trim(p);
  if (p.size() <= 1) return 0;
  std::vector<RPoly> chain{p, derivative(p)};
  while (chain.back().size() > 1) {
    RPoly r = remainder(chain[chain.size() - 2], chain.back());
    if (r.empty()) break;
    for (auto& c : r) c = -c;
    chain.push_back(std::move(r));
  }
  const cpp_rational a = -2, b = 2;
  int count = variations(chain, a) - variations(chain, b);
  if (eval(p, a) == 0) ++count;
  return count;
}

// Marching-squares polyline length at resolution r (cells per side).
double marching_length(const PolyEnclosure& f, double level, std::size_t r) {
  const double h = 4.0 / static_cast<double>(r);
  auto coord = [&](std::size_t i) { return i == r ? 2.0 : -2.0 + h * static_cast<double>(i); };
  auto value = [&](double u, double v) { return f.approx(u, v) - level; };
  auto positive = [](double x) { return x >= 0; };

  // Crossing on the segment from (u0,v0) to (u1,v1), endpoints of opposite sign.
  auto crossing = [&](double u0, double v0, double u1, double v1, bool pos0) {
    double a = 0, b = 1;
    for (int it = 0; it < 60; ++it) {
      const double t = (a + b) / 2;
      if (positive(value(u0 + (u1 - u0) * t, v0 + (v1 - v0) * t)) == pos0) a = t;
      else b = t;
      if (b - a < 1e-15) break;
    }
    const double t = (a + b) / 2;
    return std::pair<double, double>{u0 + (u1 - u0) * t, v0 + (v1 - v0) * t};
  };

  std::vector<double> below(r + 1), above(r + 1);
  for (std::size_t i = 0; i <= r; ++i) below[i] = value(coord(i), -2.0);
  double total = 0;
  for (std::size_t j = 0; j < r; ++j) {
    const double v0 = coord(j), v1 = coord(j + 1);
    for (std::size_t i = 0; i <= r; ++i) above[i] = value(coord(i), v1);
    for (std::size_t i = 0; i < r; ++i) {
      const double u0 = coord(i), u1 = coord(i + 1);
      const bool s00 = positive(below[i]), s10 = positive(below[i + 1]);
      const bool s01 = positive(above[i]), s11 = positive(above[i + 1]);
      std::pair<double, double> pts[4];
      int n = 0;
      // edge order: bottom, right, top, left
      if (s00 != s10) pts[n++] = crossing(u0, v0, u1, v0, s00);
      if (s10 != s11) pts[n++] = crossing(u1, v0, u1, v1, s10);
      if (s11 != s01) pts[n++] = crossing(u1, v1, u0, v1, s11);
      if (s01 != s00) pts[n++] = crossing(u0, v1, u0, v0, s01);
      auto seg = [&](int a, int b) { return std::hypot(pts[a].first - pts[b].first, pts[a].second - pts[b].second); };
      if (n == 2) {
        total += seg(0, 1);
      } else if (n == 4) {
        // Saddle: pair crossings according to the sign at the centre.
        const bool centre = positive(value((u0 + u1) / 2, (v0 + v1) / 2));
        if (centre == s00) total += seg(0, 1) + seg(2, 3);
        else total += seg(0, 3) + seg(1, 2);
      }
    }
    std::swap(below, above);
  }
  return total;
}

constexpr std::size_t kStartResolution = 64;
constexpr std::size_t kMaxResolution = 8192;
constexpr double kSafety = 1.01;

}  // namespace

double curve_length(const Poly2& poly, double level) {
  if (poly.is_constant()) throw DomainError("curve_length needs a non-constant polynomial");
  Poly2 shifted = poly;
  if (level != 0) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, level);
    Rational r = parse_rational(std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)));
    shifted = poly - Poly2::constant(r.num, r.den);
  }
  std::vector<wide_int> a, b;
  if (shifted.separable(a, b)) {
    return kSafety * 4.0 * (roots_in_square(a) + roots_in_square(b));
  }

  const PolyEnclosure f(poly);
  double prev = marching_length(f, level, kStartResolution);
  for (std::size_t r = 2 * kStartResolution; r <= kMaxResolution; r *= 2) {
    const double cur = marching_length(f, level, r);
    if (std::fabs(cur - prev) < 1e-6 * std::max(1.0, cur)) return kSafety * cur;
    prev = cur;
  }
  throw TraceError("curve " + poly.to_string() + " = " + std::to_string(level) +
                   ": length did not settle by resolution " + std::to_string(kMaxResolution));
}

}  // namespace jst

#pragma once

// Bivariate polynomials with exact rational coefficients, stored as 128-bit
// integer numerators over one positive common denominator.

#include <string>
#include <string_view>
#include <vector>

#include "jst/enclosure.hpp"
#include "jst/wide_int.hpp"

namespace jst {

struct Rational {
  wide_int num = 0;
  wide_int den = 1;
};

/// "3", "-2/5", "0.125", "1e-3". Throws ParseError.
Rational parse_rational(std::string_view text);

class Poly2 {
 public:
  Poly2() = default;
  static Poly2 constant(wide_int num, wide_int den = 1);
  static Poly2 u();
  static Poly2 v();
  /// Coefficients in graded-lex order: 1; u, v; u^2, uv, v^2; u^3, u^2 v, ...
  static Poly2 from_graded_lex(const std::vector<Rational>& coeffs);
  /// Univariate polynomial in u (or v) with integer coefficients, lowest degree first.
  static Poly2 univariate_u(const std::vector<wide_int>& coeffs);
  static Poly2 univariate_v(const std::vector<wide_int>& coeffs);

  bool is_zero() const { return num_.empty(); }
  bool is_constant() const { return degree_u() <= 0 && degree_v() <= 0; }
  /// -1 for the zero polynomial.
  int degree_u() const;
  int degree_v() const;
  int total_degree() const;

  /// Numerator of the u^i v^j coefficient (0 when out of range).
  wide_int numerator(int i, int j) const;
  wide_int denominator() const { return den_; }

  Poly2 operator-() const;
  friend Poly2 operator+(const Poly2& a, const Poly2& b);
  friend Poly2 operator-(const Poly2& a, const Poly2& b);
  friend Poly2 operator*(const Poly2& a, const Poly2& b);
  Poly2 scaled(Rational r) const;
  Poly2 pow(unsigned e) const;
  bool operator==(const Poly2& other) const;

  /// P(X(u,v), Y(u,v)).
  Poly2 compose(const Poly2& x, const Poly2& y) const;
  /// P(v, u).
  Poly2 swapped() const;
  /// P(s u, t v) for s, t in {-1, 1}.
  Poly2 sign_flipped(int s, int t) const;
  Poly2 derivative_u() const;
  Poly2 derivative_v() const;

  /// Rank-one split P(u,v) = A(u) B(v) with integer A, B when one exists.
  bool separable(std::vector<wide_int>& a, std::vector<wide_int>& b) const;

  double evaluate(double u, double v) const;
  std::string to_string() const;

  /// Numerators as nested vectors num[i][j] (u^i v^j); rows have equal length.
  const std::vector<std::vector<wide_int>>& numerators() const { return num_; }

 private:
  void normalize();
  std::vector<std::vector<wide_int>> num_;
  wide_int den_ = 1;
};

/// Parses expressions such as "(u-v)*(u^2+u*v+v^2)", "u^2 + v^2 - 1", "3/4 u v",
/// "U2(u/2)" (Chebyshev U of the inner expression). Throws ParseError.
Poly2 parse_poly(std::string_view text);

/// Interval evaluation of a Poly2 with precomputed coefficient enclosures.
class PolyEnclosure {
 public:
  PolyEnclosure() = default;
  explicit PolyEnclosure(const Poly2& p);

  Enclosure natural(Enclosure u, Enclosure v) const;
  /// Natural extension intersected with the mean-value form around the box center.
  Enclosure tight(Enclosure u, Enclosure v) const;
  Enclosure du(Enclosure u, Enclosure v) const;
  Enclosure dv(Enclosure u, Enclosure v) const;
  double approx(double u, double v) const;
  bool depends_on_u() const { return depends_u_; }
  bool depends_on_v() const { return depends_v_; }

 private:
  using Matrix = std::vector<std::vector<Enclosure>>;
  static Enclosure horner(const Matrix& m, Enclosure u, Enclosure v);
  Matrix c_, cu_, cv_;
  std::vector<std::vector<double>> mid_;
  bool depends_u_ = false;
  bool depends_v_ = false;
};

}  // namespace jst

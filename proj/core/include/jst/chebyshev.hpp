#pragma once

#include <cstdint>
#include <vector>

#include "jst/enclosure.hpp"
#include "jst/wide_int.hpp"

namespace jst {

class CoefficientTable;

inline constexpr int kMaxChebyshevDegree = 64;

/// U_m in the monomial basis; coefficients[i] multiplies u^i.
struct ChebyshevU {
  int degree = 0;
  std::vector<wide_int> coefficients;
};

/// Exact U_m from U_0 = 1, U_1 = 2u, U_{m+1} = 2u U_m - U_{m-1}. CapError for m > 64.
ChebyshevU u_poly(int m);

/// Coefficients of U_m(u/2), which are integers: sum_j (-1)^j C(m-j, j) u^{m-2j}.
std::vector<wide_int> u_poly_half(int m);

/// U_m(u) by the three-term recurrence. CapError for m > 64.
double eval_u(int m, double u);

/// Certified ranges of X(u) = U_m(u/2) and X'(u) over intervals of [-2, 2]. Point values come
/// from the stable three-term recurrence in outward-rounded arithmetic; ranges are the hull
/// of the endpoint values and the values at interior critical points, which interlace the
/// zeros 2cos(k pi/(m+1)).
class HalfChebyshevRange {
 public:
  explicit HalfChebyshevRange(int m);

  int degree() const { return m_; }
  Enclosure value(Enclosure u) const;
  Enclosure derivative(Enclosure u) const;

 private:
  struct Jet {
    Enclosure x, dx, ddx;
  };
  Jet jet(double u) const;
  Enclosure range(Enclosure u, const std::vector<double>& critical, bool derivative) const;

  int m_;
  std::vector<double> critical_;        // zeros of X' in (-2, 2)
  std::vector<double> slope_critical_;  // zeros of X''
};

/// a(p^m) = U_m(a(p)/2). BadPrimeError if p divides the level; OutOfRangeError if p > bound.
double sympower_coeff(const CoefficientTable& table, std::uint64_t p, int m);

}  // namespace jst

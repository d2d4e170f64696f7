#pragma once

// Sato-Tate and joint Sato-Tate measures.

#include <cstddef>

#include "jst/interval.hpp"

namespace jst {

class PolynomialRegion;

struct MeasureValue {
  double value = 0;
  double abs_error = 0;
};

/// Sato-Tate distribution function F(u) on [-2, 2], clipped outside.
double st_cdf(double u);

/// (2/pi) * integral of sin^2 over [a, b]; the Sato-Tate mass of [2cos b, 2cos a].
double sin2_weight(double a, double b);

/// Closed form; endpoint openness is irrelevant.
MeasureValue mu_st(const Interval& interval);
MeasureValue mu_jst_rect(const Interval& first, const Interval& second);

/// Density of U_l(a/2) > 0 under mu_ST. DomainError for l < 1.
double d_ell(int ell);

/// Density of U_m(a/2) U_n(b/2) > 0 under mu_JST. d_{m,0} = d_m, d_{0,n} = d_n;
/// DomainError for (0, 0) or negative indices.
double d_mn(int m, int n);

struct QuadratureOptions {
  double target_abs_error = 1e-8;
  std::size_t max_cells = 10'000'000;
};

struct QuadratureResult {
  MeasureValue measure;  // midpoint of [lower, upper] and half its width
  double lower = 0;
  double upper = 1;
  std::size_t cells = 0;
  bool converged = false;
};

/// Certified bracket for mu_JST(E) by adaptive subdivision of (theta, phi) in [0, pi]^2
/// under the density (4/pi^2) sin^2(theta) sin^2(phi), u = 2cos(theta), v = 2cos(phi).
/// Stops at the target or when the cell budget runs out (converged = false).
QuadratureResult mu_jst_region_bracket(const PolynomialRegion& region, const QuadratureOptions& options);

/// As above; DomainError for targets below 1e-8 and BudgetError when the budget runs out.
MeasureValue mu_jst_region(const PolynomialRegion& region, double target_abs_error,
                           std::size_t max_cells = 10'000'000);

}  // namespace jst

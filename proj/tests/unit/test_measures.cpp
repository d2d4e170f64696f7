#include <doctest.h>

#include <chrono>
#include <cmath>
#include <numbers>
#include <vector>

#include "jst/errors.hpp"
#include "jst/measures.hpp"
#include "jst/region.hpp"
#include "oracles.hpp"

using namespace jst;

namespace {

constexpr double pi = std::numbers::pi;

double st_density(double u) { return std::sqrt(std::max(0.0, 4 - u * u)) / (2 * pi); }

std::vector<double> zeros_in_theta(int ell) {
  std::vector<double> out;
  for (int k = 0; k <= ell + 1; ++k) out.push_back(pi * k / (ell + 1));
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

TEST_CASE("Sato-Tate distribution function") {
  CHECK(st_cdf(-2) == doctest::Approx(0).epsilon(1e-15));
  CHECK(st_cdf(2) == doctest::Approx(1));
  CHECK(st_cdf(0) == doctest::Approx(0.5));
  CHECK(st_cdf(-5) == 0.0);
  CHECK(st_cdf(7) == 1.0);
  for (double u = -2; u <= 2; u += 0.25) {
    CHECK(st_cdf(u) == doctest::Approx(oracle::adaptive_simpson(st_density, -2, u, 1e-13)).epsilon(1e-9));
  }
}

TEST_CASE("mu_st on intervals") {
  const double ref = oracle::adaptive_simpson(st_density, -1, 1, 1e-13);
  CHECK(mu_st(Interval::closed(-1, 1)).value == doctest::Approx(ref).epsilon(1e-10));
  CHECK(mu_st(Interval::closed(-1, 1)).value == doctest::Approx(0.6089977810442293).epsilon(1e-12));
  CHECK(mu_st(Interval::open(-1, 1)).value == mu_st(Interval::closed(-1, 1)).value);
  CHECK(mu_st(Interval{}).value == doctest::Approx(1));
  CHECK(mu_st(Interval::closed(3, 4)).value == 0.0);
  CHECK(mu_st(Interval::closed(-10, 0)).value == doctest::Approx(0.5));
  CHECK(mu_st(Interval::closed(1, 1)).value == 0.0);

  // additivity on a 0.1 grid
  double worst = 0;
  for (int a = -20; a <= 20; ++a) {
    for (int b = a; b <= 20; ++b) {
      for (int c = b; c <= 20; c += 3) {
        const double x = a / 10.0, y = b / 10.0, z = c / 10.0;
        const double lhs = mu_st(Interval::closed(x, y)).value + mu_st(Interval::closed(y, z)).value;
        worst = std::max(worst, std::fabs(lhs - mu_st(Interval::closed(x, z)).value));
      }
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("mu_jst_rect is a product") {
  auto r = mu_jst_rect(Interval::closed(-1, 1), Interval::closed(0, 2));
  CHECK(r.value == doctest::Approx(mu_st(Interval::closed(-1, 1)).value * 0.5));
  CHECK(r.abs_error == 0.0);
}

TEST_CASE("sin^2 weight matches the oracle") {
  for (double a : {0.0, 0.3, 1.2}) {
    for (double b : {1.5, 2.0, pi}) CHECK(sin2_weight(a, b) == doctest::Approx(oracle::sin2_weight(a, b)));
  }
  CHECK(sin2_weight(0, pi) == doctest::Approx(1));
}

TEST_CASE("d_ell against 1-D quadrature") {
  const auto t0 = std::chrono::steady_clock::now();
  for (int ell = 1; ell <= 20; ++ell) {
    CHECK(std::fabs(d_ell(ell) - oracle::positivity_density_1d(ell)) <= 1e-9);
    if (ell % 2) CHECK(d_ell(ell) == 0.5);
    else CHECK(d_ell(ell) < 0.5);
  }
  CHECK_THROWS_AS(d_ell(0), DomainError);
  MESSAGE("d_ell sweep " << seconds_since(t0) << " s");
}

TEST_CASE("d_mn against 2-D quadrature") {
  const auto t0 = std::chrono::steady_clock::now();
  for (int m = 0; m <= 6; ++m) {
    for (int n = 0; n <= 6; ++n) {
      if (m == 0 && n == 0) continue;
      auto inside = [&](double t, double s) {
        return oracle::chebyshev_u_trig(m, std::cos(t)) * oracle::chebyshev_u_trig(n, std::cos(s)) > 0;
      };
      const double ref = oracle::gauss_2d(inside, zeros_in_theta(m), zeros_in_theta(n), 12);
      CHECK(std::fabs(d_mn(m, n) - ref) <= 1e-6);
    }
  }
  MESSAGE("d_mn sweep " << seconds_since(t0) << " s");
}

TEST_CASE("d_mn identities") {
  for (int m = 1; m <= 20; ++m) {
    for (int n = 1; n <= 20; ++n) {
      const double dm = d_ell(m), dn = d_ell(n);
      CHECK(std::fabs(d_mn(m, n) - (dm * dn + (1 - dm) * (1 - dn))) <= 1e-12);
      CHECK(d_mn(m, n) == d_mn(n, m));
      if (m % 2 == 0 && n % 2 == 0) CHECK(d_mn(m, n) > 0.5);
      else CHECK(d_mn(m, n) == 0.5);
    }
  }
  CHECK(d_mn(4, 0) == d_ell(4));
  CHECK(d_mn(0, 6) == d_ell(6));
  CHECK_THROWS_AS(d_mn(0, 0), DomainError);
  CHECK_THROWS_AS(d_mn(-1, 2), DomainError);
}

TEST_CASE("d_22 value") {
  CHECK(d_mn(2, 2) == doctest::Approx(0.523762).epsilon(1e-6));
  // the often-quoted 0.534 is not the value of the closed form
  CHECK(std::fabs(d_mn(2, 2) - 0.534) > 0.01);
}

TEST_CASE("d_mn asymptotics") {
  for (int m : {10, 20, 40}) {
    const double lead = (std::pow(pi, 4) / 18) / std::pow(m + 1.0, 6);
    CHECK(std::fabs(d_mn(m, m) - 0.5 - lead) <= 0.2 * lead);
  }
}

TEST_CASE("region quadrature on simple regions") {
  auto full = mu_jst_region(full_square(), 1e-8);
  CHECK(full.value == doctest::Approx(1).epsilon(1e-15));
  CHECK(full.abs_error == 0.0);

  auto quadrant = mu_jst_region(parse_region_shorthand("poly-interval:u*v;(0,inf);1,1"), 1e-6);
  CHECK(std::fabs(quadrant.value - 0.5) <= 1e-6);

  auto rect = mu_jst_region(rect_region(-1, 1, -1, 1), 1e-8);
  const double r1 = mu_st(Interval::closed(-1, 1)).value;
  CHECK(std::fabs(rect.value - r1 * r1) <= rect.abs_error + 1e-12);
}

TEST_CASE("region quadrature reproduces d_22") {
  const auto t0 = std::chrono::steady_clock::now();
  auto r = mu_jst_region_bracket(sign_product_region(2, 2), {1e-6, 10'000'000});
  const double secs = seconds_since(t0);
  CHECK(r.converged);
  CHECK(r.lower <= d_mn(2, 2));
  CHECK(d_mn(2, 2) <= r.upper);
  CHECK(r.measure.abs_error <= 1e-6);
  CHECK(secs < 10);
  MESSAGE("sign-product(2,2) at 1e-6: " << r.cells << " cells, " << secs << " s");
}

TEST_CASE("region quadrature on curved boundaries") {
  // unit disk: inner v-integral in closed form, outer by adaptive Simpson
  auto F = [](double x) {
    return 0.5 + ((x / 2) * std::sqrt(4 - x * x) + 2 * std::asin(x / 2)) / (2 * pi);
  };
  auto slice = [&](double u) {
    const double h = std::sqrt(std::max(0.0, 1 - u * u));
    return st_density(u) * (F(h) - F(-h));
  };
  const double disk_ref = oracle::adaptive_simpson(slice, -1, 1, 1e-12);
  for (double target : {1e-6, 1e-8}) {
    auto r = mu_jst_region_bracket(disk_region(0, 0, 1), {target, 10'000'000});
    CHECK(r.converged);
    CHECK(r.lower <= disk_ref);
    CHECK(disk_ref <= r.upper);
  }

  // complementarity for a dominance set
  const auto dom = dominance_region(2, 3);
  auto a = mu_jst_region(dom, 1e-7);
  auto b = mu_jst_region(dom.complement(), 1e-7);
  CHECK(std::fabs(a.value + b.value - 1) <= a.abs_error + b.abs_error + 1e-9);
}

TEST_CASE("region quadrature is deterministic") {
  const auto region = disk_region(0.3, -0.2, 0.9);
  auto a = mu_jst_region_bracket(region, {1e-7, 10'000'000});
  auto b = mu_jst_region_bracket(region, {1e-7, 10'000'000});
  CHECK(a.lower == b.lower);
  CHECK(a.upper == b.upper);
  CHECK(a.cells == b.cells);
}

TEST_CASE("region quadrature errors") {
  CHECK_THROWS_AS(mu_jst_region(disk_region(0, 0, 1), 1e-9), DomainError);
  CHECK_THROWS_AS(mu_jst_region(disk_region(0, 0, 1), 1e-8, 100), BudgetError);
  auto r = mu_jst_region_bracket(disk_region(0, 0, 1), {1e-8, 100});
  CHECK_FALSE(r.converged);
  CHECK(r.lower <= r.upper);
}

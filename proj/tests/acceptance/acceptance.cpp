// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "jst/coeffs.hpp"
#include "jst/counting.hpp"
#include "jst/envelope.hpp"
#include "jst/grid.hpp"
#include "jst/measures.hpp"
#include "jst/polynomial.hpp"
#include "jst/region.hpp"
#include "oracles.hpp"

using namespace jst;

namespace {

constexpr double pi = std::numbers::pi;

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string num(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

int failures = 0;

void criterion(int id, const char* title, double limit_seconds, const std::function<void(Check&, std::string&)>& body) {
  Check c;
  std::string summary;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c, summary);
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.require(seconds < limit_seconds, "runtime " + num("%.1f", seconds) + " s over " + num("%.0f", limit_seconds) + " s");
  failures += !c.ok;
  std::printf("[%s] criterion %d: %s (%.2f s)%s%s%s%s\n", c.ok ? "PASS" : "FAIL", id, title, seconds,
              summary.empty() ? "" : " | ", summary.c_str(), c.detail.empty() ? "" : " | failed: ", c.detail.c_str());
  std::fflush(stdout);
}

std::vector<double> zeros_in_theta(int ell) {
  std::vector<double> out;
  for (int k = 0; k <= ell + 1; ++k) out.push_back(pi * k / (ell + 1));
  return out;
}

// mu_ST([-a, a]) through u = 2 cos t
double st_symmetric(double a) { return oracle::sin2_weight(std::acos(a / 2), std::acos(-a / 2)); }

double disk_oracle() {
  auto slice = [](double u) {
    const double h = std::sqrt(std::max(0.0, 1 - u * u));
    return std::sqrt(std::max(0.0, 4 - u * u)) / (2 * pi) * st_symmetric(h);
  };
  return oracle::adaptive_simpson(slice, -1, 1, 1e-13);
}

std::size_t count_primes_dividing(std::uint64_t x, int level) {
  std::size_t n = 0;
  for (auto p : oracle::primes_trial(std::min<std::uint64_t>(x, level))) n += level % p == 0;
  return n;
}

}  // namespace

int main() {
  criterion(1, "eta engine golden expansion of eta(z)^4 eta(5z)^4", 1, [](Check& c, std::string& s) {
    NewformDescriptor d;
    d.label = "5.4.eta";
    d.weight = 4;
    d.level = 5;
    d.eta_recipe = EtaRecipe::single(parse_eta_quotient("1:4,5:4"));
    const auto t = expand_eta_quotient(d, 9);
    const std::vector<wide_int> expected{1, -4, 2, 8, -5, -8, 6, 0, -23};
    const auto raw = t.raw_values();
    c.require(std::equal(raw.begin(), raw.end(), expected.begin(), expected.end()), "coefficients differ");
    const auto naive = oracle::naive_eta_quotient({{1, 4}, {5, 4}}, 9);
    for (std::size_t i = 0; i < 9; ++i) c.require(to_string(raw[i]) == naive[i].str(), "naive product differs");
    for (auto v : raw) s += to_string(v) + " ";
  });

  criterion(2, "density constants d_ell, d_mn and the product identity", 30, [](Check& c, std::string& s) {
    double worst1 = 0, worst2 = 0, worst3 = 0;
    for (int ell = 1; ell <= 20; ++ell) worst1 = std::max(worst1, std::fabs(d_ell(ell) - oracle::positivity_density_1d(ell)));
    for (int m = 0; m <= 6; ++m) {
      for (int n = 0; n <= 6; ++n) {
        if (m == 0 && n == 0) continue;
        auto inside = [&](double t, double u) {
          return oracle::chebyshev_u_trig(m, std::cos(t)) * oracle::chebyshev_u_trig(n, std::cos(u)) > 0;
        };
        const double ref = oracle::gauss_2d(inside, zeros_in_theta(m), zeros_in_theta(n), 12);
        worst2 = std::max(worst2, std::fabs(d_mn(m, n) - ref));
      }
    }
    for (int m = 1; m <= 20; ++m) {
      for (int n = 1; n <= 20; ++n) {
        const double dm = d_ell(m), dn = d_ell(n);
        worst3 = std::max(worst3, std::fabs(d_mn(m, n) - (dm * dn + (1 - dm) * (1 - dn))));
      }
    }
    c.require(worst1 <= 1e-9, "d_ell off by " + num("%.2e", worst1));
    c.require(worst2 <= 1e-6, "d_mn off by " + num("%.2e", worst2));
    c.require(worst3 <= 1e-12, "product identity off by " + num("%.2e", worst3));
    s = "max errors " + num("%.1e", worst1) + ", " + num("%.1e", worst2) + ", " + num("%.1e", worst3);
  });

  criterion(3, "d_{2,2} by closed form and by quadrature", 10, [](Check& c, std::string& s) {
    const double closed = d_mn(2, 2);
    const auto q = mu_jst_region(sign_product_region(2, 2), 1e-7);
    c.require(std::fabs(closed - 0.523762) <= 1e-6, "closed form " + num("%.9f", closed));
    c.require(std::fabs(q.value - 0.523762) <= 1e-6, "quadrature " + num("%.9f", q.value));
    c.require(std::fabs(q.value - closed) <= 1e-6, "methods disagree");
    const bool discrepancy = std::fabs(closed - 0.534) > 1e-3 && std::fabs(q.value - 0.534) > 1e-3;
    c.require(discrepancy, "0.534 was matched");
    s = "closed " + num("%.10f", closed) + ", quadrature " + num("%.10f", q.value) + " +- " +
        num("%.0e", q.abs_error) + "; flagged: the quoted 0.534... is off by " + num("%.4f", 0.534 - closed);
  });

  criterion(4, "grid brackets, 1/m widths, boundary-box bound, strip merge", 120, [](Check& c, std::string& s) {
    const double square = std::pow(st_symmetric(1), 2);
    auto d22_inside = [](double t, double u) {
      return oracle::chebyshev_u_trig(2, std::cos(t)) * oracle::chebyshev_u_trig(2, std::cos(u)) > 0;
    };
    const double d22 = oracle::gauss_2d(d22_inside, zeros_in_theta(2), zeros_in_theta(2), 12);
    struct Case {
      const char* name;
      PolynomialRegion region;
      double exact;
    };
    const std::vector<Case> cases{{"full", full_square(), 1.0},
                                  {"[-1,1]^2", rect_region(-1, 1, -1, 1), square},
                                  {"u>0", parse_region_shorthand("poly-interval:u;(0,inf);1,0"), 0.5},
                                  {"disk", disk_region(0, 0, 1), disk_oracle()},
                                  {"sign-product 2,2", sign_product_region(2, 2), d22}};
    for (const auto& k : cases) {
      std::vector<double> fitted;
      int worst_strip = 0, limit = 0;
      for (int m : {16, 32, 64, 128}) {
        const auto a = classify_boxes(k.region, m);
        const std::string at = std::string(k.name) + " m=" + std::to_string(m);
        c.require(a.mu_low <= k.exact + 1e-12 && k.exact <= a.mu_high + 1e-12, at + " bracket misses oracle");
        fitted.push_back((a.mu_high - a.mu_low) * m);
        const auto b = boundary_bound_check(a, k.region);
        const double delta = 4 * std::sqrt(2.0) * (1 + 1 / (2 * std::sqrt(2.0) * m)) / m;
        const double bound = m * m / 4.0 * (4 * pi * b.length * delta + 8 * pi * k.region.alpha() * delta * delta);
        c.require(static_cast<double>(b.count) <= bound, at + " boundary boxes over the bound");
        const auto sm = strip_merge(a, k.region.alpha(), k.region.beta());
        worst_strip = std::max(worst_strip, sm.max_components);
        limit = sm.limit;
        c.require(sm.max_components <= 1 + k.region.alpha() * k.region.beta(), at + " strip components");
      }
      const auto [lo, hi] = std::minmax_element(fitted.begin(), fitted.end());
      c.require(*hi <= 2 * *lo, std::string(k.name) + " width*m not stable");
      s += std::string(k.name) + ": C in [" + num("%.3f", *lo) + "," + num("%.3f", *hi) + "], N_j <= " +
           std::to_string(worst_strip) + "/" + std::to_string(limit) + "; ";
    }
  });

  criterion(5, "symmetry forcing gives density one half", 60, [](Check& c, std::string& s) {
    struct Case {
      const char* poly;
      int m, n;
      SymmetryKind kind;
    };
    for (auto k : {Case{"u*(v^2+3)", 1, 2, SymmetryKind::OddTwist}, Case{"u*(v^2+3)", 3, 1, SymmetryKind::OddTwist},
                   Case{"(u-v)*(u^2+u*v+v^2)", 1, 1, SymmetryKind::Antisymmetric},
                   Case{"(u-v)*(u^2+u*v+v^2)", 2, 2, SymmetryKind::Antisymmetric}}) {
      const Poly2 p = parse_poly(k.poly);
      const auto cls = symmetry_class(p, k.m, k.n);
      const std::string at = std::string(k.poly) + " (" + std::to_string(k.m) + "," + std::to_string(k.n) + ")";
      c.require(cls.kind == k.kind, at + " class " + cls.to_string());
      const auto q = mu_jst_region(region_from_poly_interval(p, Interval::open(0, INFINITY), k.m, k.n), 1e-6);
      c.require(std::fabs(q.value - 0.5) <= 1e-6, at + " measure " + num("%.9f", q.value));
      s += at + ": " + cls.to_string() + ", " + num("%.8f", q.value) + "; ";
    }
  });

  criterion(6, "desk-scale densities for Delta and 5.4.a.a at 10^4", 60, [](Check& c, std::string& s) {
    const auto delta = expand_eta_quotient(*builtin_descriptor("1.12.a.a"), 10'000);
    const auto f5 = expand_eta_quotient(*builtin_descriptor("5.4.a.a"), 10'000);
    const auto cps = default_checkpoints(10'000);
    const auto sign = sign_density_series(delta, f5, 1, 1, cps);
    const auto dom = dominance_density_series(delta, f5, 1, 1, cps);
    for (const auto* r : {&sign, &dom}) {
      for (const auto& row : r->rows) {
        const std::size_t eligible = oracle::primes_trial(row.x).size() - count_primes_dividing(row.x, 5);
        c.require(row.count_pos + row.count_neg + row.count_zero == eligible,
                  r->statistic + " trichotomy at " + std::to_string(row.x));
      }
      const double final = r->rows.back().emp_density;
      c.require(std::fabs(final - 0.5) <= 0.05, r->statistic + " density " + num("%.4f", final));
      s += r->statistic + " (1,1) = " + num("%.4f", final) + "; ";
    }
  });

  criterion(7, "full-scale figures for 5.4.a.a and 6.6.a.a at 10^5", 300, [](Check& c, std::string& s) {
    const auto f = expand_eta_quotient(*builtin_descriptor("5.4.a.a"), 100'000);
    const auto g = expand_eta_quotient(*builtin_descriptor("6.6.a.a"), 100'000);
    const auto cps = default_checkpoints(100'000, 20);
    auto final_of = [&](bool dominance, int m, int n) {
      const auto r = dominance ? dominance_density_series(f, g, m, n, cps) : sign_density_series(f, g, m, n, cps);
      const double v = r.rows.back().emp_density;
      s += std::string(dominance ? "dom" : "sign") + "(" + std::to_string(m) + "," + std::to_string(n) +
           ") = " + num("%.4f", v) + "; ";
      return v;
    };
    const double s11 = final_of(false, 1, 1), s12 = final_of(false, 1, 2), s22 = final_of(false, 2, 2);
    const double d13 = final_of(true, 1, 3), d22 = final_of(true, 2, 2), d23 = final_of(true, 2, 3);
    c.require(std::fabs(s11 - 0.5) <= 0.03, "sign (1,1)");
    c.require(std::fabs(s12 - 0.5) <= 0.03, "sign (1,2)");
    c.require(s22 > 0.5, "sign (2,2) not above 1/2");
    c.require(std::fabs(d13 - 0.5) <= 0.03, "dominance (1,3)");
    c.require(std::fabs(d22 - 0.5) <= 0.03, "dominance (2,2)");
    c.require(d23 > 0.5, "dominance (2,3) not above 1/2");
  });

  criterion(8, "first sign change and the theoretical bound", 10, [](Check& c, std::string& s) {
    const auto f = expand_eta_quotient(*builtin_descriptor("5.4.a.a"), 10'000);
    const auto g = expand_eta_quotient(*builtin_descriptor("6.6.a.a"), 10'000);
    const auto all = first_sign_change(f, g, 1, 1, Exclusion::AllPrimes);
    const auto excl = first_sign_change(f, g, 1, 1, Exclusion::ExcludeLevelPrimes);
    c.require(all.prime && *all.prime == 2, "AllPrimes");
    c.require(excl.prime && *excl.prime <= 100, "ExcludeLevelPrimes not found below 100");
    c.require(excl.prime && *excl.prime == 11, "ExcludeLevelPrimes differs from the frozen value 11");
    s = "AllPrimes p = " + (all.prime ? std::to_string(*all.prime) : "none") + ", ExcludeLevelPrimes p = " +
        (excl.prime ? std::to_string(*excl.prime) : "none");
    const double K = 4.0 * 6 * 5 * 6;
    for (double d : {0.5, 1.0, 2.0}) {
      const auto b = theoretical_first_sign_bound(1, 1, 4, 6, 5, 6, d);
      c.require(first_sign_inequality(1, 1, K, d, b.log_x), "bound fails its inequality at x");
      c.require(!first_sign_inequality(1, 1, K, d, b.log_x - std::log(2.0)), "inequality already holds at x/2");
      s += "; d = " + num("%g", d) + ": x = 2^" + std::to_string(b.exponent);
    }
  });

  criterion(9, "error envelopes", 5, [](Check& c, std::string& s) {
    const double m = envelope_m(std::exp(std::numbers::e), 1);
    c.require(std::fabs(m - std::exp(0.25)) <= 1e-12, "M(e^e) = " + num("%.15f", m));
    const auto region = sign_product_region(1, 1);
    auto env = [&](EnvelopeMode mode) {
      return ErrorEnvelope{mode, 4, 6, 5, 6, region.total_length(), region.alpha(), region.beta()};
    };
    for (auto mode : {EnvelopeMode::Unconditional13, EnvelopeMode::Unconditional12}) {
      const auto e = env(mode);
      double previous = INFINITY;
      for (double x : {1e3, 1e4, 1e5, 1e6}) {
        c.require(e.ratio(x) < previous, std::string(to_string(mode)) + " not decreasing at " + num("%g", x));
        previous = e.ratio(x);
      }
    }
    s = "M(e^e) = " + num("%.12f", m);
    for (auto [grh, unc] : {std::pair{EnvelopeMode::GRH13, EnvelopeMode::Unconditional13},
                            std::pair{EnvelopeMode::GRH12, EnvelopeMode::Unconditional12}}) {
      const auto a = env(grh), b = env(unc);
      const auto cross = envelope_crossover(a, b);
      c.require(cross.has_value(), std::string(to_string(grh)) + " never crosses");
      if (!cross) continue;
      c.require(a.log_ratio(2 * *cross) < b.log_ratio(2 * *cross), "GRH not below past the crossover");
      c.require(a.log_ratio(2 * *cross) - b.log_ratio(2 * *cross) < a.log_ratio(*cross) - b.log_ratio(*cross),
                "GRH does not decay faster");
      s += std::string("; ") + std::string(to_string(grh)) + " below " + std::string(to_string(unc)) +
           " from log x = " + num("%.1f", *cross);
    }
  });

  std::printf("%s: %d of 9 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}

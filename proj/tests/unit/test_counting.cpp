#include <doctest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

#include "jst/chebyshev.hpp"
#include "jst/coeffs.hpp"
#include "jst/counting.hpp"
#include "jst/errors.hpp"
#include "jst/measures.hpp"
#include "jst/region.hpp"
#include "oracles.hpp"

using namespace jst;
using big_float = boost::multiprecision::cpp_bin_float_50;

namespace {

const CoefficientTable& table(const char* label, std::size_t bound) {
  static std::map<std::string, CoefficientTable> cache;
  const std::string key = std::string(label) + "@" + std::to_string(bound);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, expand_eta_quotient(*builtin_descriptor(label), bound)).first;
  return it->second;
}

const CoefficientTable& delta(std::size_t bound = 10'000) { return table("1.12.a.a", bound); }
const CoefficientTable& f5(std::size_t bound = 10'000) { return table("5.4.a.a", bound); }
const CoefficientTable& f6(std::size_t bound = 10'000) { return table("6.6.a.a", bound); }

// a(p) from the naive product, in 50 digits
struct NaiveForm {
  std::vector<oracle::cpp_int> raw;
  int weight;
  int level;
  big_float a(std::uint64_t p) const {
    return big_float(raw[p - 1]) / boost::multiprecision::pow(big_float(p), big_float(weight - 1) / 2);
  }
};

const NaiveForm& naive_delta() {
  static NaiveForm f{oracle::naive_eta_quotient({{1, 24}}, 700), 12, 1};
  return f;
}
const NaiveForm& naive_f5() {
  static NaiveForm f{oracle::naive_eta_quotient({{1, 4}, {5, 4}}, 700), 4, 5};
  return f;
}

big_float u_half(int m, const big_float& a) {
  big_float prev = 1, cur = a;  // U_0(a/2), U_1(a/2)
  if (m == 0) return prev;
  for (int i = 1; i < m; ++i) {
    big_float next = a * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

int sign_of(const big_float& x, double tol = 1e-40) { return x > tol ? 1 : x < -tol ? -1 : 0; }

}  // namespace

TEST_CASE("exclusion names") {
  CHECK(parse_exclusion("all") == Exclusion::AllPrimes);
  CHECK(parse_exclusion("Exclude-Level") == Exclusion::ExcludeLevelPrimes);
  CHECK(parse_exclusion(to_string(Exclusion::AllPrimes)) == Exclusion::AllPrimes);
  CHECK_THROWS_AS(parse_exclusion("some"), UsageError);
}

TEST_CASE("exact signs against 50-digit evaluation") {
  const auto& nd = naive_delta();
  const auto& nf = naive_f5();
  const std::vector<std::pair<std::string, double>> cases{
      {"u*v", 0}, {"u - v", 0}, {"u^2 + v^2", 1}, {"(u-v)*(u^2+u*v+v^2)", 0.25}, {"u^3 - 2*u*v + 1/3", 0}};
  for (auto& [text, level] : cases) {
    const Poly2 p = parse_poly(text);
    for (auto q : oracle::primes_trial(700)) {
      if (q == 5) continue;
      CAPTURE(text);
      CAPTURE(q);
      const big_float u = nd.a(q), v = nf.a(q);
      big_float value = -big_float(level);
      for (int i = 0; i <= p.degree_u(); ++i) {
        for (int j = 0; j <= p.degree_v(); ++j) {
          const auto c = p.numerator(i, j);
          if (c == 0) continue;
          value += big_float(static_cast<long long>(c)) * boost::multiprecision::pow(u, i) *
                   boost::multiprecision::pow(v, j) / big_float(static_cast<long long>(p.denominator()));
        }
      }
      CHECK(exact_sign(p, level, delta(), f5(), q) == sign_of(value));
    }
  }
  // exact zeros
  for (auto q : {2ULL, 3ULL, 7ULL, 101ULL}) {
    CHECK(exact_sign(parse_poly("u - v"), 0, f5(), f5(), q) == 0);
    CHECK(exact_sign(parse_poly("u^2 - v^2"), 0, delta(), delta(), q) == 0);
  }
  // a(2) = -4/2^{3/2} = -sqrt 2 for 5.4.a.a, so u^2 - 2 vanishes there
  CHECK(exact_sign(parse_poly("u^2"), 2, f5(), f5(), 2) == 0);
  CHECK(exact_sign(parse_poly("u^2"), 1.9999999999, f5(), f5(), 2) == 1);
  CHECK(exact_sign(parse_poly("u^2"), 2.0000000001, f5(), f5(), 2) == -1);
}

TEST_CASE("count_in_region") {
  const auto eligible = [](std::uint64_t x, int n1, int n2) {
    std::uint64_t c = 0;
    for (auto p : oracle::primes_trial(x)) c += (n1 % p != 0 && n2 % p != 0);
    return c;
  };
  SUBCASE("full square") {
    auto r = count_in_region(delta(), f5(), full_square(), 10'000);
    CHECK(r.count == eligible(10'000, 1, 5));
    CHECK(r.eligible == r.count);
  }
  SUBCASE("contradictory constraints") {
    auto empty = parse_region("poly 0, 1, 0 cmp > bound 1\npoly 0, 1, 0 cmp < bound 0\n");
    CHECK(count_in_region(delta(), f5(), empty, 10'000).count == 0);
  }
  SUBCASE("uv > 0 near one half") {
    const auto r = count_in_region(delta(), f5(), sign_product_region(1, 1), 10'000);
    const double pi = 1229;
    CHECK(std::fabs(static_cast<double>(r.count) - 0.5 * pi) <= 0.05 * pi);
  }
  SUBCASE("against the naive oracle") {
    for (auto region : {disk_region(0, 0, 1), parse_region_shorthand("poly-interval:u*v-u;[-0.5,1];1,1"),
                        dominance_region(2, 3)}) {
      CAPTURE(region.description());
      std::uint64_t expected = 0;
      for (auto q : oracle::primes_trial(700)) {
        if (q == 5) continue;
        expected += region.contains(naive_delta().a(q).convert_to<double>(), naive_f5().a(q).convert_to<double>());
      }
      CHECK(count_in_region(delta(), f5(), region, 700).count == expected);
    }
  }
  CHECK_THROWS_AS(count_in_region(delta(), f5(700), full_square(), 701), CoverageError);
}

TEST_CASE("default checkpoints") {
  auto c = default_checkpoints();
  REQUIRE(c.size() == 20);
  CHECK(c.front() == 1000);
  CHECK(c.back() == 100'000);
  for (std::size_t i = 1; i < c.size(); ++i) CHECK(c[i] > c[i - 1]);
  CHECK(default_checkpoints(100, 20, 2).size() == 20);
  CHECK_THROWS_AS(default_checkpoints(10, 20, 5), UsageError);
  CHECK_THROWS_AS(default_checkpoints(100, 0), UsageError);
}

TEST_CASE("sign density series") {
  const auto cps = default_checkpoints(10'000);
  for (auto [m, n] : {std::pair{1, 1}, {2, 2}, {1, 2}, {3, 0}}) {
    CAPTURE(m);
    CAPTURE(n);
    auto r = sign_density_series(delta(), f5(), m, n, cps);
    REQUIRE(r.rows.size() == cps.size());
    for (const auto& row : r.rows) {
      CHECK(row.count_pos + row.count_neg + row.count_zero == row.pi_x - (row.x >= 5 ? 1 : 0));
      CHECK(row.emp_density >= 0);
      CHECK(row.emp_density <= 1);
      CHECK(row.pred_density == d_mn(m, n));
      CHECK(row.envelope_ratio > 0);
    }
  }
  CHECK(sign_density_series(delta(), f5(), 1, 2, cps).rows[3].pred_density == 0.5);
  CHECK(sign_density_series(delta(), f5(), 2, 2, cps).rows[3].pred_density == doctest::Approx(0.523762).epsilon(1e-6));

  // against the naive oracle
  auto r = sign_density_series(delta(700), f5(700), 2, 3, {100, 700});
  std::uint64_t pos = 0, neg = 0;
  for (auto q : oracle::primes_trial(700)) {
    if (q == 5) continue;
    const int s = sign_of(u_half(2, naive_delta().a(q)) * u_half(3, naive_f5().a(q)));
    pos += s > 0;
    neg += s < 0;
  }
  CHECK(r.rows[1].count_pos == pos);
  CHECK(r.rows[1].count_neg == neg);

  CHECK_THROWS_AS(sign_density_series(delta(), f5(), 1, 1, {}), UsageError);
  CHECK_THROWS_AS(sign_density_series(delta(), f5(), 1, 1, {100, 50}), UsageError);
  CHECK_THROWS_AS(sign_density_series(delta(), f5(), 1, 1, {20'000}), CoverageError);
  CHECK_THROWS_AS(sign_density_series(delta(), f5(), 0, 0, {100}), DomainError);
}

TEST_CASE("dominance density series") {
  const auto cps = default_checkpoints(10'000);
  auto same = dominance_density_series(f5(), f5(), 2, 2, cps);
  for (const auto& row : same.rows) {
    CHECK(row.count_pos == 0);
    CHECK(row.count_neg == 0);
    CHECK(row.count_zero == row.pi_x - (row.x >= 5 ? 1 : 0));
  }
  CHECK(dominance_density_series(delta(), f5(), 1, 3, cps).rows[0].pred_density == 0.5);
  CHECK(dominance_prediction(2, 3) == doctest::Approx(0.516599206243517).epsilon(2e-6));
  CHECK(dominance_prediction(2, 2) == 0.5);

  auto r = dominance_density_series(delta(700), f5(700), 1, 2, {700});
  std::uint64_t less = 0;
  for (auto q : oracle::primes_trial(700)) {
    if (q == 5) continue;
    less += sign_of(u_half(2, naive_f5().a(q)) - u_half(1, naive_delta().a(q))) > 0;
  }
  CHECK(r.rows[0].count_pos == less);
}

TEST_CASE("desk-scale densities near one half") {
  const auto cps = default_checkpoints(10'000);
  auto sign = sign_density_series(delta(), f5(), 1, 1, cps);
  auto dom = dominance_density_series(delta(), f5(), 1, 1, cps);
  CHECK(std::fabs(sign.rows.back().emp_density - 0.5) <= 0.05);
  CHECK(std::fabs(dom.rows.back().emp_density - 0.5) <= 0.05);
}

TEST_CASE("CSV") {
  auto r = sign_density_series(delta(), f5(), 1, 1, default_checkpoints(10'000, 5));
  const std::string csv = r.to_csv();
  CHECK(csv.rfind("x,pi_x,count_pos,count_neg,count_zero,emp_density,pred_density,envelope_ratio\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
  CHECK(csv.find("\n10000,1229,") != std::string::npos);
  CHECK(csv == sign_density_series(delta(), f5(), 1, 1, default_checkpoints(10'000, 5)).to_csv());
}

TEST_CASE("zero counts") {
  CHECK(zero_count(delta(), f5(), parse_poly("u"), 1, 1, 10'000).count == 0);
  auto same = zero_count(f5(), f5(), parse_poly("u - v"), 2, 2, 10'000);
  CHECK(same.count == same.eligible);
  CHECK(same.eligible == 1228);
  // a(2) = -sqrt 2 for 5.4.a.a, so U_2(a(2)/2) = a(2)^2 - 1 = 1 and u - 1 vanishes at p = 2
  CHECK(zero_count(f5(), f6(), parse_poly("u - 1"), 2, 1, 100).count == 0);  // 2 divides 6
  CHECK(zero_count(f5(), delta(), parse_poly("u - 1"), 2, 1, 100).count == 1);
  CHECK_THROWS_AS(zero_count(f5(), f5(), parse_poly("3"), 1, 1, 100), DomainError);
}

TEST_CASE("first sign change") {
  auto all = first_sign_change(f5(), f6(), 1, 1, Exclusion::AllPrimes);
  REQUIRE(all.prime.has_value());
  CHECK(*all.prime == 2);
  CHECK(all.raw == -4);
  CHECK(all.raw2 == 4);

  auto excl = first_sign_change(f5(), f6(), 1, 1, Exclusion::ExcludeLevelPrimes);
  REQUIRE(excl.prime.has_value());
  CHECK(*excl.prime == 11);  // A(7) = 6 and A'(7) = 176 agree in sign
  CHECK(excl.raw == 32);
  CHECK(excl.raw2 == -60);
  CHECK(excl.value * excl.value2 < 0);

  auto none = first_sign_change(f5(), f5(), 2, 2, Exclusion::AllPrimes);
  CHECK_FALSE(none.prime.has_value());
  CHECK(none.searched_bound == 10'000);
  CHECK(first_sign_change(f5(), f5(), 2, 2, Exclusion::AllPrimes, 500).searched_bound == 500);

  // at the level prime 5 the sign comes from A(5^m) itself
  auto lifted = first_sign_change(f5(), delta(), 2, 1, Exclusion::AllPrimes);
  REQUIRE(lifted.prime.has_value());
  for (auto q : oracle::primes_trial(*lifted.prime - 1)) {
    CAPTURE(q);
    const double x = q == 5 ? f5().normalized(25) : eval_u(2, f5().normalized(q) / 2);
    CHECK(x * eval_u(1, delta().normalized(q) / 2) >= 0);
  }
}

TEST_CASE("theoretical first-sign bound") {
  for (double d : {0.5, 1.0, 2.0}) {
    for (std::uint64_t level : {5ULL, 30ULL, 1000ULL}) {
      CAPTURE(d);
      CAPTURE(level);
      const auto b = theoretical_first_sign_bound(2, 2, 4, 6, level, 6, d);
      const double K = 4.0 * 6 * static_cast<double>(level) * 6;
      CHECK(first_sign_inequality(2, 2, K, d, b.log_x));
      CHECK_FALSE(first_sign_inequality(2, 2, K, d, b.log_x - std::log(2.0)));
      for (int j = 1; j < 40; ++j) CHECK(first_sign_inequality(2, 2, K, d, b.log_x + j * std::log(2.0)));
    }
  }
  // increases with k k' N N'
  double previous = 0;
  for (std::uint64_t level : {1ULL, 100ULL, 1'000'000ULL}) {
    const auto b = theoretical_first_sign_bound(1, 1, 1, 1, level, 10, 1.0);
    CHECK(b.log_x > previous);
    previous = b.log_x;
  }
  // log bound grows no faster than (log k k' N N')^2
  std::vector<double> shape;
  for (double e = 2; e <= 8; e += 1) {
    const auto level = static_cast<std::uint64_t>(std::pow(10.0, e));
    const auto b = theoretical_first_sign_bound(2, 2, 1, 1, level, 1, 0.5);
    shape.push_back(b.log_x / std::pow(e * std::log(10.0), 2));
  }
  for (double s : shape) CHECK(s <= 2 * shape.front());
  CHECK_THROWS_AS(theoretical_first_sign_bound(1, 1, 1, 1, 1, 1, 0), DomainError);
}

TEST_CASE("symmetry classes") {
  auto odd = symmetry_class(parse_poly("u*(u^4 + u^2*v + v^3 + 2)"), 3, 2);
  CHECK(odd.kind == SymmetryKind::OddTwist);
  CHECK(odd.s == -1);
  CHECK(odd.t == 1);
  CHECK(odd.to_string() == "OddTwist(-1,1)");

  CHECK(symmetry_class(parse_poly("(u - v)*(u^2 + v^2)"), 2, 2).kind == SymmetryKind::Antisymmetric);
  CHECK(symmetry_class(parse_poly("(u - v)*(u^2 + v^2)"), 2, 4).kind == SymmetryKind::None);
  CHECK(symmetry_class(parse_poly("u^2 + 1"), 1, 1).kind == SymmetryKind::None);
  CHECK(symmetry_class(parse_poly("u*(v^2+3)"), 2, 1).kind == SymmetryKind::None);  // m even: s must be 1
  auto both = symmetry_class(parse_poly("u*v + u^3*v^3"), 1, 1);
  CHECK(both.kind == SymmetryKind::OddTwist);
  CHECK(both.s * both.t == -1);
  CHECK_THROWS_AS(symmetry_class(Poly2{}, 1, 1), DomainError);
}

TEST_CASE("symmetry forces one half") {
  const auto t0 = std::chrono::steady_clock::now();
  struct Case {
    const char* poly;
    int m, n;
  };
  for (auto c : {Case{"u*(v^2+3)", 1, 2}, Case{"u*(v^2+3)", 3, 3}, Case{"(u-v)*(u^2+u*v+v^2)", 1, 1},
                 Case{"(u-v)*(u^2+u*v+v^2)", 2, 2}}) {
    CAPTURE(c.poly);
    CAPTURE(c.m);
    const Poly2 p = parse_poly(c.poly);
    REQUIRE(symmetry_class(p, c.m, c.n).kind != SymmetryKind::None);
    CHECK(positivity_prediction(p, c.m, c.n) == 0.5);
    auto q = mu_jst_region(region_from_poly_interval(p, Interval::open(0, INFINITY), c.m, c.n), 1e-6);
    CHECK(std::fabs(q.value - 0.5) <= 1e-6);
  }
  CHECK(std::chrono::steady_clock::now() - t0 < std::chrono::seconds(60));
  // without a symmetry the prediction comes from quadrature
  CHECK(positivity_prediction(parse_poly("u*v"), 2, 2) == doctest::Approx(d_mn(2, 2)).epsilon(2e-6));
}

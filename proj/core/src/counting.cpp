#include "jst/counting.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "jst/chebyshev.hpp"
#include "jst/errors.hpp"
#include "jst/interval.hpp"
#include "jst/measures.hpp"
#include "jst/region.hpp"
#include "jst/sieve.hpp"

namespace jst {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

cpp_int to_big(wide_int v) {
  const bool negative = v < 0;
  auto mag = negative ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  cpp_int out = static_cast<std::uint64_t>(mag >> 64);
  out <<= 64;
  out += static_cast<std::uint64_t>(mag);
  return negative ? cpp_int(-out) : out;
}

cpp_rational exact_double(double x) {
  int e = 0;
  const double frac = std::frexp(x, &e);
  // 53 significant bits
  cpp_rational r = cpp_int(static_cast<std::int64_t>(std::ldexp(frac, 53)));
  e -= 53;
  if (e >= 0) return r * cpp_rational(cpp_int(1) << e);
  return r / cpp_rational(cpp_int(1) << -e);
}

// r + s sqrt(p)
struct Surd {
  cpp_rational r, s;
};

Surd mul(const Surd& a, const Surd& b, const cpp_int& p) {
  return {a.r * b.r + a.s * b.s * p, a.r * b.s + a.s * b.r};
}

int sign_of(const cpp_rational& x) { return x.sign(); }

int surd_sign(const Surd& x, const cpp_int& p) {
  const int sr = sign_of(x.r), ss = sign_of(x.s);
  if (ss == 0) return sr;
  if (sr == 0 || sr == ss) return ss;
  const cpp_rational lhs = x.r * x.r, rhs = x.s * x.s * p;
  if (lhs > rhs) return sr;
  if (lhs < rhs) return ss;
  return 0;
}

Surd normalized_surd(const CoefficientTable& t, std::uint64_t p) {
  const cpp_int a = to_big(t.raw(p));
  const int k = t.weight();
  const cpp_int big_p = p;
  if (k % 2) return {cpp_rational(a, boost::multiprecision::pow(big_p, static_cast<unsigned>((k - 1) / 2))), 0};
  return {0, cpp_rational(a, boost::multiprecision::pow(big_p, static_cast<unsigned>(k / 2)))};
}

bool divides(std::uint64_t p, int level) { return level % static_cast<std::int64_t>(p) == 0; }

bool satisfies(Cmp c, int sign) {
  switch (c) {
    case Cmp::Less: return sign < 0;
    case Cmp::LessEq: return sign <= 0;
    case Cmp::Greater: return sign > 0;
    case Cmp::GreaterEq: return sign >= 0;
  }
  return false;
}

int double_sign(double x) { return (x > 0) - (x < 0); }

void require_coverage(const CoefficientTable& f, const CoefficientTable& f2, std::uint64_t x) {
  for (const auto* t : {&f, &f2}) {
    if (t->bound() < x) {
      throw CoverageError("coefficients of " + t->descriptor().label + " stop at " + std::to_string(t->bound()) +
                          ", statistics need " + std::to_string(x));
    }
  }
}

void check_checkpoints(const std::vector<std::uint64_t>& checkpoints) {
  if (checkpoints.empty()) throw UsageError("empty checkpoint list");
  for (std::size_t i = 1; i < checkpoints.size(); ++i) {
    if (checkpoints[i] <= checkpoints[i - 1]) throw UsageError("checkpoints must strictly increase");
  }
}

Poly2 half_u(int m, bool second) {
  return second ? Poly2::univariate_v(u_poly_half(m)) : Poly2::univariate_u(u_poly_half(m));
}

// Sign of a(p^m) (or a'(p^n)) at p not dividing the level, exact inside the guard band.
struct LiftSign {
  Poly2 poly;
  bool second;
  int operator()(double value, const CoefficientTable& f, const CoefficientTable& f2, std::uint64_t p,
                 std::uint64_t& rechecks) const {
    if (std::fabs(value) > kSignGuard) return double_sign(value);
    ++rechecks;
    return exact_sign(poly, 0, f, f2, p);
  }
};

// Counts classified per prime, then accumulated at the checkpoints.
template <class Classify>
DensityReport run_series(const CoefficientTable& f, const CoefficientTable& f2,
                         const std::vector<std::uint64_t>& checkpoints, Classify classify) {
  check_checkpoints(checkpoints);
  const std::uint64_t x_max = checkpoints.back();
  require_coverage(f, f2, x_max);
  const PrimeSieve primes = sieve(x_max);
  DensityReport report;
  report.label = f.descriptor().label;
  report.label2 = f2.descriptor().label;
  std::uint64_t pos = 0, neg = 0, zero = 0, pi = 0;
  std::size_t next = 0;
  auto emit = [&](std::uint64_t x) {
    DensityRow row;
    row.x = x;
    row.pi_x = pi;
    row.count_pos = pos;
    row.count_neg = neg;
    row.count_zero = zero;
    const std::uint64_t eligible = pos + neg + zero;
    row.emp_density = eligible ? static_cast<double>(pos) / static_cast<double>(eligible) : 0.0;
    report.rows.push_back(row);
  };
  for (std::uint32_t p : primes.primes) {
    while (next < checkpoints.size() && checkpoints[next] < p) emit(checkpoints[next++]);
    ++pi;
    if (divides(p, f.level()) || divides(p, f2.level())) continue;
    const int c = classify(p, report.exact_rechecks);
    (c > 0 ? pos : c < 0 ? neg : zero) += 1;
  }
  while (next < checkpoints.size()) emit(checkpoints[next++]);
  return report;
}

void fill_predictions(DensityReport& report, const CoefficientTable& f, const CoefficientTable& f2,
                      const PolynomialRegion& region, double prediction) {
  const ErrorEnvelope env{EnvelopeMode::Unconditional12,
                          static_cast<std::uint64_t>(f.weight()),
                          static_cast<std::uint64_t>(f2.weight()),
                          static_cast<std::uint64_t>(f.level()),
                          static_cast<std::uint64_t>(f2.level()),
                          region.total_length(),
                          region.alpha(),
                          region.beta()};
  report.region = region.description();
  for (auto& row : report.rows) {
    row.pred_density = prediction;
    row.envelope_ratio =
        row.x >= kEnvelopeMinX ? env.ratio(static_cast<double>(row.x)) : std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

std::string_view to_string(Exclusion e) {
  return e == Exclusion::AllPrimes ? "AllPrimes" : "ExcludeLevelPrimes";
}

Exclusion parse_exclusion(std::string_view text) {
  std::string t(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "all" || t == "allprimes") return Exclusion::AllPrimes;
  if (t == "exclude-level" || t == "excludelevelprimes") return Exclusion::ExcludeLevelPrimes;
  throw UsageError("unknown exclusion rule '" + std::string(text) + "' (expected all or exclude-level)");
}

int exact_sign(const Poly2& poly, double level, const CoefficientTable& f, const CoefficientTable& f2,
               std::uint64_t p) {
  const cpp_int big_p = p;
  const Surd u = normalized_surd(f, p), v = normalized_surd(f2, p);
  const auto& num = poly.numerators();
  std::vector<Surd> vpow{{1, 0}};
  const std::size_t cols = num.empty() ? 0 : num.front().size();
  for (std::size_t j = 1; j < cols; ++j) vpow.push_back(mul(vpow.back(), v, big_p));
  // Horner in u over rows of v-polynomials
  Surd acc{0, 0};
  for (std::size_t i = num.size(); i-- > 0;) {
    acc = mul(acc, u, big_p);
    for (std::size_t j = 0; j < cols; ++j) {
      if (num[i][j] == 0) continue;
      const cpp_int c = to_big(num[i][j]);
      acc.r += c * vpow[j].r;
      acc.s += c * vpow[j].s;
    }
  }
  acc.r = acc.r / cpp_rational(to_big(poly.denominator())) - exact_double(level);
  acc.s = acc.s / cpp_rational(to_big(poly.denominator()));
  return surd_sign(acc, big_p);
}

RegionCount count_in_region(const CoefficientTable& f, const CoefficientTable& f2, const PolynomialRegion& region,
                            std::uint64_t x) {
  require_coverage(f, f2, x);
  RegionCount out;
  const auto& cs = region.constraints();
  std::vector<Truth> truths(cs.size());
  for (std::uint32_t p : sieve(x).primes) {
    if (divides(p, f.level()) || divides(p, f2.level())) continue;
    ++out.eligible;
    const double u = normalized_prime_value(f, p), v = normalized_prime_value(f2, p);
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const double value = cs[i].poly.evaluate(u, v) - cs[i].bound;
      int sign = double_sign(value);
      if (std::fabs(value) <= kSignGuard) {
        ++out.exact_rechecks;
        sign = exact_sign(cs[i].poly, cs[i].bound, f, f2, p);
      }
      truths[i] = satisfies(cs[i].cmp, sign) ? Truth::True : Truth::False;
    }
    if (evaluate(region.root(), truths) == Truth::True) ++out.count;
  }
  return out;
}

std::vector<std::uint64_t> default_checkpoints(std::uint64_t x_max, int count, std::uint64_t x_min) {
  if (count < 1) throw UsageError("checkpoint count must be >= 1");
  if (x_min < 2 || x_max < x_min) throw UsageError("checkpoints need 2 <= x_min <= x_max");
  if (count == 1) return {x_max};
  std::vector<std::uint64_t> out;
  const double ratio = std::log(static_cast<double>(x_max) / static_cast<double>(x_min)) / (count - 1);
  for (int i = 0; i < count; ++i) {
    auto x = static_cast<std::uint64_t>(std::llround(static_cast<double>(x_min) * std::exp(ratio * i)));
    if (i == count - 1) x = x_max;
    if (!out.empty() && x <= out.back()) x = out.back() + 1;
    out.push_back(x);
  }
  if (out.back() != x_max) throw UsageError("too many checkpoints for the range");
  return out;
}

std::string DensityReport::to_csv() const {
  std::string out(kCsvHeader);
  out += '\n';
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%llu,%llu,%llu,%llu,%llu,%.10f,%.10f,%.6e\n",
                  static_cast<unsigned long long>(r.x), static_cast<unsigned long long>(r.pi_x),
                  static_cast<unsigned long long>(r.count_pos), static_cast<unsigned long long>(r.count_neg),
                  static_cast<unsigned long long>(r.count_zero), r.emp_density, r.pred_density, r.envelope_ratio);
    out += buf;
  }
  return out;
}

DensityReport sign_density_series(const CoefficientTable& f, const CoefficientTable& f2, int m, int n,
                                  const std::vector<std::uint64_t>& checkpoints) {
  const PolynomialRegion region = sign_product_region(m, n);
  const LiftSign sx{half_u(m, false), false}, sy{half_u(n, true), true};
  auto report = run_series(f, f2, checkpoints, [&](std::uint64_t p, std::uint64_t& rechecks) {
    return sx(sympower_coeff(f, p, m), f, f2, p, rechecks) * sy(sympower_coeff(f2, p, n), f, f2, p, rechecks);
  });
  report.statistic = "sign";
  report.m = m;
  report.n = n;
  fill_predictions(report, f, f2, region, d_mn(m, n));
  return report;
}

double dominance_prediction(int m, int n) {
  if (m < 0 || n < 0 || (m == 0 && n == 0)) throw DomainError("dominance needs (m,n) != (0,0)");
  if (m == n || (m % 2 && n % 2)) return 0.5;
  return mu_jst_region(dominance_region(m, n), 1e-6).value;
}

DensityReport dominance_density_series(const CoefficientTable& f, const CoefficientTable& f2, int m, int n,
                                       const std::vector<std::uint64_t>& checkpoints) {
  const PolynomialRegion region = dominance_region(m, n);
  const Poly2 diff = half_u(m, false) - half_u(n, true);
  auto report = run_series(f, f2, checkpoints, [&](std::uint64_t p, std::uint64_t& rechecks) {
    const double d = sympower_coeff(f, p, m) - sympower_coeff(f2, p, n);
    if (std::fabs(d) > kSignGuard) return -double_sign(d);
    ++rechecks;
    return -exact_sign(diff, 0, f, f2, p);
  });
  report.statistic = "dominance";
  report.m = m;
  report.n = n;
  fill_predictions(report, f, f2, region, dominance_prediction(m, n));
  return report;
}

RegionCount zero_count(const CoefficientTable& f, const CoefficientTable& f2, const Poly2& poly, int m, int n,
                       std::uint64_t x) {
  if (poly.is_constant()) throw DomainError("zero count needs a non-constant polynomial");
  if (m < 0 || n < 0) throw DomainError("symmetric power indices must be >= 0");
  require_coverage(f, f2, x);
  const Poly2 composed = compose_chebyshev(poly, m, n);
  RegionCount out;
  for (std::uint32_t p : sieve(x).primes) {
    if (divides(p, f.level()) || divides(p, f2.level())) continue;
    ++out.eligible;
    const double value = poly.evaluate(sympower_coeff(f, p, m), sympower_coeff(f2, p, n));
    if (std::fabs(value) > kSignGuard) continue;
    ++out.exact_rechecks;
    if (exact_sign(composed, 0, f, f2, p) == 0) ++out.count;
  }
  return out;
}

namespace {

// Sign and normalised value of a(p^m); at p | N from A(p^m) itself.
struct LiftValue {
  bool available = true;
  int sign = 0;
  double value = 0;
};

LiftValue lift_value(const CoefficientTable& t, std::uint64_t p, int m, const Poly2& exact_poly,
                     const CoefficientTable& f, const CoefficientTable& f2) {
  LiftValue out;
  if (divides(p, t.level())) {
    std::uint64_t pm = 1;
    for (int i = 0; i < m; ++i) {
      if (pm > t.bound() / p) return {false, 0, 0};
      pm *= p;
    }
    if (pm > t.bound()) return {false, 0, 0};
    const wide_int a = t.raw(pm);
    out.sign = (a > 0) - (a < 0);
    out.value = t.normalized(pm);
    return out;
  }
  out.value = sympower_coeff(t, p, m);
  out.sign = std::fabs(out.value) > kSignGuard ? double_sign(out.value) : exact_sign(exact_poly, 0, f, f2, p);
  return out;
}

}  // namespace

FirstSignChange first_sign_change(const CoefficientTable& f, const CoefficientTable& f2, int m, int n,
                                  Exclusion exclusion, std::optional<std::uint64_t> bound) {
  if (m < 0 || n < 0) throw DomainError("symmetric power indices must be >= 0");
  FirstSignChange out;
  out.searched_bound = std::min<std::uint64_t>({bound.value_or(UINT64_MAX), f.bound(), f2.bound()});
  const Poly2 px = half_u(m, false), py = half_u(n, true);
  for (std::uint32_t p : sieve(out.searched_bound).primes) {
    const bool bad = divides(p, f.level()) || divides(p, f2.level());
    if (bad && exclusion == Exclusion::ExcludeLevelPrimes) continue;
    const LiftValue x = lift_value(f, p, m, px, f, f2), y = lift_value(f2, p, n, py, f, f2);
    if (!x.available || !y.available) {
      out.skipped.push_back(p);
      continue;
    }
    if (x.sign * y.sign < 0) {
      out.prime = p;
      out.value = x.value;
      out.value2 = y.value;
      out.raw = f.raw(p);
      out.raw2 = f2.raw(p);
      return out;
    }
  }
  return out;
}

bool first_sign_inequality(int m, int n, double conductor_product, double d, double log_x) {
  const double dmn = d_mn(m, n);
  if (!(dmn < 1)) throw DomainError("d_mn = 1 leaves no room for a sign change");
  if (!(d > 0)) throw DomainError("the constant d must be positive");
  if (std::log(conductor_product) + std::log(log_x) <= 0) return false;  // M undefined
  return 0.5 * log_envelope_m(log_x, conductor_product) > std::log(d / (1 - dmn));
}

FirstSignBound theoretical_first_sign_bound(int m, int n, std::uint64_t k, std::uint64_t k2, std::uint64_t level,
                                            std::uint64_t level2, double d) {
  const double K = static_cast<double>(k) * static_cast<double>(k2) * static_cast<double>(level) *
                   static_cast<double>(level2);
  const double ln2 = std::numbers::ln2;
  auto holds = [&](std::uint64_t j) { return first_sign_inequality(m, n, K, d, static_cast<double>(j) * ln2); };
  // sqrt(y)/log(K y) increases once log(K y) > 2; below that the inequality set is a prefix
  const auto j_mono = std::max<std::uint64_t>(4, static_cast<std::uint64_t>(std::ceil(std::exp(2.0) / (K * ln2))));
  std::uint64_t lo = j_mono, hi = j_mono;
  if (!holds(hi)) {
    while (!holds(hi)) {
      lo = hi;
      if (hi > (UINT64_MAX >> 2)) throw BudgetError("first-sign bound beyond 2^(2^62)");
      hi *= 2;
    }
    while (hi - lo > 1) {
      const std::uint64_t mid = lo + (hi - lo) / 2;
      (holds(mid) ? hi : lo) = mid;
    }
  } else {
    while (hi > 4 && holds(hi - 1)) --hi;
  }
  FirstSignBound out;
  out.exponent = hi;
  out.log_x = static_cast<double>(hi) * ln2;
  out.x = hi < 1024 ? std::ldexp(1.0, static_cast<int>(hi)) : std::numeric_limits<double>::infinity();
  return out;
}

std::string SymmetryClass::to_string() const {
  switch (kind) {
    case SymmetryKind::None: return "None";
    case SymmetryKind::Antisymmetric: return "Antisymmetric";
    case SymmetryKind::OddTwist: return "OddTwist(" + std::to_string(s) + "," + std::to_string(t) + ")";
  }
  return "?";
}

SymmetryClass symmetry_class(const Poly2& poly, int m, int n) {
  if (poly.is_zero()) throw DomainError("symmetry class of the zero polynomial");
  const Poly2 negated = -poly;
  if (m == n && poly.swapped() == negated) return {SymmetryKind::Antisymmetric, 1, 1};
  for (int s : {1, -1}) {
    if (s < 0 && m % 2 == 0) continue;
    for (int t : {1, -1}) {
      if ((t < 0 && n % 2 == 0) || (s > 0 && t > 0)) continue;
      if (poly.sign_flipped(s, t) == negated) return {SymmetryKind::OddTwist, s, t};
    }
  }
  return {};
}

double positivity_prediction(const Poly2& poly, int m, int n, double target) {
  if (symmetry_class(poly, m, n).kind != SymmetryKind::None) return 0.5;
  return mu_jst_region(region_from_poly_interval(poly, Interval::open(0, INFINITY), m, n), target).value;
}

}  // namespace jst

#pragma once

// Prime statistics of pairs (a(p), a'(p)) and of their symmetric-power lifts.
// Values within kSignGuard of a decision boundary are re-decided exactly in Q(sqrt p).

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jst/coeffs.hpp"
#include "jst/envelope.hpp"
#include "jst/polynomial.hpp"

namespace jst {

class PolynomialRegion;

inline constexpr double kSignGuard = 1e-9;

enum class Exclusion { AllPrimes, ExcludeLevelPrimes };

std::string_view to_string(Exclusion e);
/// "all" / "AllPrimes" or "exclude-level" / "ExcludeLevelPrimes". UsageError otherwise.
Exclusion parse_exclusion(std::string_view text);

/// Sign of poly(a(p), a'(p)) - level, decided exactly. Both values are Deligne-normalised
/// coefficients of the two tables, so they lie in Q(sqrt p).
int exact_sign(const Poly2& poly, double level, const CoefficientTable& f, const CoefficientTable& f2,
               std::uint64_t p);

struct RegionCount {
  std::uint64_t count = 0;
  std::uint64_t eligible = 0;        // primes p <= x with p not dividing N N'
  std::uint64_t exact_rechecks = 0;  // decisions that fell in the guard band
};

/// #{p <= x, p not dividing N N', (a(p), a'(p)) in E}. CoverageError if a table stops before x.
RegionCount count_in_region(const CoefficientTable& f, const CoefficientTable& f2, const PolynomialRegion& region,
                            std::uint64_t x);

struct DensityRow {
  std::uint64_t x = 0;
  std::uint64_t pi_x = 0;  // all primes <= x
  std::uint64_t count_pos = 0;
  std::uint64_t count_neg = 0;
  std::uint64_t count_zero = 0;
  double emp_density = 0;   // count_pos / (count_pos + count_neg + count_zero)
  double pred_density = 0;
  double envelope_ratio = 0;  // Unconditional12 envelope / pi(x); NaN below x = 16
};

/// One statistic along a checkpoint grid. For sign series count_pos counts a(p^m) a'(p^n) > 0;
/// for dominance series it counts a(p^m) < a'(p^n), and count_neg the reverse inequality.
struct DensityReport {
  std::string statistic;  // "sign" or "dominance"
  std::string label, label2;
  int m = 0, n = 0;
  std::string region;
  Exclusion exclusion = Exclusion::ExcludeLevelPrimes;
  std::uint64_t exact_rechecks = 0;
  std::vector<DensityRow> rows;

  static constexpr std::string_view kCsvHeader =
      "x,pi_x,count_pos,count_neg,count_zero,emp_density,pred_density,envelope_ratio";
  std::string to_csv() const;
};

/// Geometric grid of `count` integers from x_min to x_max inclusive, strictly increasing.
std::vector<std::uint64_t> default_checkpoints(std::uint64_t x_max = 100'000, int count = 20,
                                               std::uint64_t x_min = 1'000);

DensityReport sign_density_series(const CoefficientTable& f, const CoefficientTable& f2, int m, int n,
                                  const std::vector<std::uint64_t>& checkpoints);
DensityReport dominance_density_series(const CoefficientTable& f, const CoefficientTable& f2, int m, int n,
                                       const std::vector<std::uint64_t>& checkpoints);

/// Limiting density of a(p^m) < a'(p^n): 1/2 when m = n or both are odd, quadrature otherwise.
double dominance_prediction(int m, int n);

/// #{p <= x, p not dividing N N', P(a(p^m), a'(p^n)) = 0}, exact.
RegionCount zero_count(const CoefficientTable& f, const CoefficientTable& f2, const Poly2& poly, int m, int n,
                       std::uint64_t x);

struct FirstSignChange {
  std::optional<std::uint64_t> prime;
  std::uint64_t searched_bound = 0;
  double value = 0, value2 = 0;  // a(p^m), a'(p^n) at the prime found
  wide_int raw = 0, raw2 = 0;  // A(p), A'(p)
  std::vector<std::uint64_t> skipped;  // level primes whose A(p^m) lies beyond the table
};

/// Least prime with a(p^m) a'(p^n) < 0. Under AllPrimes the sign at p | N is read from A(p^m)
/// directly. Searches up to `bound` (default: the shorter table); never throws for not found.
FirstSignChange first_sign_change(const CoefficientTable& f, const CoefficientTable& f2, int m, int n,
                                  Exclusion exclusion, std::optional<std::uint64_t> bound = std::nullopt);

struct FirstSignBound {
  std::uint64_t exponent = 0;  // x = 2^exponent
  double log_x = 0;
  double x = 0;  // inf when 2^exponent overflows
};

/// Smallest x = 2^j (j >= 4) from which (1 - d_mn) > d / M(x)^{1/2} holds for every larger j.
FirstSignBound theoretical_first_sign_bound(int m, int n, std::uint64_t k, std::uint64_t k2, std::uint64_t level,
                                            std::uint64_t level2, double d);
/// The defining inequality at log x.
bool first_sign_inequality(int m, int n, double conductor_product, double d, double log_x);

enum class SymmetryKind { None, OddTwist, Antisymmetric };

struct SymmetryClass {
  SymmetryKind kind = SymmetryKind::None;
  int s = 1, t = 1;  // OddTwist: P(s u, t v) = -P(u, v)

  std::string to_string() const;
};

/// Antisymmetric when m = n and P(v,u) = -P(u,v); OddTwist when m or n is odd and
/// P(su,tv) = -P(u,v) with s = -1 allowed only for odd m and t = -1 only for odd n.
SymmetryClass symmetry_class(const Poly2& poly, int m, int n);

/// Density of P(a(p^m), a'(p^n)) > 0: exactly 1/2 under a symmetry, else quadrature to `target`.
double positivity_prediction(const Poly2& poly, int m, int n, double target = 1e-6);

}  // namespace jst

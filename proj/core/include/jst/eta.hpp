#pragma once

// Exact q-expansions of eta quotients and of integer combinations of them.
//
// Every term q^v * prod_d prod_n (1 - q^{dn})^{e_d} is evaluated modulo a set of
// word-sized primes and lifted back with the Chinese remainder theorem, so
// partial products that are not holomorphic (and grow like exp(c*sqrt n)) never
// overflow. Only the final coefficients must fit in 64 bits.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "jst/wide_int.hpp"

namespace jst {

struct PentagonalSeries {
  std::size_t bound = 0;
  std::vector<std::int64_t> coeffs;  // coeffs[e] is the coefficient of q^e, 0 <= e <= bound
};

/// prod_{n>=1} (1 - q^n) truncated at degree `bound` (Euler's pentagonal theorem).
PentagonalSeries pentagonal_series(std::size_t bound);

struct EtaFactor {
  int divisor = 1;
  int exponent = 0;
  bool operator==(const EtaFactor&) const = default;
};

/// prod eta(d z)^{e_d}.
struct EtaQuotient {
  std::vector<EtaFactor> factors;

  int exponent_sum() const;
  /// sum d * e_d; the order at infinity is this over 24.
  long long weighted_sum() const;
  bool operator==(const EtaQuotient&) const = default;
};

struct EtaTerm {
  std::int64_t coefficient = 1;
  EtaQuotient quotient;
};

/// (1/denominator) * sum coefficient_t * quotient_t. A plain eta quotient is the
/// single-term case with coefficient and denominator 1.
struct EtaRecipe {
  std::vector<EtaTerm> terms;
  std::int64_t denominator = 1;

  static EtaRecipe single(EtaQuotient q);
  std::string to_string() const;
};

/// Parses "1:4,5:4" into a single eta quotient.
EtaQuotient parse_eta_quotient(const std::string& text);

/// Throws RecipeError unless every term has weight `weight`, an integral positive
/// order at infinity, and divisors dividing `level`.
void validate_recipe(const EtaRecipe& recipe, int weight, int level);

enum class EtaStrategy {
  Sparse,         // multiply/divide by sparse pentagonal and Jacobi series, O(n sqrt n) per factor
  DenseSquaring,  // dense schoolbook products, powers by repeated squaring, O(n^2 log e)
};

/// Coefficients A(1..n_max) of the recipe's q-expansion (index 0 of the result is A(1)).
/// Throws OverflowError if a coefficient leaves the int64 range and RecipeError if the
/// denominator does not divide the combination exactly.
/// Reconstructed coefficients beyond this are rejected: the residue range is about 2^123.
inline constexpr wide_int kCoefficientLimit = static_cast<wide_int>(1) << 110;

std::vector<wide_int> expand_eta_recipe(const EtaRecipe& recipe, std::size_t n_max,
                                            EtaStrategy strategy = EtaStrategy::Sparse,
                                            unsigned threads = 1);

}  // namespace jst

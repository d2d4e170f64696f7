#include "jst/eta.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <thread>

#include "jst/errors.hpp"
#include "jst/wide_int.hpp"

namespace jst {
namespace {

// Four primes just below 2^31. Residues times the largest sparse coefficient,
// summed over every sparse term, stay far inside int64 for n_max <= kMaxExpansion.
constexpr std::array<std::int64_t, 4> kPrimes = {2147483647, 2147483629, 2147483587,
                                                 2147483579};
constexpr std::size_t kMaxExpansion = 5'000'000;

using Residues = std::vector<std::int64_t>;

struct SparseTerm {
  std::size_t offset;  // >= 1; the constant term is always 1
  std::int64_t coeff;
};

// prod (1 - q^{d n}) without its constant term, offsets ascending.
std::vector<SparseTerm> sparse_pentagonal(std::size_t d, std::size_t bound) {
  std::vector<SparseTerm> out;
  for (std::size_t j = 1;; ++j) {
    std::size_t lo = d * (j * (3 * j - 1) / 2);
    if (lo > bound) break;
    std::int64_t sign = (j % 2) ? -1 : 1;
    out.push_back({lo, sign});
    std::size_t hi = d * (j * (3 * j + 1) / 2);
    if (hi <= bound) out.push_back({hi, sign});
  }
  return out;
}

// prod (1 - q^{d n})^3 = sum (-1)^j (2j+1) q^{d j(j+1)/2} (Jacobi), without the constant term.
std::vector<SparseTerm> sparse_jacobi_cube(std::size_t d, std::size_t bound) {
  std::vector<SparseTerm> out;
  for (std::size_t j = 1;; ++j) {
    std::size_t e = d * (j * (j + 1) / 2);
    if (e > bound) break;
    std::int64_t c = static_cast<std::int64_t>(2 * j + 1);
    out.push_back({e, (j % 2) ? -c : c});
  }
  return out;
}

inline std::int64_t reduce(std::int64_t v, std::int64_t p) {
  v %= p;
  return v < 0 ? v + p : v;
}

void multiply_sparse(Residues& c, const std::vector<SparseTerm>& s, std::int64_t p) {
  for (std::size_t i = c.size(); i-- > 0;) {
    std::int64_t acc = c[i];
    for (const auto& t : s) {
      if (t.offset > i) break;
      acc += t.coeff * c[i - t.offset];
    }
    c[i] = reduce(acc, p);
  }
}

void divide_sparse(Residues& c, const std::vector<SparseTerm>& s, std::int64_t p) {
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::int64_t acc = c[i];
    for (const auto& t : s) {
      if (t.offset > i) break;
      acc -= t.coeff * c[i - t.offset];
    }
    c[i] = reduce(acc, p);
  }
}

// F = prod_d prod_n (1 - q^{dn})^{e_d} mod p, degrees 0..len-1, sparse route.
Residues quotient_sparse(const EtaQuotient& q, std::size_t len, std::int64_t p) {
  Residues c(len, 0);
  if (len == 0) return c;
  c[0] = 1;
  const std::size_t bound = len - 1;
  for (const auto& f : q.factors) {
    const auto d = static_cast<std::size_t>(f.divisor);
    const int count = std::abs(f.exponent);
    const int cubes = count / 3;
    const int singles = count % 3;
    auto cube = sparse_jacobi_cube(d, bound);
    auto single = sparse_pentagonal(d, bound);
    for (int r = 0; r < cubes; ++r) {
      if (f.exponent > 0) multiply_sparse(c, cube, p);
      else divide_sparse(c, cube, p);
    }
    for (int r = 0; r < singles; ++r) {
      if (f.exponent > 0) multiply_sparse(c, single, p);
      else divide_sparse(c, single, p);
    }
  }
  return c;
}

Residues dense_multiply(const Residues& a, const Residues& b, std::int64_t p) {
  const std::size_t len = a.size();
  Residues out(len, 0);
  for (std::size_t i = 0; i < len; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; i + j < len; ++j) {
      out[i + j] = (out[i + j] + a[i] * b[j]) % p;
    }
  }
  return out;
}

Residues dense_power(Residues base, int e, std::int64_t p) {
  Residues result(base.size(), 0);
  result[0] = 1;
  while (e > 0) {
    if (e & 1) result = dense_multiply(result, base, p);
    e >>= 1;
    if (e) base = dense_multiply(base, base, p);
  }
  return result;
}

// Same product evaluated densely and in the opposite factor order.
Residues quotient_dense(const EtaQuotient& q, std::size_t len, std::int64_t p) {
  Residues total(len, 0);
  if (len == 0) return total;
  total[0] = 1;
  for (auto it = q.factors.rbegin(); it != q.factors.rend(); ++it) {
    const auto d = static_cast<std::size_t>(it->divisor);
    Residues base(len, 0);
    base[0] = 1;
    for (const auto& t : sparse_pentagonal(d, len - 1)) base[t.offset] = reduce(t.coeff, p);
    if (it->exponent < 0) {
      // dense reciprocal: inv[i] = -sum_{j>=1} base[j] inv[i-j]
      Residues inv(len, 0);
      inv[0] = 1;
      for (std::size_t i = 1; i < len; ++i) {
        std::int64_t acc = 0;
        for (std::size_t j = 1; j <= i; ++j) {
          if (base[j]) acc = (acc + base[j] * inv[i - j]) % p;
        }
        inv[i] = reduce(-acc, p);
      }
      base = std::move(inv);
    }
    total = dense_multiply(total, dense_power(std::move(base), std::abs(it->exponent), p), p);
  }
  return total;
}

// Garner reconstruction to the symmetric range (-M/2, M/2], M = product of kPrimes.
wide_int crt_lift(const std::array<std::int64_t, kPrimes.size()>& r) {
  using u128 = unsigned __int128;
  auto inv_mod = [](std::int64_t a, std::int64_t m) {
    std::int64_t t = 0, nt = 1, rr = m, nr = reduce(a, m);
    while (nr) {
      std::int64_t qq = rr / nr;
      t -= qq * nt;
      std::swap(t, nt);
      rr -= qq * nr;
      std::swap(rr, nr);
    }
    return reduce(t, m);
  };
  std::array<std::int64_t, kPrimes.size()> x{};
  for (std::size_t i = 0; i < kPrimes.size(); ++i) {
    std::int64_t v = r[i];
    for (std::size_t j = 0; j < i; ++j) {
      v = reduce(static_cast<std::int64_t>(
                     (static_cast<wide_int>(v - x[j]) * inv_mod(kPrimes[j], kPrimes[i])) %
                     kPrimes[i]),
                 kPrimes[i]);
    }
    x[i] = v;
  }
  u128 value = 0, radix = 1, modulus = 1;
  for (std::size_t i = 0; i < kPrimes.size(); ++i) {
    value += radix * static_cast<u128>(x[i]);
    radix *= static_cast<u128>(kPrimes[i]);
  }
  modulus = radix;
  if (value > modulus / 2) return -static_cast<wide_int>(modulus - value);
  return static_cast<wide_int>(value);
}

}  // namespace

PentagonalSeries pentagonal_series(std::size_t bound) {
  if (bound == 0) throw DomainError("pentagonal_series: bound must be >= 1");
  PentagonalSeries out;
  out.bound = bound;
  out.coeffs.assign(bound + 1, 0);
  out.coeffs[0] = 1;
  for (const auto& t : sparse_pentagonal(1, bound)) out.coeffs[t.offset] = t.coeff;
  return out;
}

int EtaQuotient::exponent_sum() const {
  int s = 0;
  for (const auto& f : factors) s += f.exponent;
  return s;
}

long long EtaQuotient::weighted_sum() const {
  long long s = 0;
  for (const auto& f : factors) s += static_cast<long long>(f.divisor) * f.exponent;
  return s;
}

EtaRecipe EtaRecipe::single(EtaQuotient q) {
  EtaRecipe r;
  r.terms.push_back({1, std::move(q)});
  return r;
}

std::string EtaRecipe::to_string() const {
  std::ostringstream os;
  if (denominator != 1) os << "(1/" << denominator << ")*(";
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const auto& term = terms[t];
    if (t) os << (term.coefficient < 0 ? " - " : " + ");
    else if (term.coefficient < 0) os << "-";
    auto mag = term.coefficient < 0 ? -term.coefficient : term.coefficient;
    if (mag != 1) os << mag << "*";
    os << "eta[";
    for (std::size_t i = 0; i < term.quotient.factors.size(); ++i) {
      if (i) os << ",";
      os << term.quotient.factors[i].divisor << ":" << term.quotient.factors[i].exponent;
    }
    os << "]";
  }
  if (denominator != 1) os << ")";
  return os.str();
}

EtaQuotient parse_eta_quotient(const std::string& text) {
  EtaQuotient q;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto colon = item.find(':');
    if (colon == std::string::npos) throw RecipeError("eta factor '" + item + "' is not d:e");
    try {
      std::size_t used = 0;
      EtaFactor f;
      f.divisor = std::stoi(item.substr(0, colon), &used);
      if (used != colon) throw std::invalid_argument(item);
      auto rest = item.substr(colon + 1);
      f.exponent = std::stoi(rest, &used);
      if (used != rest.size()) throw std::invalid_argument(item);
      q.factors.push_back(f);
    } catch (const std::logic_error&) {
      throw RecipeError("eta factor '" + item + "' is not d:e");
    }
  }
  if (q.factors.empty()) throw RecipeError("empty eta recipe");
  return q;
}

void validate_recipe(const EtaRecipe& recipe, int weight, int level) {
  if (recipe.terms.empty()) throw RecipeError("recipe has no terms");
  if (recipe.denominator <= 0) throw RecipeError("recipe denominator must be positive");
  for (const auto& term : recipe.terms) {
    if (term.coefficient == 0) throw RecipeError("recipe term with zero coefficient");
    const auto& q = term.quotient;
    if (q.factors.empty()) throw RecipeError("eta quotient has no factors");
    for (const auto& f : q.factors) {
      if (f.divisor <= 0) throw RecipeError("eta divisor must be positive");
      if (f.exponent == 0) throw RecipeError("eta exponent must be nonzero");
      if (level % f.divisor != 0) {
        throw RecipeError("eta divisor " + std::to_string(f.divisor) + " does not divide level " +
                          std::to_string(level));
      }
    }
    if (q.exponent_sum() != 2 * weight) {
      throw RecipeError("eta exponents sum to " + std::to_string(q.exponent_sum()) +
                        ", expected twice the weight " + std::to_string(weight));
    }
    const long long w = q.weighted_sum();
    if (w % 24 != 0) throw RecipeError("order at infinity " + std::to_string(w) + "/24 is not integral");
    if (w <= 0) throw RecipeError("order at infinity must be positive");
  }
}

std::vector<wide_int> expand_eta_recipe(const EtaRecipe& recipe, std::size_t n_max,
                                            EtaStrategy strategy, unsigned threads) {
  if (n_max == 0) throw DomainError("expand_eta_recipe: n_max must be >= 1");
  if (n_max > kMaxExpansion) {
    throw BudgetError("eta expansion capped at n_max = " + std::to_string(kMaxExpansion));
  }
  // Residues of the combination at degrees 0..n_max (degree n is A(n)).
  std::array<Residues, kPrimes.size()> combined;
  auto run_prime = [&](std::size_t pi) {
    const std::int64_t p = kPrimes[pi];
    Residues acc(n_max + 1, 0);
    for (const auto& term : recipe.terms) {
      const long long w = term.quotient.weighted_sum();
      if (w % 24 != 0 || w <= 0) throw RecipeError("order at infinity is not a positive integer");
      const auto v = static_cast<std::size_t>(w / 24);
      if (v > n_max) continue;
      const std::size_t len = n_max - v + 1;
      Residues f = strategy == EtaStrategy::Sparse ? quotient_sparse(term.quotient, len, p)
                                                   : quotient_dense(term.quotient, len, p);
      const std::int64_t c = reduce(term.coefficient, p);
      for (std::size_t i = 0; i < len; ++i) acc[i + v] = (acc[i + v] + c * f[i]) % p;
    }
    combined[pi] = std::move(acc);
  };

  if (threads > 1) {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> failures(kPrimes.size());
    for (std::size_t pi = 0; pi < kPrimes.size(); ++pi) {
      pool.emplace_back([&, pi] {
        try {
          run_prime(pi);
        } catch (...) {
          failures[pi] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& f : failures) {
      if (f) std::rethrow_exception(f);
    }
  } else {
    for (std::size_t pi = 0; pi < kPrimes.size(); ++pi) run_prime(pi);
  }

  std::vector<wide_int> out(n_max);
  std::array<std::int64_t, kPrimes.size()> r{};
  for (std::size_t n = 1; n <= n_max; ++n) {
    for (std::size_t pi = 0; pi < kPrimes.size(); ++pi) r[pi] = combined[pi][n];
    wide_int value = crt_lift(r);
    if (value % recipe.denominator != 0) {
      throw RecipeError("combination is not divisible by " + std::to_string(recipe.denominator) +
                        " at n = " + std::to_string(n));
    }
    value /= recipe.denominator;
    if (value > kCoefficientLimit || value < -kCoefficientLimit) {
      throw OverflowError("coefficient A(" + std::to_string(n) + ") exceeds 2^110, beyond the exact range");
    }
    out[n - 1] = value;
  }
  return out;
}

}  // namespace jst

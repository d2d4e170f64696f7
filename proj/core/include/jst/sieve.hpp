#pragma once

#include <cstdint>
#include <vector>

namespace jst {

inline constexpr std::uint64_t kMaxSieveBound = 100'000'000;

struct PrimeSieve {
  std::uint64_t bound = 0;
  std::vector<std::uint32_t> primes;  // ascending, all primes <= bound

  /// pi(x) for x <= bound.
  std::uint64_t count_upto(std::uint64_t x) const;
  bool is_prime(std::uint64_t n) const;
};

/// Segmented sieve of Eratosthenes over odd numbers. BudgetError above kMaxSieveBound.
PrimeSieve sieve(std::uint64_t bound);

/// Exact pi(x) by sieving; BudgetError above kMaxSieveBound.
std::uint64_t prime_pi(std::uint64_t x);

/// pi(x): exact up to kMaxSieveBound, the logarithmic integral li(x) beyond.
double prime_pi_or_li(double x);

/// log of prime_pi_or_li, finite for huge x where li(x) itself overflows.
double log_prime_pi_or_li(double log_x);

}  // namespace jst

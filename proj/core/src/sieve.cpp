#include "jst/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "jst/errors.hpp"

namespace jst {

std::uint64_t PrimeSieve::count_upto(std::uint64_t x) const {
  if (x > bound) throw OutOfRangeError("count_upto beyond sieve bound");
  return static_cast<std::uint64_t>(std::upper_bound(primes.begin(), primes.end(), x) - primes.begin());
}

bool PrimeSieve::is_prime(std::uint64_t n) const {
  if (n > bound) throw OutOfRangeError("is_prime beyond sieve bound");
  return std::binary_search(primes.begin(), primes.end(), static_cast<std::uint32_t>(n));
}

PrimeSieve sieve(std::uint64_t bound) {
  if (bound > kMaxSieveBound) {
    throw BudgetError("sieve bound " + std::to_string(bound) + " exceeds " +
                      std::to_string(kMaxSieveBound));
  }
  PrimeSieve out;
  out.bound = bound;
  if (bound < 2) return out;
  out.primes.push_back(2);

  // base primes up to sqrt(bound) by a plain sieve
  const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(bound))) + 1;
  std::vector<bool> small(root + 1, true);
  std::vector<std::uint64_t> base;
  for (std::uint64_t i = 3; i <= root; i += 2) {
    if (!small[i]) continue;
    base.push_back(i);
    for (std::uint64_t j = i * i; j <= root; j += 2 * i) small[j] = false;
  }

  // odd numbers only; segment index k stands for lo + 2k
  constexpr std::uint64_t kSegment = 1 << 18;
  std::vector<std::uint8_t> mark(kSegment);
  for (std::uint64_t lo = 3; lo <= bound; lo += 2 * kSegment) {
    const std::uint64_t hi = std::min(bound, lo + 2 * kSegment - 1);
    const std::uint64_t len = (hi - lo) / 2 + 1;
    std::fill(mark.begin(), mark.begin() + static_cast<std::ptrdiff_t>(len), 1);
    for (auto p : base) {
      if (p * p > hi) break;
      std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
      if (start % 2 == 0) start += p;
      for (std::uint64_t j = start; j <= hi; j += 2 * p) mark[(j - lo) / 2] = 0;
    }
    for (std::uint64_t k = 0; k < len; ++k) {
      if (mark[k]) out.primes.push_back(static_cast<std::uint32_t>(lo + 2 * k));
    }
  }
  return out;
}

std::uint64_t prime_pi(std::uint64_t x) {
  // one cached sieve, grown on demand
  static std::mutex guard;
  static PrimeSieve cached;
  std::lock_guard lock(guard);
  if (x > cached.bound || cached.bound == 0) {
    cached = sieve(std::max<std::uint64_t>(x, std::min<std::uint64_t>(2 * cached.bound, kMaxSieveBound)));
  }
  return cached.count_upto(x);
}

double prime_pi_or_li(double x) {
  if (x < 2) return 0;
  if (x <= static_cast<double>(kMaxSieveBound)) return static_cast<double>(prime_pi(static_cast<std::uint64_t>(x)));
  return std::expint(std::log(x)) - std::expint(std::log(2.0));
}

double log_prime_pi_or_li(double log_x) {
  if (log_x <= std::log(static_cast<double>(kMaxSieveBound))) {
    return std::log(prime_pi_or_li(std::exp(log_x)));
  }
  if (log_x < 600) return std::log(prime_pi_or_li(std::exp(log_x)));
  // li(x) ~ x/log x * (1 + 1/log x + 2/log^2 x + 6/log^3 x)
  const double y = log_x;
  return y - std::log(y) + std::log1p(1 / y + 2 / (y * y) + 6 / (y * y * y));
}

}  // namespace jst

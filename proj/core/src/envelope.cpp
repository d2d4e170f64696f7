#include "jst/envelope.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "jst/errors.hpp"
#include "jst/sieve.hpp"

namespace jst {

std::string_view to_string(EnvelopeMode mode) {
  switch (mode) {
    case EnvelopeMode::Unconditional13: return "Unconditional13";
    case EnvelopeMode::Unconditional12: return "Unconditional12";
    case EnvelopeMode::GRH13: return "GRH13";
    case EnvelopeMode::GRH12: return "GRH12";
  }
  return "?";
}

EnvelopeMode parse_envelope_mode(std::string_view text) {
  std::string t(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "unc13" || t == "unconditional13") return EnvelopeMode::Unconditional13;
  if (t == "unc12" || t == "unconditional12") return EnvelopeMode::Unconditional12;
  if (t == "grh13") return EnvelopeMode::GRH13;
  if (t == "grh12") return EnvelopeMode::GRH12;
  throw UsageError("unknown envelope mode '" + std::string(text) + "' (expected unc13, unc12, grh13 or grh12)");
}

double log_envelope_m(double log_x, double conductor_product) {
  if (!(conductor_product >= 1)) throw DomainError("k k' N N' must be >= 1");
  if (!(log_x > 0) || !std::isfinite(log_x)) throw DomainError("M(x) needs finite x > 1");
  const double inner = std::log(conductor_product) + std::log(log_x);  // log(K log x)
  if (!(inner > 0)) throw DomainError("M(x) needs K log x > 1");
  return 0.5 * (0.5 * std::log(log_x) - std::log(inner));
}

double envelope_m(double x, double conductor_product) {
  return std::exp(log_envelope_m(std::log(x), conductor_product));
}

double ErrorEnvelope::conductor_product() const {
  return static_cast<double>(k) * static_cast<double>(k2) * static_cast<double>(level) * static_cast<double>(level2);
}

double ErrorEnvelope::log_ratio(double log_x) const {
  if (!(log_x >= std::log(kEnvelopeMinX))) throw DomainError("error envelope needs x >= 16");
  const double K = conductor_product();
  const double la = std::log(length * alpha);
  const double lb = std::log(static_cast<double>(beta));
  switch (mode) {
    case EnvelopeMode::Unconditional13: return la - log_envelope_m(log_x, K) / 3;
    case EnvelopeMode::Unconditional12: return la + lb - log_envelope_m(log_x, K) / 2;
    case EnvelopeMode::GRH13:
      return la + 17.0 / 18 * log_x + std::log(std::log(K) + log_x) / 9 - 2.0 / 3 * std::log(log_x) -
             log_prime_pi_or_li(log_x);
    case EnvelopeMode::GRH12:
      return la + lb + 11.0 / 12 * log_x + std::log(std::log(K) + log_x) / 6 - 0.5 * std::log(log_x) -
             log_prime_pi_or_li(log_x);
  }
  throw DomainError("unknown envelope mode");
}

double ErrorEnvelope::ratio(double x) const { return std::exp(log_ratio(std::log(x))); }

double ErrorEnvelope::value(double x) const {
  const double log_x = std::log(x);
  return std::exp(log_ratio(log_x) + log_prime_pi_or_li(log_x));
}

double error_envelope(EnvelopeMode mode, double x, std::uint64_t k, std::uint64_t k2, std::uint64_t level,
                      std::uint64_t level2, double length, int alpha, int beta) {
  return ErrorEnvelope{mode, k, k2, level, level2, length, alpha, beta}.value(x);
}

std::optional<double> envelope_crossover(const ErrorEnvelope& a, const ErrorEnvelope& b, double log_x_max) {
  auto gap = [&](double y) { return a.log_ratio(y) - b.log_ratio(y); };
  const double y0 = std::log(kEnvelopeMinX);
  // last point of the scan where a is not below b
  double last_above = gap(y0) >= 0 ? y0 : -1;
  for (double y = y0; y <= log_x_max; y *= 1.05) {
    if (gap(y) >= 0) last_above = y;
  }
  if (gap(log_x_max) >= 0) return std::nullopt;
  if (last_above < 0) return y0;
  double lo = last_above, hi = std::min(log_x_max, last_above * 1.05);
  for (int i = 0; i < 100 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = (lo + hi) / 2;
    (gap(mid) >= 0 ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace jst

#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace jst {

enum class EnvelopeMode { Unconditional13, Unconditional12, GRH13, GRH12 };

std::string_view to_string(EnvelopeMode mode);
/// Accepts unc13, unc12, grh13, grh12 (case-insensitive) and the full enum names. UsageError otherwise.
EnvelopeMode parse_envelope_mode(std::string_view text);

/// Smallest x accepted by the envelope formulas.
inline constexpr double kEnvelopeMinX = 16;

/// M(x) = (sqrt(log x) / log(K log x))^{1/2} with K = k k' N N'. DomainError unless log(K log x) > 0.
double envelope_m(double x, double conductor_product);
double log_envelope_m(double log_x, double conductor_product);

struct ErrorEnvelope {
  EnvelopeMode mode = EnvelopeMode::Unconditional12;
  std::uint64_t k = 1, k2 = 1, level = 1, level2 = 1;
  double length = 0;  // L, total boundary length
  int alpha = 0;
  int beta = 0;

  double conductor_product() const;
  /// The envelope at x. DomainError for x < 16 or where M is undefined.
  double value(double x) const;
  /// envelope / pi(x); finite even where the envelope itself overflows.
  double ratio(double x) const;
  double log_ratio(double log_x) const;
};

double error_envelope(EnvelopeMode mode, double x, std::uint64_t k, std::uint64_t k2, std::uint64_t level,
                      std::uint64_t level2, double length, int alpha, int beta);

/// Smallest log x in [log 16, log_x_max] past which `a` stays below `b` (relative to pi(x)),
/// located by a geometric scan and refined by bisection.
std::optional<double> envelope_crossover(const ErrorEnvelope& a, const ErrorEnvelope& b, double log_x_max = 1e4);

}  // namespace jst

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace jst {

using wide_int = __int128;

inline constexpr wide_int kWideMax = static_cast<wide_int>(~static_cast<unsigned __int128>(0) >> 1);
inline constexpr wide_int kWideMin = -kWideMax - 1;

std::string to_string(wide_int value);

/// Parses an optionally signed decimal integer. Returns false on malformed input or overflow.
bool parse_wide(std::string_view text, wide_int& out);

inline bool fits_int64(wide_int v) {
  return v >= static_cast<wide_int>(INT64_MIN) && v <= static_cast<wide_int>(INT64_MAX);
}

/// Nearest double, plus a flag telling whether the conversion was exact.
double to_double(wide_int v, bool* exact = nullptr);

}  // namespace jst

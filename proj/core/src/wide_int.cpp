#include "jst/wide_int.hpp"

#include <algorithm>
#include <cmath>

namespace jst {

std::string to_string(wide_int value) {
  if (value == 0) return "0";
  bool negative = value < 0;
  unsigned __int128 mag = negative ? static_cast<unsigned __int128>(-(value + 1)) + 1
                                   : static_cast<unsigned __int128>(value);
  std::string digits;
  while (mag) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(mag % 10)));
    mag /= 10;
  }
  if (negative) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

bool parse_wide(std::string_view text, wide_int& out) {
  if (text.empty()) return false;
  bool negative = false;
  std::size_t i = 0;
  if (text[0] == '+' || text[0] == '-') {
    negative = text[0] == '-';
    i = 1;
  }
  if (i == text.size()) return false;
  unsigned __int128 mag = 0;
  const unsigned __int128 limit = static_cast<unsigned __int128>(kWideMax) + (negative ? 1 : 0);
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c < '0' || c > '9') return false;
    unsigned d = static_cast<unsigned>(c - '0');
    if (mag > (limit - d) / 10) return false;
    mag = mag * 10 + d;
  }
  if (negative) {
    out = mag == static_cast<unsigned __int128>(kWideMax) + 1 ? kWideMin
                                                               : -static_cast<wide_int>(mag);
  } else {
    out = static_cast<wide_int>(mag);
  }
  return true;
}

double to_double(wide_int v, bool* exact) {
  double d = static_cast<double>(v);
  if (exact) {
    // |d| <= 2^127 always here, so the round trip is well defined except at the very top.
    *exact = std::fabs(d) < 1.7e38 && static_cast<wide_int>(d) == v;
  }
  return d;
}

}  // namespace jst

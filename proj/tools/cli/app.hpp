#pragma once

#include <cstddef>
#include <filesystem>
#include <ostream>
#include <string>

#include "jst/coeffs.hpp"

namespace jst::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitNumerical = 4;

struct FormSources {
  std::filesystem::path cache_dir;
  std::string base_url;
  unsigned threads = 0;
};

/// A(1..n) for `spec`, trying in order: a built-in eta recipe, a coefficient file at that path,
/// then the remote client (which answers from the cache when it covers n).
CoefficientTable resolve_form(const std::string& spec, std::size_t n, const FormSources& sources);

/// Runs the jst command line. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace jst::cli

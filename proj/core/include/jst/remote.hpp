#pragma once

// Remote coefficient client with an on-disk cache.
//
// GET <base>/q_expansion/<label>?n=<n_max> must return the coefficients A(1..)
// either as a JSON array of integers (optionally wrapped in an object under
// "data" or "q_expansion") or as plain integers separated by whitespace or
// commas. A leading A(0) = 0 is dropped. Successful downloads are stored as
// <cache_dir>/<label>.txt in the coefficient file format; a later request that
// the cached file covers performs no network traffic.

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "jst/coeffs.hpp"

namespace jst {

/// Name of the environment variable that overrides the cache directory.
inline constexpr const char* kCacheDirEnv = "JST_CACHE_DIR";

inline constexpr const char* kDefaultBaseUrl = "https://www.lmfdb.org/api";

/// $JST_CACHE_DIR, else $XDG_CACHE_HOME/jst, else $HOME/.cache/jst, else ./.jst-cache.
std::filesystem::path default_cache_dir();

struct RemoteConfig {
  std::string base_url = kDefaultBaseUrl;
  std::filesystem::path cache_dir = default_cache_dir();
  double timeout_seconds = 30;
};

struct FetchStats {
  std::size_t network_requests = 0;
  bool cache_hit = false;
};

/// Parses a response body into A(1..); throws ParseError on anything that is not a list of integers.
std::vector<wide_int> parse_remote_body(std::string_view body);

/// Cached file for `label`, whether or not it exists.
std::filesystem::path cache_path(const std::filesystem::path& cache_dir, std::string_view label);

/// Throws UsageError for malformed labels, NotFoundError on HTTP 404, NetworkError on
/// transport failures or other HTTP statuses, plus every ingestion error.
CoefficientTable fetch_remote(std::string_view label, std::size_t n_max, const RemoteConfig& config,
                              FetchStats* stats = nullptr);

}  // namespace jst

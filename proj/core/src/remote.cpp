#include "jst/remote.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "jst/errors.hpp"

namespace jst {
namespace {

// Exclusive advisory lock on <dir>/.lock for the lifetime of the object.
class DirectoryLock {
 public:
  explicit DirectoryLock(const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const auto path = dir / ".lock";
    fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) throw NetworkError("cannot open cache lock " + path.string());
    if (::flock(fd_, LOCK_EX) != 0) {
      ::close(fd_);
      throw NetworkError("cannot lock cache directory " + dir.string());
    }
  }
  ~DirectoryLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  DirectoryLock(const DirectoryLock&) = delete;
  DirectoryLock& operator=(const DirectoryLock&) = delete;

 private:
  int fd_ = -1;
};

bool label_is_well_formed(std::string_view label) {
  if (!parse_label(label)) return false;
  for (char c : label) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '.')) return false;
  }
  return true;
}

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path without trailing slash
};

SplitUrl split_url(const std::string& base) {
  auto scheme_end = base.find("://");
  if (scheme_end == std::string::npos) throw UsageError("base URL '" + base + "' has no scheme");
  auto path_start = base.find('/', scheme_end + 3);
  SplitUrl out;
  out.origin = base.substr(0, path_start);
  out.prefix = path_start == std::string::npos ? "" : base.substr(path_start);
  while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
  return out;
}

std::vector<wide_int> from_json(const nlohmann::json& j) {
  const nlohmann::json* list = &j;
  if (j.is_object()) {
    for (const char* key : {"data", "q_expansion", "coefficients"}) {
      if (j.contains(key)) {
        list = &j.at(key);
        break;
      }
    }
  }
  if (!list->is_array()) throw ParseError(0, "remote response is not an integer list");
  std::vector<wide_int> out;
  out.reserve(list->size());
  for (const auto& v : *list) {
    wide_int w = 0;
    if (v.is_number_unsigned()) {
      w = v.get<std::uint64_t>();
    } else if (v.is_number_integer()) {
      w = v.get<std::int64_t>();
    } else if (!(v.is_string() && parse_wide(v.get<std::string>(), w))) {
      // numbers past 64 bits arrive as doubles and have lost digits
      throw ParseError(0, "remote response holds a non-integer entry");
    }
    out.push_back(w);
  }
  return out;
}

}  // namespace

std::filesystem::path default_cache_dir() {
  if (const char* env = std::getenv(kCacheDirEnv); env && *env) return env;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) {
    return std::filesystem::path(xdg) / "jst";
  }
  if (const char* home = std::getenv("HOME"); home && *home) {
    return std::filesystem::path(home) / ".cache" / "jst";
  }
  return ".jst-cache";
}

std::filesystem::path cache_path(const std::filesystem::path& cache_dir, std::string_view label) {
  return cache_dir / (std::string(label) + ".txt");
}

std::vector<wide_int> parse_remote_body(std::string_view body) {
  std::vector<wide_int> out;
  auto first = body.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && (body[first] == '[' || body[first] == '{')) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(0, std::string("malformed JSON from remote: ") + e.what());
    }
    out = from_json(j);
  } else {
    std::size_t i = 0;
    while (i < body.size()) {
      while (i < body.size() && (std::isspace(static_cast<unsigned char>(body[i])) || body[i] == ',')) ++i;
      if (i >= body.size()) break;
      std::size_t j = i;
      while (j < body.size() && !std::isspace(static_cast<unsigned char>(body[j])) && body[j] != ',') ++j;
      wide_int v = 0;
      auto token = body.substr(i, j - i);
      if (!parse_wide(token, v)) {
        throw ParseError(0, "remote response token '" + std::string(token) + "' is not an integer");
      }
      out.push_back(v);
      i = j;
    }
  }
  if (out.size() >= 2 && out[0] == 0 && out[1] == 1) out.erase(out.begin());
  return out;
}

CoefficientTable fetch_remote(std::string_view label, std::size_t n_max, const RemoteConfig& config,
                              FetchStats* stats) {
  if (!label_is_well_formed(label)) {
    throw UsageError("malformed newform label '" + std::string(label) + "'");
  }
  if (n_max == 0) throw UsageError("n_max must be >= 1");
  FetchStats local;
  FetchStats& st = stats ? *stats : local;
  st = {};

  DirectoryLock lock(config.cache_dir);
  const auto path = cache_path(config.cache_dir, label);
  if (std::filesystem::exists(path)) {
    auto cached = load_coefficient_file(path, Source::Remote);
    if (cached.bound() >= n_max) {
      st.cache_hit = true;
      return cached.bound() == n_max ? cached : cached.truncated(n_max);
    }
  }

  const auto url = split_url(config.base_url);
  httplib::Client client(url.origin);
  const auto secs = static_cast<time_t>(config.timeout_seconds);
  const auto usecs = static_cast<time_t>((config.timeout_seconds - static_cast<double>(secs)) * 1e6);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_follow_location(true);

  const std::string target =
      url.prefix + "/q_expansion/" + std::string(label) + "?n=" + std::to_string(n_max);
  ++st.network_requests;
  auto res = client.Get(target);
  if (!res) {
    throw NetworkError("GET " + config.base_url + target.substr(url.prefix.size()) + " failed: " +
                       httplib::to_string(res.error()));
  }
  if (res->status == 404) throw NotFoundError("remote has no newform '" + std::string(label) + "'");
  if (res->status != 200) {
    throw NetworkError("GET " + target + " returned HTTP " + std::to_string(res->status));
  }

  auto values = parse_remote_body(res->body);
  if (values.size() > n_max) values.resize(n_max);
  const auto [level, weight] = *parse_label(label);

  std::ostringstream file;
  file << "label=" << label << " k=" << weight << " N=" << level << "\n";
  for (std::size_t n = 1; n <= values.size(); ++n) file << n << ' ' << to_string(values[n - 1]) << '\n';
  // Validate before anything touches the cache.
  parse_coefficient_text(file.str(), Source::Remote);

  auto tmp = path;
  tmp += ".part";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw NetworkError("cannot write cache file " + tmp.string());
    out << file.str();
  }
  std::filesystem::rename(tmp, path);
  return load_coefficient_file(path, Source::Remote);
}

}  // namespace jst

#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "jst/coeffs.hpp"
#include "jst/errors.hpp"
#include "jst/remote.hpp"

using namespace jst;

namespace {

// Minimal stand-in for the remote service, serving eta-generated expansions.
class FakeService {
 public:
  FakeService() {
    server_.Get(R"(/api/q_expansion/([0-9a-z.]+))", [this](const httplib::Request& req,
                                                           httplib::Response& res) {
      ++hits_;
      const std::string label = req.matches[1];
      const std::size_t n = req.has_param("n") ? std::stoul(req.get_param_value("n")) : 10;
      if (label == "9.9.z.z") {
        res.set_content("1 4 -9\n", "text/plain");  // weight/level metadata violates Deligne
        return;
      }
      if (label == "6.6.a.b") {
        res.set_content("0, 1, 4, -9, 16", "text/plain");
        return;
      }
      auto desc = builtin_descriptor(label);
      if (!desc) {
        res.status = 404;
        return;
      }
      auto table = expand_eta_quotient(*desc, n);
      std::vector<std::int64_t> narrow;
      for (auto a : table.raw_values()) narrow.push_back(static_cast<std::int64_t>(a));
      nlohmann::json body = narrow;
      res.set_content(body.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeService() {
    server_.stop();
    thread_.join();
  }
  std::string base() const { return "http://127.0.0.1:" + std::to_string(port_) + "/api"; }
  int hits() const { return hits_; }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> hits_{0};
};

std::filesystem::path fresh_dir(const char* name) {
  auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("response bodies") {
  CHECK(parse_remote_body("[1,-4,2]") == std::vector<jst::wide_int>{1, -4, 2});
  CHECK(parse_remote_body(R"({"data": [1, 4, -9]})") == std::vector<jst::wide_int>{1, 4, -9});
  CHECK(parse_remote_body("0 1 -24 252") == std::vector<jst::wide_int>{1, -24, 252});
  CHECK(parse_remote_body("1,\n-24,\t252") == std::vector<jst::wide_int>{1, -24, 252});
  CHECK_THROWS_AS(parse_remote_body("[1, 2.5]"), ParseError);
  CHECK_THROWS_AS(parse_remote_body("1 x 3"), ParseError);
  CHECK_THROWS_AS(parse_remote_body("[1, 2"), ParseError);
}

TEST_CASE("fetch, cache, and warm-cache reuse") {
  FakeService service;
  RemoteConfig config;
  config.base_url = service.base();
  config.cache_dir = fresh_dir("jst_test_remote_cache");
  config.timeout_seconds = 5;

  FetchStats stats;
  auto f = fetch_remote("5.4.a.a", 9, config, &stats);
  CHECK(stats.network_requests == 1);
  CHECK_FALSE(stats.cache_hit);
  CHECK(f.descriptor().source == Source::Remote);
  auto eta = expand_eta_quotient(*builtin_descriptor("5.4.a.a"), 9);
  CHECK(std::equal(f.raw_values().begin(), f.raw_values().end(), eta.raw_values().begin(),
                   eta.raw_values().end()));
  CHECK(std::filesystem::exists(cache_path(config.cache_dir, "5.4.a.a")));

  auto again = fetch_remote("5.4.a.a", 9, config, &stats);
  CHECK(stats.network_requests == 0);
  CHECK(stats.cache_hit);
  CHECK(std::equal(again.raw_values().begin(), again.raw_values().end(), f.raw_values().begin(),
                   f.raw_values().end()));

  // a shorter request is served from the cache, a longer one is not
  auto shorter = fetch_remote("5.4.a.a", 5, config, &stats);
  CHECK(stats.network_requests == 0);
  CHECK(shorter.bound() == 5);
  fetch_remote("5.4.a.a", 30, config, &stats);
  CHECK(stats.network_requests == 1);
  CHECK(service.hits() == 2);

  auto g = fetch_remote("6.6.a.a", 9, config, &stats);
  CHECK(std::vector<jst::wide_int>(g.raw_values().begin(), g.raw_values().end()) ==
        std::vector<jst::wide_int>{1, 4, -9, 16, -66, -36, 176, 64, 81});

  auto leading_zero = fetch_remote("6.6.a.b", 9, config, &stats);
  CHECK(leading_zero.bound() == 4);
  std::filesystem::remove_all(config.cache_dir);
}

TEST_CASE("remote failures") {
  FakeService service;
  RemoteConfig config;
  config.base_url = service.base();
  config.cache_dir = fresh_dir("jst_test_remote_fail");
  config.timeout_seconds = 5;

  CHECK_THROWS_AS(fetch_remote("11.2.a.a", 9, config), NotFoundError);
  CHECK_THROWS_AS(fetch_remote("not a label", 9, config), UsageError);
  CHECK_THROWS_AS(fetch_remote("9.9.z.z", 9, config), InvariantError);
  CHECK_FALSE(std::filesystem::exists(cache_path(config.cache_dir, "9.9.z.z")));

  RemoteConfig dead = config;
  {
    httplib::Server probe;
    int port = probe.bind_to_any_port("127.0.0.1");
    dead.base_url = "http://127.0.0.1:" + std::to_string(port) + "/api";
  }
  dead.timeout_seconds = 1;
  CHECK_THROWS_AS(fetch_remote("5.4.a.a", 9, dead), NetworkError);
  std::filesystem::remove_all(config.cache_dir);
}

TEST_CASE("cache directory override") {
  ::setenv(kCacheDirEnv, "/tmp/jst-env-cache", 1);
  CHECK(default_cache_dir() == std::filesystem::path("/tmp/jst-env-cache"));
  ::unsetenv(kCacheDirEnv);
  CHECK(default_cache_dir() != std::filesystem::path("/tmp/jst-env-cache"));
}

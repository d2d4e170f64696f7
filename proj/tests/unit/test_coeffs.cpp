#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "jst/coeffs.hpp"
#include "jst/errors.hpp"
#include "jst/sieve.hpp"

using namespace jst;

namespace {

std::string with_header(const std::string& header, const std::vector<long long>& values) {
  std::string s = header + "\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    s += std::to_string(i + 1) + " " + std::to_string(values[i]) + "\n";
  }
  return s;
}

}  // namespace

TEST_CASE("labels") {
  auto lk = parse_label("5.4.a.a");
  REQUIRE(lk);
  CHECK(lk->first == 5);
  CHECK(lk->second == 4);
  CHECK_FALSE(parse_label("5"));
  CHECK_FALSE(parse_label("x.4.a.a"));
}

TEST_CASE("builtin tables") {
  auto f = expand_eta_quotient(*builtin_descriptor("5.4.a.a"), 9);
  CHECK(std::vector<jst::wide_int>(f.raw_values().begin(), f.raw_values().end()) ==
        std::vector<jst::wide_int>{1, -4, 2, 8, -5, -8, 6, 0, -23});
  CHECK(f.descriptor().source == Source::EtaQuotient);

  auto g = expand_eta_quotient(*builtin_descriptor("6.6.a.a"), 9);
  CHECK(std::vector<jst::wide_int>(g.raw_values().begin(), g.raw_values().end()) ==
        std::vector<jst::wide_int>{1, 4, -9, 16, -66, -36, 176, 64, 81});

  CHECK_FALSE(builtin_descriptor("11.2.a.a"));
  CHECK(builtin_descriptors().size() == 3);
}

TEST_CASE("normalized prime values") {
  auto f = expand_eta_quotient(*builtin_descriptor("5.4.a.a"), 100);
  CHECK(normalized_prime_value(f, 2) == doctest::Approx(-1.414214).epsilon(1e-6));
  CHECK(normalized_prime_value(f, 2) == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(normalized_prime_value(f, 101), OutOfRangeError);

  auto g = expand_eta_quotient(*builtin_descriptor("6.6.a.a"), 10);
  CHECK(normalized_prime_value(g, 7) == doctest::Approx(176 / (49 * std::sqrt(7.0))).epsilon(1e-15));
  CHECK(normalized_prime_value(g, 7) == doctest::Approx(1.357587).epsilon(1e-6));

  // A(p) = 0 gives exactly zero
  std::vector<jst::wide_int> raw{1, 0, 0, 0, 0};
  NewformDescriptor d{"t", 2, 1, std::nullopt, Source::File, true};
  CoefficientTable t(d, raw);
  CHECK(normalized_prime_value(t, 3) == 0.0);
}

TEST_CASE("Deligne bound on 5.4.a.a to 10^4") {
  auto f = expand_eta_quotient(*builtin_descriptor("5.4.a.a"), 10'000);
  for (auto p : sieve(10'000).primes) {
    if (p == 5) continue;
    CHECK(std::fabs(static_cast<double>(f.raw(p))) / std::pow(p, 1.5) <= 2 + 1e-12);
  }
}

TEST_CASE("multiplicativity of eta-generated newforms") {
  for (const char* label : {"1.12.a.a", "5.4.a.a", "6.6.a.a"}) {
    CAPTURE(label);
    auto f = expand_eta_quotient(*builtin_descriptor(label), 2500);
    for (std::size_t m = 1; m <= 50; ++m) {
      for (std::size_t n = 1; n <= 50; ++n) {
        if (std::gcd(m, n) != 1) continue;
        REQUIRE(f.raw(m * n) == f.raw(m) * f.raw(n));
      }
    }
  }
}

TEST_CASE("Delta past the 64-bit range") {
  // |tau(p)| reaches about 2 p^{11/2}, beyond 2^63 once p is a few thousand
  auto f = expand_eta_quotient(*builtin_descriptor("1.12.a.a"), 10'000);
  bool wide = false;
  for (auto p : sieve(10'000).primes) {
    wide = wide || !fits_int64(f.raw(p));
    CHECK(std::fabs(f.normalized(p)) <= 2 + 1e-12);
  }
  CHECK(wide);
  wide_int p11 = 1;
  for (int i = 0; i < 11; ++i) p11 *= 97;
  CHECK(f.raw(97 * 97) == f.raw(97) * f.raw(97) - p11);
  CHECK(f.raw(9991) == f.raw(97) * f.raw(103));
  CHECK(f.raw(9999) == f.raw(9) * f.raw(11) * f.raw(101));
}

TEST_CASE("6.6.a.a satisfies the Hecke relations far beyond the snapshot") {
  auto f = expand_eta_quotient(*builtin_descriptor("6.6.a.a"), 20'000);
  // A(p^2) = A(p)^2 - p^5 for p not dividing 6
  for (std::uint64_t p : {5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 97ULL, 139ULL}) {
    CAPTURE(p);
    const auto ap = f.raw(p);
    CHECK(f.raw(p * p) == ap * ap - static_cast<std::int64_t>(std::pow(p, 5)));
  }
  // A(2^j) = 4^j and A(3^j) = (-9)^j at the level primes
  CHECK(f.raw(1024) == (1LL << 20));
  CHECK(f.raw(6561) == 43046721);
}

TEST_CASE("file round trip and snapshot agreement") {
  auto snapshot = load_coefficient_file(std::filesystem::path(JST_DATA_DIR) / "6.6.a.a.txt");
  CHECK(snapshot.bound() == 9);
  CHECK(snapshot.descriptor().label == "6.6.a.a");
  CHECK(snapshot.descriptor().source == Source::File);
  CHECK(snapshot.raw(7) == 176);

  auto generated = expand_eta_quotient(*builtin_descriptor("6.6.a.a"), 500);
  for (std::size_t n = 1; n <= snapshot.bound(); ++n) CHECK(snapshot.raw(n) == generated.raw(n));

  auto dir = std::filesystem::temp_directory_path() / "jst_test_coeffs";
  std::filesystem::remove_all(dir);
  write_coefficient_file(generated, dir / "6.6.a.a.txt");
  auto back = load_coefficient_file(dir / "6.6.a.a.txt");
  CHECK(std::equal(back.raw_values().begin(), back.raw_values().end(),
                   generated.raw_values().begin(), generated.raw_values().end()));
  std::filesystem::remove_all(dir);
}

TEST_CASE("ingestion errors") {
  const std::string header = "label=6.6.a.a k=6 N=6";
  CHECK_THROWS_AS(parse_coefficient_text(header + "\n"), GapError);
  CHECK_THROWS_AS(parse_coefficient_text(header + "\n# nothing\n\n"), GapError);
  CHECK_THROWS_AS(parse_coefficient_text(header + "\n1 1\n3 -9\n"), GapError);

  try {
    parse_coefficient_text(header + "\n1 1\n2 four\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_coefficient_text("label=x k=6\n1 1\n"), ParseError);
  CHECK_THROWS_AS(parse_coefficient_text("1 1\n"), ParseError);

  // 200 / 7^2.5 ~ 1.54 passes, 300 / 7^2.5 ~ 2.31 fails
  std::vector<long long> ok{1, 4, -9, 16, -66, -36, 200};
  CHECK_NOTHROW(parse_coefficient_text(with_header(header, ok)));
  std::vector<long long> bad{1, 4, -9, 16, -66, -36, 300};
  CHECK_THROWS_AS(parse_coefficient_text(with_header(header, bad)), InvariantError);

  // A(1) must be 1
  CHECK_THROWS_AS(parse_coefficient_text(with_header(header, {2, 4})), InvariantError);
  // |A(2)| must be 2^2 at a prime exactly dividing the level
  CHECK_THROWS_AS(parse_coefficient_text(with_header(header, {1, 5})), InvariantError);
}

TEST_CASE("truncation") {
  auto f = expand_eta_quotient(*builtin_descriptor("1.12.a.a"), 50);
  auto t = f.truncated(3);
  CHECK(t.bound() == 3);
  CHECK(t.raw(3) == 252);
  CHECK_THROWS_AS(f.truncated(51), OutOfRangeError);
  CHECK_THROWS_AS(f.raw(0), OutOfRangeError);
}

TEST_CASE("recipe checks through descriptors") {
  NewformDescriptor d{"bad", 4, 5, EtaRecipe::single(parse_eta_quotient("1:4,5:2")),
                      Source::EtaQuotient, true};
  CHECK_THROWS_AS(expand_eta_quotient(d, 9), RecipeError);
  NewformDescriptor none{"none", 4, 5, std::nullopt, Source::EtaQuotient, true};
  CHECK_THROWS_AS(expand_eta_quotient(none, 9), RecipeError);
  NewformDescriptor odd{"odd", 3, 5, std::nullopt, Source::File, true};
  CHECK_THROWS_AS(odd.validate(), InvariantError);
}

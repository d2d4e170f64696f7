#include "jst/coeffs.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "jst/errors.hpp"
#include "jst/sieve.hpp"
#include "jst/wide_int.hpp"

namespace jst {

std::string_view to_string(Source s) {
  switch (s) {
    case Source::EtaQuotient: return "eta";
    case Source::File: return "file";
    case Source::Remote: return "remote";
  }
  return "?";
}

void NewformDescriptor::validate() const {
  if (weight < 2 || weight % 2 != 0) {
    throw InvariantError("weight must be even and >= 2, got " + std::to_string(weight));
  }
  if (level < 1) throw InvariantError("level must be >= 1, got " + std::to_string(level));
  if (eta_recipe) validate_recipe(*eta_recipe, weight, level);
}

std::optional<std::pair<int, int>> parse_label(std::string_view label) {
  auto first = label.find('.');
  if (first == std::string_view::npos) return std::nullopt;
  auto second = label.find('.', first + 1);
  if (second == std::string_view::npos) return std::nullopt;
  int level = 0, weight = 0;
  auto a = label.substr(0, first);
  auto b = label.substr(first + 1, second - first - 1);
  if (std::from_chars(a.data(), a.data() + a.size(), level).ptr != a.data() + a.size()) return std::nullopt;
  if (std::from_chars(b.data(), b.data() + b.size(), weight).ptr != b.data() + b.size()) return std::nullopt;
  if (level < 1 || weight < 1) return std::nullopt;
  return std::make_pair(level, weight);
}

CoefficientTable::CoefficientTable(NewformDescriptor descriptor, std::vector<wide_int> raw)
    : descriptor_(std::move(descriptor)), raw_(std::move(raw)) {
  if (descriptor_.weight < 2 || descriptor_.weight % 2 != 0 || descriptor_.level < 1) {
    throw InvariantError("descriptor " + descriptor_.label + " has invalid weight/level");
  }
  if (raw_.empty()) throw GapError("coefficient table for " + descriptor_.label + " is empty");
  if (raw_[0] != 1) {
    throw InvariantError("A(1) = " + to_string(raw_[0]) + " for " + descriptor_.label +
                         "; newforms are normalized");
  }
  const double half = (descriptor_.weight - 1) / 2.0;
  normalized_.resize(raw_.size());
  for (std::size_t n = 1; n <= raw_.size(); ++n) {
    normalized_[n - 1] = to_double(raw_[n - 1]) / std::pow(static_cast<double>(n), half);
  }

  const auto level = static_cast<std::uint64_t>(descriptor_.level);
  for (std::uint32_t p : sieve(raw_.size()).primes) {
    if (level % p != 0) {
      double a = normalized_[p - 1];
      if (std::fabs(a) > 2.0 + 1e-9) {
        std::ostringstream os;
        os << "Deligne bound violated for " << descriptor_.label << " at p = " << p
           << ": |a(p)| = " << std::fabs(a) << " (check weight/level metadata)";
        throw InvariantError(os.str());
      }
    } else if ((level / p) % p != 0) {
      // p || N with trivial character: A(p) = -+ p^{(k-2)/2}
      wide_int expected = 1;
      bool representable = true;
      for (int i = 0; i < (descriptor_.weight - 2) / 2; ++i) {
        expected *= p;
        if (expected > static_cast<wide_int>(INT64_MAX)) {
          representable = false;
          break;
        }
      }
      if (!representable) continue;
      const wide_int got = raw_[p - 1] < 0 ? -raw_[p - 1] : raw_[p - 1];
      if (got != expected) {
        throw InvariantError("|A(" + std::to_string(p) + ")| = " + to_string(got) + " for " +
                             descriptor_.label + ", expected p^{(k-2)/2} = " + to_string(expected));
      }
    }
  }
}

wide_int CoefficientTable::raw(std::size_t n) const {
  if (n < 1 || n > raw_.size()) {
    throw OutOfRangeError("A(" + std::to_string(n) + ") outside table bound " +
                          std::to_string(raw_.size()) + " for " + descriptor_.label);
  }
  return raw_[n - 1];
}

double CoefficientTable::normalized(std::size_t n) const {
  if (n < 1 || n > raw_.size()) {
    throw OutOfRangeError("a(" + std::to_string(n) + ") outside table bound " +
                          std::to_string(raw_.size()) + " for " + descriptor_.label);
  }
  return normalized_[n - 1];
}

CoefficientTable CoefficientTable::truncated(std::size_t bound) const {
  if (bound > raw_.size()) {
    throw OutOfRangeError("cannot extend " + descriptor_.label + " from " +
                          std::to_string(raw_.size()) + " to " + std::to_string(bound));
  }
  return CoefficientTable(descriptor_, std::vector<wide_int>(raw_.begin(), raw_.begin() + static_cast<std::ptrdiff_t>(bound)));
}

CoefficientTable expand_eta_quotient(const NewformDescriptor& descriptor, std::size_t n_max,
                                     unsigned threads) {
  if (!descriptor.eta_recipe) throw RecipeError(descriptor.label + " has no eta recipe");
  descriptor.validate();
  auto raw = expand_eta_recipe(*descriptor.eta_recipe, n_max, EtaStrategy::Sparse, threads);
  if (raw[0] != 1) {
    throw RecipeError("recipe for " + descriptor.label + " is not normalized: A(1) = " +
                      to_string(raw[0]));
  }
  NewformDescriptor d = descriptor;
  d.source = Source::EtaQuotient;
  return CoefficientTable(std::move(d), std::move(raw));
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_int(std::string_view s, long long& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

}  // namespace

CoefficientTable parse_coefficient_text(std::string_view text, Source source) {
  NewformDescriptor desc;
  desc.source = source;
  bool have_header = false;
  std::vector<wide_int> raw;
  std::size_t line_no = 0;

  while (!text.empty()) {
    auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (!have_header) {
      bool got_label = false, got_k = false, got_n = false;
      std::istringstream fields{std::string(line)};
      std::string field;
      while (fields >> field) {
        auto eq = field.find('=');
        if (eq == std::string::npos) throw ParseError(line_no, "header field '" + field + "' is not key=value");
        auto key = field.substr(0, eq);
        auto value = field.substr(eq + 1);
        long long v = 0;
        if (key == "label") {
          desc.label = value;
          got_label = !value.empty();
        } else if (key == "k") {
          if (!parse_int(value, v)) throw ParseError(line_no, "bad weight '" + value + "'");
          desc.weight = static_cast<int>(v);
          got_k = true;
        } else if (key == "N") {
          if (!parse_int(value, v)) throw ParseError(line_no, "bad level '" + value + "'");
          desc.level = static_cast<int>(v);
          got_n = true;
        } else {
          throw ParseError(line_no, "unknown header key '" + key + "'");
        }
      }
      if (!(got_label && got_k && got_n)) {
        throw ParseError(line_no, "header must be 'label=<text> k=<int> N=<int>'");
      }
      desc.validate();
      have_header = true;
      continue;
    }

    auto space = line.find_first_of(" \t");
    if (space == std::string_view::npos) throw ParseError(line_no, "expected '<n> <A(n)>'");
    long long n = 0;
    wide_int a = 0;
    if (!parse_int(trim(line.substr(0, space)), n)) throw ParseError(line_no, "bad index");
    if (!parse_wide(trim(line.substr(space + 1)), a)) throw ParseError(line_no, "bad coefficient");
    const auto expected = static_cast<long long>(raw.size()) + 1;
    if (n > expected) {
      throw GapError("line " + std::to_string(line_no) + ": index " + std::to_string(n) +
                     " follows " + std::to_string(expected - 1) + "; A(" +
                     std::to_string(expected) + ") is missing");
    }
    if (n < expected) throw ParseError(line_no, "index " + std::to_string(n) + " is out of order");
    raw.push_back(a);
  }
  if (!have_header) throw ParseError(line_no, "missing header line");
  if (raw.empty()) throw GapError("coefficient file for " + desc.label + " has no A(1)");
  return CoefficientTable(std::move(desc), std::move(raw));
}

CoefficientTable load_coefficient_file(const std::filesystem::path& path, Source source) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open coefficient file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_coefficient_text(buffer.str(), source);
}

std::string format_coefficient_file(const CoefficientTable& table) {
  std::ostringstream os;
  const auto& d = table.descriptor();
  os << "label=" << d.label << " k=" << d.weight << " N=" << d.level << "\n";
  auto raw = table.raw_values();
  for (std::size_t n = 1; n <= raw.size(); ++n) os << n << ' ' << to_string(raw[n - 1]) << '\n';
  return os.str();
}

void write_coefficient_file(const CoefficientTable& table, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".part";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw NotFoundError("cannot write " + tmp.string());
    out << format_coefficient_file(table);
  }
  std::filesystem::rename(tmp, path);
}

double normalized_prime_value(const CoefficientTable& table, std::uint64_t p) {
  if (p > table.bound()) {
    throw OutOfRangeError("p = " + std::to_string(p) + " beyond table bound " +
                          std::to_string(table.bound()) + " for " + table.descriptor().label);
  }
  return table.normalized(p);
}

std::vector<NewformDescriptor> builtin_descriptors() {
  std::vector<NewformDescriptor> out;

  NewformDescriptor delta;
  delta.label = "1.12.a.a";
  delta.weight = 12;
  delta.level = 1;
  delta.eta_recipe = EtaRecipe::single(EtaQuotient{{{1, 24}}});
  out.push_back(delta);

  NewformDescriptor f5;
  f5.label = "5.4.a.a";
  f5.weight = 4;
  f5.level = 5;
  f5.eta_recipe = EtaRecipe::single(EtaQuotient{{{1, 4}, {5, 4}}});
  out.push_back(f5);

  // S_6(Gamma0(6)) is spanned by the holomorphic eta quotients of level 6; the
  // newform is the combination below. Both quotients are cusp forms on Gamma0(6),
  // and the Sturm bound there is 6, so agreement of the first 7 coefficients
  // with the newform proves the identity.
  NewformDescriptor f6;
  f6.label = "6.6.a.a";
  f6.weight = 6;
  f6.level = 6;
  EtaRecipe r;
  r.terms.push_back({9, EtaQuotient{{{1, -2}, {2, 4}, {3, 14}, {6, -4}}}});
  r.terms.push_back({-1, EtaQuotient{{{1, 14}, {2, -4}, {3, -2}, {6, 4}}}});
  r.denominator = 8;
  f6.eta_recipe = r;
  out.push_back(f6);

  return out;
}

std::optional<NewformDescriptor> builtin_descriptor(std::string_view label) {
  for (auto& d : builtin_descriptors()) {
    if (d.label == label) return d;
  }
  return std::nullopt;
}

}  // namespace jst

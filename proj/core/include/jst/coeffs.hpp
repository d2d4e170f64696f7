#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "jst/eta.hpp"

namespace jst {

enum class Source { EtaQuotient, File, Remote };

std::string_view to_string(Source s);

struct NewformDescriptor {
  std::string label;
  int weight = 2;
  int level = 1;
  std::optional<EtaRecipe> eta_recipe;
  Source source = Source::EtaQuotient;
  // Non-CM status and twist inequivalence are taken on the caller's word.
  bool non_cm_asserted = true;

  /// Throws InvariantError (bad weight/level) or RecipeError (bad recipe).
  void validate() const;
};

/// Level and weight from an "N.k.a.x" label; nullopt if the label does not have that shape.
std::optional<std::pair<int, int>> parse_label(std::string_view label);

/// Exact Fourier coefficients A(1..bound), A(n) = a(n) n^{(k-1)/2}. Immutable once built.
class CoefficientTable {
 public:
  /// raw[0] is A(1). Checks A(1) = 1, the Deligne bound at p not dividing N, and
  /// |A(p)| = p^{(k-2)/2} at primes exactly dividing N; throws InvariantError.
  CoefficientTable(NewformDescriptor descriptor, std::vector<wide_int> raw);

  const NewformDescriptor& descriptor() const { return descriptor_; }
  int weight() const { return descriptor_.weight; }
  int level() const { return descriptor_.level; }
  std::size_t bound() const { return raw_.size(); }

  /// A(n); OutOfRangeError outside 1..bound.
  wide_int raw(std::size_t n) const;
  std::span<const wide_int> raw_values() const { return raw_; }

  /// a(n) = A(n) / n^{(k-1)/2}; OutOfRangeError outside 1..bound.
  double normalized(std::size_t n) const;

  /// First `bound` coefficients as a new table.
  CoefficientTable truncated(std::size_t bound) const;

 private:
  NewformDescriptor descriptor_;
  std::vector<wide_int> raw_;
  std::vector<double> normalized_;
};

CoefficientTable expand_eta_quotient(const NewformDescriptor& descriptor, std::size_t n_max,
                                     unsigned threads = 1);

/// Coefficient file format:
///   label=<text> k=<int> N=<int>
///   <n> <A(n)>          one line per n, ascending and contiguous from 1
/// Blank lines and text after '#' are ignored.
CoefficientTable parse_coefficient_text(std::string_view text, Source source = Source::File);
CoefficientTable load_coefficient_file(const std::filesystem::path& path,
                                       Source source = Source::File);
std::string format_coefficient_file(const CoefficientTable& table);
void write_coefficient_file(const CoefficientTable& table, const std::filesystem::path& path);

/// a(p) as a double. OutOfRangeError if p > bound.
double normalized_prime_value(const CoefficientTable& table, std::uint64_t p);

/// Forms with a certified eta-quotient expression: 1.12.a.a (Delta), 5.4.a.a, 6.6.a.a.
std::optional<NewformDescriptor> builtin_descriptor(std::string_view label);
std::vector<NewformDescriptor> builtin_descriptors();

}  // namespace jst

#pragma once

#include <stdexcept>
#include <string>

namespace jst {

/// Broad failure classes; the CLI maps them onto exit codes.
enum class ErrorClass { Usage, Data, Numerical };

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), cls_(cls) {}
  ErrorClass error_class() const noexcept { return cls_; }

 private:
  ErrorClass cls_;
};

#define JST_DEFINE_ERROR(Name, Class)                                        \
  class Name : public Error {                                                \
   public:                                                                   \
    explicit Name(const std::string& what) : Error(ErrorClass::Class, what) {} \
  };

// coefficient acquisition
JST_DEFINE_ERROR(RecipeError, Data)
JST_DEFINE_ERROR(OverflowError, Numerical)
JST_DEFINE_ERROR(GapError, Data)
JST_DEFINE_ERROR(InvariantError, Data)
JST_DEFINE_ERROR(NetworkError, Data)
JST_DEFINE_ERROR(NotFoundError, Data)
JST_DEFINE_ERROR(OutOfRangeError, Data)
JST_DEFINE_ERROR(CoverageError, Data)

// numerics
JST_DEFINE_ERROR(CapError, Numerical)
JST_DEFINE_ERROR(BadPrimeError, Numerical)
JST_DEFINE_ERROR(DomainError, Numerical)
JST_DEFINE_ERROR(BudgetError, Numerical)
JST_DEFINE_ERROR(DegenerateError, Numerical)
JST_DEFINE_ERROR(TraceError, Numerical)
JST_DEFINE_ERROR(HypothesisError, Numerical)
JST_DEFINE_ERROR(CompositionOverflow, Numerical)

JST_DEFINE_ERROR(UsageError, Usage)

#undef JST_DEFINE_ERROR

/// Malformed input text; carries the 1-based line number (0 when not line oriented).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorClass::Data, line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace jst

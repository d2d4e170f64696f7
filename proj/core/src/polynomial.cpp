#include "jst/polynomial.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include "jst/errors.hpp"

namespace jst {
namespace {

wide_int checked_add(wide_int a, wide_int b) {
  wide_int r;
  if (__builtin_add_overflow(a, b, &r)) throw CompositionOverflow("polynomial coefficient exceeds 128 bits");
  return r;
}

wide_int checked_mul(wide_int a, wide_int b) {
  wide_int r;
  if (__builtin_mul_overflow(a, b, &r)) throw CompositionOverflow("polynomial coefficient exceeds 128 bits");
  return r;
}

wide_int abs_wide(wide_int a) { return a < 0 ? -a : a; }

wide_int gcd_wide(wide_int a, wide_int b) {
  a = abs_wide(a);
  b = abs_wide(b);
  while (b != 0) {
    wide_int t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Enclosure enclose_ratio(wide_int num, wide_int den) {
  bool exact_num = false, exact_den = false;
  const double n = to_double(num, &exact_num);
  const double d = to_double(den, &exact_den);
  if (exact_num && den == 1) return Enclosure(n);
  const double q = n / d;
  return {round_down(round_down(q)), round_up(round_up(q))};
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto fail = [&] { return ParseError(0, "'" + std::string(text) + "' is not a rational number"); };
  if (text.empty()) throw fail();
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational r;
    if (!parse_wide(text.substr(0, slash), r.num) || !parse_wide(text.substr(slash + 1), r.den) ||
        r.den == 0) {
      throw fail();
    }
    if (r.den < 0) {
      r.num = -r.num;
      r.den = -r.den;
    }
    return r;
  }
  // decimal with optional exponent, converted exactly
  std::size_t i = 0;
  bool negative = false;
  if (text[i] == '+' || text[i] == '-') negative = text[i++] == '-';
  wide_int num = 0, den = 1;
  bool digits = false;
  for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
    num = checked_add(checked_mul(num, 10), text[i] - '0');
    digits = true;
  }
  if (i < text.size() && text[i] == '.') {
    for (++i; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
      num = checked_add(checked_mul(num, 10), text[i] - '0');
      den = checked_mul(den, 10);
      digits = true;
    }
  }
  if (!digits) throw fail();
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    wide_int e = 0;
    if (!parse_wide(text.substr(i + 1), e) || e > 30 || e < -30) throw fail();
    for (; e > 0; --e) num = checked_mul(num, 10);
    for (; e < 0; ++e) den = checked_mul(den, 10);
    i = text.size();
  }
  if (i != text.size()) throw fail();
  const wide_int g = gcd_wide(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return {negative ? -num : num, den};
}

Poly2 Poly2::constant(wide_int num, wide_int den) {
  if (den == 0) throw DomainError("zero denominator");
  Poly2 p;
  p.num_ = {{num}};
  p.den_ = den;
  p.normalize();
  return p;
}

Poly2 Poly2::u() {
  Poly2 p;
  p.num_ = {{0}, {1}};
  return p;
}

Poly2 Poly2::v() {
  Poly2 p;
  p.num_ = {{0, 1}};
  return p;
}

Poly2 Poly2::univariate_u(const std::vector<wide_int>& coeffs) {
  Poly2 p;
  for (auto c : coeffs) p.num_.push_back({c});
  p.normalize();
  return p;
}

Poly2 Poly2::univariate_v(const std::vector<wide_int>& coeffs) {
  Poly2 p;
  p.num_ = {coeffs};
  p.normalize();
  return p;
}

Poly2 Poly2::from_graded_lex(const std::vector<Rational>& coeffs) {
  Poly2 out;
  std::size_t k = 0;
  for (int d = 0; k < coeffs.size(); ++d) {
    for (int j = 0; j <= d && k < coeffs.size(); ++j, ++k) {
      // degree d block: u^d, u^{d-1} v, ..., v^d
      Poly2 term = Poly2::constant(coeffs[k].num, coeffs[k].den);
      if (term.is_zero()) continue;
      out = out + term * Poly2::u().pow(static_cast<unsigned>(d - j)) * Poly2::v().pow(static_cast<unsigned>(j));
    }
  }
  return out;
}

void Poly2::normalize() {
  if (den_ < 0) {
    den_ = -den_;
    for (auto& row : num_) {
      for (auto& c : row) c = -c;
    }
  }
  int du = -1, dv = -1;
  for (std::size_t i = 0; i < num_.size(); ++i) {
    for (std::size_t j = 0; j < num_[i].size(); ++j) {
      if (num_[i][j] != 0) {
        du = std::max(du, static_cast<int>(i));
        dv = std::max(dv, static_cast<int>(j));
      }
    }
  }
  if (du < 0) {
    num_.clear();
    den_ = 1;
    return;
  }
  num_.resize(static_cast<std::size_t>(du) + 1);
  for (auto& row : num_) row.resize(static_cast<std::size_t>(dv) + 1, 0);
  wide_int g = den_;
  for (const auto& row : num_) {
    for (auto c : row) g = gcd_wide(g, c);
  }
  if (g > 1) {
    den_ /= g;
    for (auto& row : num_) {
      for (auto& c : row) c /= g;
    }
  }
}

int Poly2::degree_u() const { return static_cast<int>(num_.size()) - 1; }

int Poly2::degree_v() const { return num_.empty() ? -1 : static_cast<int>(num_[0].size()) - 1; }

int Poly2::total_degree() const {
  int d = -1;
  for (std::size_t i = 0; i < num_.size(); ++i) {
    for (std::size_t j = 0; j < num_[i].size(); ++j) {
      if (num_[i][j] != 0) d = std::max(d, static_cast<int>(i + j));
    }
  }
  return d;
}

wide_int Poly2::numerator(int i, int j) const {
  if (i < 0 || j < 0 || i > degree_u() || j > degree_v()) return 0;
  return num_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
}

Poly2 Poly2::operator-() const {
  Poly2 p = *this;
  for (auto& row : p.num_) {
    for (auto& c : row) c = -c;
  }
  return p;
}

Poly2 operator+(const Poly2& a, const Poly2& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const wide_int g = gcd_wide(a.den_, b.den_);
  const wide_int fa = b.den_ / g, fb = a.den_ / g;
  Poly2 r;
  r.den_ = checked_mul(a.den_, fa);
  const auto du = static_cast<std::size_t>(std::max(a.degree_u(), b.degree_u()) + 1);
  const auto dv = static_cast<std::size_t>(std::max(a.degree_v(), b.degree_v()) + 1);
  r.num_.assign(du, std::vector<wide_int>(dv, 0));
  for (std::size_t i = 0; i < a.num_.size(); ++i) {
    for (std::size_t j = 0; j < a.num_[i].size(); ++j) r.num_[i][j] = checked_mul(a.num_[i][j], fa);
  }
  for (std::size_t i = 0; i < b.num_.size(); ++i) {
    for (std::size_t j = 0; j < b.num_[i].size(); ++j) {
      r.num_[i][j] = checked_add(r.num_[i][j], checked_mul(b.num_[i][j], fb));
    }
  }
  r.normalize();
  return r;
}

Poly2 operator-(const Poly2& a, const Poly2& b) { return a + (-b); }

Poly2 operator*(const Poly2& a, const Poly2& b) {
  if (a.is_zero() || b.is_zero()) return {};
  Poly2 r;
  r.den_ = checked_mul(a.den_, b.den_);
  r.num_.assign(a.num_.size() + b.num_.size() - 1,
                std::vector<wide_int>(a.num_[0].size() + b.num_[0].size() - 1, 0));
  for (std::size_t i = 0; i < a.num_.size(); ++i) {
    for (std::size_t j = 0; j < a.num_[i].size(); ++j) {
      if (a.num_[i][j] == 0) continue;
      for (std::size_t k = 0; k < b.num_.size(); ++k) {
        for (std::size_t l = 0; l < b.num_[k].size(); ++l) {
          if (b.num_[k][l] == 0) continue;
          r.num_[i + k][j + l] = checked_add(r.num_[i + k][j + l], checked_mul(a.num_[i][j], b.num_[k][l]));
        }
      }
    }
  }
  r.normalize();
  return r;
}

Poly2 Poly2::scaled(Rational q) const { return *this * Poly2::constant(q.num, q.den); }

Poly2 Poly2::pow(unsigned e) const {
  Poly2 result = Poly2::constant(1);
  Poly2 base = *this;
  while (e) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

bool Poly2::operator==(const Poly2& other) const { return den_ == other.den_ && num_ == other.num_; }

Poly2 Poly2::compose(const Poly2& x, const Poly2& y) const {
  if (is_zero()) return {};
  // Horner in u over rows, each row a Horner polynomial in v.
  Poly2 result;
  for (std::size_t i = num_.size(); i-- > 0;) {
    Poly2 row;
    for (std::size_t j = num_[i].size(); j-- > 0;) {
      row = row * y + Poly2::constant(num_[i][j]);
    }
    result = result * x + row;
  }
  return result.scaled({1, den_});
}

Poly2 Poly2::swapped() const {
  Poly2 p;
  p.den_ = den_;
  if (is_zero()) return p;
  p.num_.assign(num_[0].size(), std::vector<wide_int>(num_.size(), 0));
  for (std::size_t i = 0; i < num_.size(); ++i) {
    for (std::size_t j = 0; j < num_[i].size(); ++j) p.num_[j][i] = num_[i][j];
  }
  p.normalize();
  return p;
}

Poly2 Poly2::sign_flipped(int s, int t) const {
  Poly2 p = *this;
  for (std::size_t i = 0; i < p.num_.size(); ++i) {
    for (std::size_t j = 0; j < p.num_[i].size(); ++j) {
      const bool flip = (s < 0 && (i % 2)) != (t < 0 && (j % 2));
      if (flip) p.num_[i][j] = -p.num_[i][j];
    }
  }
  return p;
}

Poly2 Poly2::derivative_u() const {
  Poly2 p;
  p.den_ = den_;
  for (std::size_t i = 1; i < num_.size(); ++i) {
    std::vector<wide_int> row(num_[i].size());
    for (std::size_t j = 0; j < row.size(); ++j) row[j] = checked_mul(num_[i][j], static_cast<wide_int>(i));
    p.num_.push_back(std::move(row));
  }
  p.normalize();
  return p;
}

Poly2 Poly2::derivative_v() const { return swapped().derivative_u().swapped(); }

bool Poly2::separable(std::vector<wide_int>& a, std::vector<wide_int>& b) const {
  if (is_zero()) return false;
  std::size_t i0 = 0, j0 = 0;
  bool found = false;
  for (std::size_t i = 0; i < num_.size() && !found; ++i) {
    for (std::size_t j = 0; j < num_[i].size(); ++j) {
      if (num_[i][j] != 0) {
        i0 = i;
        j0 = j;
        found = true;
        break;
      }
    }
  }
  const wide_int pivot = num_[i0][j0];
  for (std::size_t i = 0; i < num_.size(); ++i) {
    for (std::size_t j = 0; j < num_[i].size(); ++j) {
      wide_int lhs, rhs;
      if (__builtin_mul_overflow(num_[i][j], pivot, &lhs) ||
          __builtin_mul_overflow(num_[i][j0], num_[i0][j], &rhs) || lhs != rhs) {
        return false;
      }
    }
  }
  a.clear();
  b.clear();
  for (std::size_t i = 0; i < num_.size(); ++i) a.push_back(num_[i][j0]);
  for (std::size_t j = 0; j < num_[i0].size(); ++j) b.push_back(num_[i0][j]);
  return true;
}

double Poly2::evaluate(double u, double v) const {
  double result = 0;
  for (std::size_t i = num_.size(); i-- > 0;) {
    double row = 0;
    for (std::size_t j = num_[i].size(); j-- > 0;) row = row * v + to_double(num_[i][j]);
    result = result * u + row;
  }
  return result / to_double(den_);
}

std::string Poly2::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  const int d = total_degree();
  for (int deg = d; deg >= 0; --deg) {
    for (int j = 0; j <= deg; ++j) {
      const int i = deg - j;
      wide_int c = numerator(i, j);
      if (c == 0) continue;
      wide_int g = gcd_wide(c, den_);
      wide_int n = c / g, dd = den_ / g;
      os << (n < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
      n = abs_wide(n);
      first = false;
      const bool mono = i > 0 || j > 0;
      if (n != 1 || dd != 1 || !mono) {
        os << jst::to_string(n);
        if (dd != 1) os << "/" << jst::to_string(dd);
        if (mono) os << "*";
      }
      if (i > 0) os << "u" << (i > 1 ? "^" + std::to_string(i) : "");
      if (i > 0 && j > 0) os << "*";
      if (j > 0) os << "v" << (j > 1 ? "^" + std::to_string(j) : "");
    }
  }
  return os.str();
}

namespace {

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : s_(text) {}

  Poly2 parse() {
    Poly2 p = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(0, "in polynomial '" + std::string(s_) + "' at column " +
                            std::to_string(pos_ + 1) + ": " + what);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  bool eat(char c) {
    if (peek(c)) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool starts_factor() {
    skip();
    if (pos_ >= s_.size()) return false;
    char c = s_[pos_];
    return c == '(' || c == 'u' || c == 'v' || c == 'U' || std::isdigit(static_cast<unsigned char>(c)) || c == '.';
  }

  Poly2 expr() {
    Poly2 p = term();
    for (;;) {
      if (eat('+')) p = p + term();
      else if (eat('-')) p = p - term();
      else return p;
    }
  }

  Poly2 term() {
    Poly2 p = unary();
    for (;;) {
      if (eat('*')) {
        p = p * unary();
      } else if (eat('/')) {
        Rational r = number();
        if (r.num == 0) fail("division by zero");
        p = p.scaled({r.den, r.num});
      } else if (starts_factor()) {
        p = p * power();  // implicit product, as in "2u" or "u v"
      } else {
        return p;
      }
    }
  }

  Poly2 unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  Poly2 power() {
    Poly2 base = primary();
    if (eat('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("exponent must be a nonnegative integer");
      const int e = std::stoi(std::string(s_.substr(start, pos_ - start)));
      if (e > 256) fail("exponent too large");
      return base.pow(static_cast<unsigned>(e));
    }
    return base;
  }

  Rational number() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    if (start == pos_) fail("expected a number");
    return parse_rational(s_.substr(start, pos_ - start));
  }

  Poly2 primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Poly2 p = expr();
      if (!eat(')')) fail("expected ')'");
      return p;
    }
    if (c == 'u') {
      ++pos_;
      return Poly2::u();
    }
    if (c == 'v') {
      ++pos_;
      return Poly2::v();
    }
    if (c == 'U') {
      ++pos_;
      eat('_');
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected Chebyshev degree after 'U'");
      const int m = std::stoi(std::string(s_.substr(start, pos_ - start)));
      if (m > 64) fail("Chebyshev degree above 64");
      if (!eat('(')) fail("expected '(' after U" + std::to_string(m));
      Poly2 x = expr();
      if (!eat(')')) fail("expected ')'");
      Poly2 prev = Poly2::constant(1);
      if (m == 0) return prev;
      Poly2 two_x = x.scaled({2, 1});
      Poly2 cur = two_x;
      for (int k = 1; k < m; ++k) {
        Poly2 next = two_x * cur - prev;
        prev = std::move(cur);
        cur = std::move(next);
      }
      return cur;
    }
    Rational r = number();
    return Poly2::constant(r.num, r.den);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Poly2 parse_poly(std::string_view text) { return ExprParser(text).parse(); }

PolyEnclosure::PolyEnclosure(const Poly2& p) {
  auto build = [](const Poly2& q) {
    Matrix m;
    for (const auto& row : q.numerators()) {
      std::vector<Enclosure> r;
      for (auto c : row) r.push_back(enclose_ratio(c, q.denominator()));
      m.push_back(std::move(r));
    }
    return m;
  };
  c_ = build(p);
  cu_ = build(p.derivative_u());
  cv_ = build(p.derivative_v());
  for (const auto& row : p.numerators()) {
    std::vector<double> r;
    for (auto c : row) r.push_back(to_double(c) / to_double(p.denominator()));
    mid_.push_back(std::move(r));
  }
  depends_u_ = p.degree_u() > 0;
  depends_v_ = p.degree_v() > 0;
}

Enclosure PolyEnclosure::horner(const Matrix& m, Enclosure u, Enclosure v) {
  if (m.empty()) return Enclosure(0.0);
  Enclosure result(0.0);
  for (std::size_t i = m.size(); i-- > 0;) {
    Enclosure row(0.0);
    for (std::size_t j = m[i].size(); j-- > 0;) row = row * v + m[i][j];
    result = result * u + row;
  }
  return result;
}

Enclosure PolyEnclosure::natural(Enclosure u, Enclosure v) const { return horner(c_, u, v); }

Enclosure PolyEnclosure::du(Enclosure u, Enclosure v) const { return horner(cu_, u, v); }

Enclosure PolyEnclosure::dv(Enclosure u, Enclosure v) const { return horner(cv_, u, v); }

Enclosure PolyEnclosure::tight(Enclosure u, Enclosure v) const {
  const Enclosure nat = natural(u, v);
  // On point-like boxes the natural form is already rounding-limited.
  constexpr double kPointWidth = 1e-12;
  if (!nat.contains_zero() || (u.width() <= kPointWidth && v.width() <= kPointWidth)) return nat;
  const double cu = u.mid(), cv = v.mid();
  Enclosure mv = natural(Enclosure(cu), Enclosure(cv)) + du(u, v) * (u - Enclosure(cu)) +
                 dv(u, v) * (v - Enclosure(cv));
  return intersect(nat, mv);
}

double PolyEnclosure::approx(double u, double v) const {
  double result = 0;
  for (std::size_t i = mid_.size(); i-- > 0;) {
    double row = 0;
    for (std::size_t j = mid_[i].size(); j-- > 0;) row = row * v + mid_[i][j];
    result = result * u + row;
  }
  return result;
}

}  // namespace jst

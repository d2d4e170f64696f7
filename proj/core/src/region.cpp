#include "jst/region.hpp"

#include <cctype>
#include <charconv>
#include <functional>
#include <cmath>
#include <sstream>

#include "jst/chebyshev.hpp"
#include "jst/errors.hpp"

namespace jst {
namespace {

Rational rational_from_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return parse_rational(std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)));
}

Poly2 from_double(double x) {
  Rational r = rational_from_double(x);
  return Poly2::constant(r.num, r.den);
}

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

double parse_real(const std::string& s) {
  if (s == "inf" || s == "+inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  if (s == "-inf" || s == "-infinity") return -std::numeric_limits<double>::infinity();
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ParseError(0, "'" + s + "' is not a real number");
  }
  return v;
}

std::vector<double> parse_reals(const std::string& s, std::size_t expected) {
  std::vector<double> out;
  for (const auto& part : split(s, ',')) out.push_back(parse_real(part));
  if (out.size() != expected) {
    throw ParseError(0, "expected " + std::to_string(expected) + " comma-separated numbers in '" + s + "'");
  }
  return out;
}

std::pair<int, int> parse_pair(const std::string& s) {
  auto v = split(s, ',');
  if (v.size() != 2) throw ParseError(0, "expected 'm,n' in '" + s + "'");
  int m = 0, n = 0;
  auto r1 = std::from_chars(v[0].data(), v[0].data() + v[0].size(), m);
  auto r2 = std::from_chars(v[1].data(), v[1].data() + v[1].size(), n);
  if (r1.ec != std::errc() || r1.ptr != v[0].data() + v[0].size() || r2.ec != std::errc() ||
      r2.ptr != v[1].data() + v[1].size() || m < 0 || n < 0) {
    throw ParseError(0, "expected nonnegative integers 'm,n' in '" + s + "'");
  }
  return {m, n};
}

Interval parse_interval(const std::string& s) {
  auto t = trim(s);
  if (t.size() < 5) throw ParseError(0, "bad interval '" + s + "'");
  Interval iv;
  const char open = t.front(), close = t.back();
  if ((open != '(' && open != '[') || (close != ')' && close != ']')) {
    throw ParseError(0, "interval '" + s + "' must look like (lo,hi] or [lo,hi)");
  }
  auto ends = parse_reals(t.substr(1, t.size() - 2), 2);
  iv.lo = ends[0];
  iv.hi = ends[1];
  iv.lo_closed = open == '[';
  iv.hi_closed = close == ']';
  if (!(iv.lo <= iv.hi)) throw ParseError(0, "interval '" + s + "' is empty or reversed");
  return iv;
}

// Appends `sub` to `constraints` and returns its tree with shifted indices.
RegionNode graft(const PolynomialRegion& sub, std::vector<Constraint>& constraints) {
  const std::size_t offset = constraints.size();
  for (const auto& c : sub.constraints()) constraints.push_back(c);
  std::function<RegionNode(const RegionNode&)> shift = [&](const RegionNode& n) {
    RegionNode out = n;
    if (n.kind == RegionNode::Kind::Leaf) out.constraint += offset;
    out.children.clear();
    for (const auto& ch : n.children) out.children.push_back(shift(ch));
    return out;
  };
  return shift(sub.root());
}

}  // namespace

std::string_view to_string(Cmp c) {
  switch (c) {
    case Cmp::Less: return "<";
    case Cmp::LessEq: return "<=";
    case Cmp::Greater: return ">";
    case Cmp::GreaterEq: return ">=";
  }
  return "?";
}

Cmp parse_cmp(std::string_view text) {
  if (text == "<") return Cmp::Less;
  if (text == "<=" || text == "≤") return Cmp::LessEq;
  if (text == ">") return Cmp::Greater;
  if (text == ">=" || text == "≥") return Cmp::GreaterEq;
  throw ParseError(0, "unknown comparison '" + std::string(text) + "'");
}

Cmp negate(Cmp c) {
  switch (c) {
    case Cmp::Less: return Cmp::GreaterEq;
    case Cmp::LessEq: return Cmp::Greater;
    case Cmp::Greater: return Cmp::LessEq;
    case Cmp::GreaterEq: return Cmp::Less;
  }
  return c;
}

bool Constraint::holds(double value) const {
  switch (cmp) {
    case Cmp::Less: return value < bound;
    case Cmp::LessEq: return value <= bound;
    case Cmp::Greater: return value > bound;
    case Cmp::GreaterEq: return value >= bound;
  }
  return false;
}

std::string Constraint::to_string() const {
  std::ostringstream os;
  os << poly.to_string() << ' ' << jst::to_string(cmp) << ' ' << bound;
  return os.str();
}

RegionNode RegionNode::leaf(std::size_t index) {
  RegionNode n;
  n.kind = Kind::Leaf;
  n.constraint = index;
  return n;
}

Truth evaluate(const RegionNode& node, const std::vector<Truth>& truths) {
  switch (node.kind) {
    case RegionNode::Kind::Leaf:
      return truths[node.constraint];
    case RegionNode::Kind::All: {
      Truth acc = Truth::True;
      for (const auto& ch : node.children) {
        Truth t = evaluate(ch, truths);
        if (t == Truth::False) return Truth::False;
        if (t == Truth::Unknown) acc = Truth::Unknown;
      }
      return acc;
    }
    case RegionNode::Kind::Any: {
      Truth acc = Truth::False;
      for (const auto& ch : node.children) {
        Truth t = evaluate(ch, truths);
        if (t == Truth::True) return Truth::True;
        if (t == Truth::Unknown) acc = Truth::Unknown;
      }
      return acc;
    }
  }
  return Truth::Unknown;
}

PolynomialRegion::PolynomialRegion(std::vector<Constraint> constraints, RegionNode root,
                                   std::string description)
    : constraints_(std::move(constraints)), root_(std::move(root)), description_(std::move(description)) {
  for (const auto& c : constraints_) {
    if (c.poly.is_zero()) throw DegenerateError("constraint polynomial is identically zero");
  }
  if (description_.empty()) {
    std::ostringstream os;
    for (std::size_t i = 0; i < constraints_.size(); ++i) os << (i ? "; " : "") << constraints_[i].to_string();
    description_ = constraints_.empty() ? "full square" : os.str();
  }
}

PolynomialRegion PolynomialRegion::all_of(std::vector<Constraint> constraints, std::string description) {
  RegionNode root;
  root.kind = RegionNode::Kind::All;
  for (std::size_t i = 0; i < constraints.size(); ++i) root.children.push_back(RegionNode::leaf(i));
  return PolynomialRegion(std::move(constraints), std::move(root), std::move(description));
}

bool PolynomialRegion::contains(double u, double v) const {
  if (!(std::fabs(u) <= 2 && std::fabs(v) <= 2)) return false;
  std::vector<Truth> truths;
  truths.reserve(constraints_.size());
  for (const auto& c : constraints_) {
    truths.push_back(c.holds(c.poly.evaluate(u, v)) ? Truth::True : Truth::False);
  }
  return evaluate(root_, truths) == Truth::True;
}

PolynomialRegion PolynomialRegion::complement() const {
  std::vector<Constraint> flipped = constraints_;
  for (auto& c : flipped) c.cmp = negate(c.cmp);
  std::function<RegionNode(const RegionNode&)> dual = [&](const RegionNode& n) {
    RegionNode out = n;
    if (n.kind == RegionNode::Kind::All) out.kind = RegionNode::Kind::Any;
    else if (n.kind == RegionNode::Kind::Any) out.kind = RegionNode::Kind::All;
    out.children.clear();
    for (const auto& ch : n.children) out.children.push_back(dual(ch));
    return out;
  };
  return PolynomialRegion(std::move(flipped), dual(root_), "complement of " + description_);
}

std::vector<BoundaryCurve> PolynomialRegion::boundary_curves() const {
  std::vector<BoundaryCurve> out;
  for (const auto& c : constraints_) {
    if (!c.poly.is_constant()) out.push_back({c.poly, c.bound});
  }
  out.push_back({Poly2::u(), -2});
  out.push_back({Poly2::u(), 2});
  out.push_back({Poly2::v(), -2});
  out.push_back({Poly2::v(), 2});
  return out;
}

int PolynomialRegion::alpha() const { return static_cast<int>(boundary_curves().size()); }

int PolynomialRegion::beta() const {
  int beta = 0;
  for (const auto& curve : boundary_curves()) {
    if (curve.poly.degree_v() <= 0) continue;  // union of vertical lines
    beta = std::max(beta, curve.poly.total_degree());
  }
  return beta;
}

double PolynomialRegion::total_length() const {
  double total = 16;
  for (const auto& c : constraints_) {
    if (!c.poly.is_constant()) total += curve_length(c.poly, c.bound);
  }
  return total;
}

RegionEvaluator::RegionEvaluator(const PolynomialRegion& region) : region_(&region) {
  for (const auto& c : region.constraints()) {
    if (c.form) {
      polys_.emplace_back(c.form->outer);
      inner_.push_back(std::make_shared<const Inner>(
          Inner{HalfChebyshevRange(c.form->m), HalfChebyshevRange(c.form->n)}));
    } else {
      polys_.emplace_back(c.poly);
      inner_.push_back(nullptr);
    }
  }
}

bool RegionEvaluator::wants_positive(std::size_t i) const {
  const Cmp c = region_->constraints()[i].cmp;
  return c == Cmp::Greater || c == Cmp::GreaterEq;
}

Enclosure RegionEvaluator::value(std::size_t i, Enclosure u, Enclosure v) const {
  const Enclosure bound(region_->constraints()[i].bound);
  if (const auto& in = inner_[i]) return polys_[i].tight(in->x.value(u), in->y.value(v)) - bound;
  return polys_[i].tight(u, v) - bound;
}

Enclosure RegionEvaluator::du(std::size_t i, Enclosure u, Enclosure v) const {
  if (const auto& in = inner_[i]) {
    return polys_[i].du(in->x.value(u), in->y.value(v)) * in->x.derivative(u);
  }
  return polys_[i].du(u, v);
}

Enclosure RegionEvaluator::dv(std::size_t i, Enclosure u, Enclosure v) const {
  if (const auto& in = inner_[i]) {
    return polys_[i].dv(in->x.value(u), in->y.value(v)) * in->y.derivative(v);
  }
  return polys_[i].dv(u, v);
}

Truth RegionEvaluator::truth(std::size_t i, Enclosure u, Enclosure v, bool strict) const {
  Enclosure e = value(i, u, v);
  if (!wants_positive(i)) e = -e;
  if (strict) {
    if (e.lo > 0) return Truth::True;
    if (e.hi < 0) return Truth::False;
    return Truth::Unknown;
  }
  if (e.lo >= 0) return Truth::True;
  if (e.hi <= 0) return Truth::False;
  return Truth::Unknown;
}

Truth RegionEvaluator::classify(Enclosure u, Enclosure v, bool strict, std::vector<Truth>& scratch) const {
  scratch.resize(polys_.size());
  for (std::size_t i = 0; i < polys_.size(); ++i) scratch[i] = truth(i, u, v, strict);
  return evaluate(region_->root(), scratch);
}

PolynomialRegion full_square() { return PolynomialRegion(); }

PolynomialRegion rect_region(double u0, double u1, double v0, double v1) {
  if (!(u0 <= u1 && v0 <= v1)) throw DomainError("rectangle corners are reversed");
  std::vector<Constraint> cs{{Poly2::u(), Cmp::GreaterEq, u0},
                             {Poly2::u(), Cmp::LessEq, u1},
                             {Poly2::v(), Cmp::GreaterEq, v0},
                             {Poly2::v(), Cmp::LessEq, v1}};
  std::ostringstream os;
  os << "rect [" << u0 << "," << u1 << "]x[" << v0 << "," << v1 << "]";
  return PolynomialRegion::all_of(std::move(cs), os.str());
}

PolynomialRegion disk_region(double cu, double cv, double r) {
  if (!(r > 0)) throw DomainError("disk radius must be positive");
  const Poly2 du = Poly2::u() - from_double(cu);
  const Poly2 dv = Poly2::v() - from_double(cv);
  Poly2 p = du * du + dv * dv;
  std::ostringstream os;
  os << "disk center (" << cu << "," << cv << ") radius " << r;
  return PolynomialRegion::all_of({{p, Cmp::Less, r * r}}, os.str());
}

Poly2 compose_chebyshev(const Poly2& p, int m, int n) {
  const Poly2 x = Poly2::univariate_u(u_poly_half(m));
  const Poly2 y = Poly2::univariate_v(u_poly_half(n));
  return p.compose(x, y);
}

PolynomialRegion sign_product_region(int m, int n) {
  if (m == 0 && n == 0) throw DomainError("sign product needs (m,n) != (0,0)");
  Poly2 p = Poly2::univariate_u(u_poly_half(m)) * Poly2::univariate_v(u_poly_half(n));
  return PolynomialRegion::all_of(
      {{p, Cmp::Greater, 0, ChebyshevForm{Poly2::u() * Poly2::v(), m, n}}},
      "sign product U_" + std::to_string(m) + "(u/2) U_" + std::to_string(n) + "(v/2) > 0");
}

PolynomialRegion dominance_region(int m, int n) {
  Poly2 p = Poly2::univariate_u(u_poly_half(m)) - Poly2::univariate_v(u_poly_half(n));
  if (p.is_zero()) throw DegenerateError("U_m(u/2) - U_n(v/2) is identically zero");
  return PolynomialRegion::all_of(
      {{p, Cmp::Less, 0, ChebyshevForm{Poly2::u() - Poly2::v(), m, n}}},
      "dominance U_" + std::to_string(m) + "(u/2) < U_" + std::to_string(n) + "(v/2)");
}

PolynomialRegion region_from_poly_interval(const Poly2& p, const Interval& interval, int m, int n) {
  if (m < 0 || n < 0 || (m == 0 && n == 0)) throw DomainError("poly-interval needs (m,n) != (0,0)");
  if (p.is_constant()) throw DomainError("poly-interval needs a non-constant polynomial");
  Poly2 q = compose_chebyshev(p, m, n);
  std::vector<Constraint> cs;
  const ChebyshevForm form{p, m, n};
  if (std::isfinite(interval.lo)) {
    cs.push_back({q, interval.lo_closed ? Cmp::GreaterEq : Cmp::Greater, interval.lo, form});
  }
  if (std::isfinite(interval.hi)) {
    cs.push_back({q, interval.hi_closed ? Cmp::LessEq : Cmp::Less, interval.hi, form});
  }
  std::ostringstream os;
  os << "P(U_" << m << "(u/2),U_" << n << "(v/2)) in " << (interval.lo_closed ? '[' : '(') << interval.lo << ","
     << interval.hi << (interval.hi_closed ? ']' : ')') << " with P = " << p.to_string();
  return PolynomialRegion::all_of(std::move(cs), os.str());
}

namespace {

PolynomialRegion shorthand(const std::string& kind, const std::string& args) {
  if (kind == "full") return full_square();
  if (kind == "rect") {
    auto v = parse_reals(args, 4);
    return rect_region(v[0], v[1], v[2], v[3]);
  }
  if (kind == "disk") {
    if (trim(args).empty()) return disk_region(0, 0, 1);
    auto v = parse_reals(args, 3);
    return disk_region(v[0], v[1], v[2]);
  }
  if (kind == "sign-product") {
    auto [m, n] = parse_pair(args);
    return sign_product_region(m, n);
  }
  if (kind == "dominance") {
    auto [m, n] = parse_pair(args);
    return dominance_region(m, n);
  }
  if (kind == "poly-interval") {
    auto parts = split(args, ';');
    if (parts.size() != 3) throw ParseError(0, "poly-interval needs '<expr>; <interval>; m,n'");
    auto [m, n] = parse_pair(parts[2]);
    return region_from_poly_interval(parse_poly(parts[0]), parse_interval(parts[1]), m, n);
  }
  throw ParseError(0, "unknown region kind '" + kind + "'");
}

Constraint parse_constraint(const std::string& body, bool expression) {
  const auto cmp_at = body.find(" cmp ");
  const auto bound_at = body.find(" bound ");
  if (cmp_at == std::string::npos || bound_at == std::string::npos || bound_at < cmp_at) {
    throw ParseError(0, "expected '... cmp <op> bound <real>'");
  }
  const std::string poly_text = trim(std::string_view(body).substr(0, cmp_at));
  const std::string op = trim(std::string_view(body).substr(cmp_at + 5, bound_at - cmp_at - 5));
  const std::string bound = trim(std::string_view(body).substr(bound_at + 7));
  Constraint c;
  if (expression) {
    c.poly = parse_poly(poly_text);
  } else {
    std::vector<Rational> coeffs;
    std::string flat = poly_text;
    for (auto& ch : flat) {
      if (ch == ';') ch = ',';
    }
    for (const auto& item : split(flat, ',')) {
      if (item.empty()) throw ParseError(0, "empty coefficient in '" + poly_text + "'");
      coeffs.push_back(parse_rational(item));
    }
    c.poly = Poly2::from_graded_lex(coeffs);
  }
  c.cmp = parse_cmp(op);
  c.bound = parse_real(bound);
  if (c.poly.is_zero()) throw DegenerateError("constraint polynomial is identically zero");
  return c;
}

}  // namespace

PolynomialRegion parse_region(std::string_view text) {
  std::vector<Constraint> constraints;
  std::vector<RegionNode> stack(1);
  stack[0].kind = RegionNode::Kind::All;
  std::size_t line_no = 0;
  while (!text.empty()) {
    auto eol = text.find('\n');
    std::string line(text.substr(0, eol));
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    try {
      if (line == "}") {
        if (stack.size() == 1) throw ParseError(0, "unmatched '}'");
        RegionNode done = std::move(stack.back());
        stack.pop_back();
        stack.back().children.push_back(std::move(done));
        continue;
      }
      auto space = line.find_first_of(" \t");
      const std::string head = line.substr(0, space);
      const std::string rest = space == std::string::npos ? "" : trim(std::string_view(line).substr(space));
      if ((head == "all" || head == "any") && rest == "{") {
        RegionNode n;
        n.kind = head == "all" ? RegionNode::Kind::All : RegionNode::Kind::Any;
        stack.push_back(std::move(n));
      } else if (head == "poly" || head == "expr") {
        constraints.push_back(parse_constraint(" " + rest, head == "expr"));
        stack.back().children.push_back(RegionNode::leaf(constraints.size() - 1));
      } else {
        stack.back().children.push_back(graft(shorthand(head, rest), constraints));
      }
    } catch (const ParseError& e) {
      if (e.line() != 0) throw;
      throw ParseError(line_no, e.what());
    } catch (const Error& e) {
      throw ParseError(line_no, e.what());
    }
  }
  if (stack.size() != 1) throw ParseError(line_no, "unclosed '{'");
  return PolynomialRegion(std::move(constraints), std::move(stack[0]));
}

PolynomialRegion parse_region_shorthand(std::string_view spec) {
  const std::string s = trim(spec);
  const auto colon = s.find(':');
  const std::string kind = s.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : s.substr(colon + 1);
  return shorthand(kind, args);
}

}  // namespace jst

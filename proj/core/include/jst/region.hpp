#pragma once

// Polynomial regions of [-2,2]^2 and their Hypothesis-1 parameters.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jst/chebyshev.hpp"
#include "jst/enclosure.hpp"
#include "jst/interval.hpp"
#include "jst/polynomial.hpp"

namespace jst {

enum class Cmp { Less, LessEq, Greater, GreaterEq };

std::string_view to_string(Cmp c);
Cmp parse_cmp(std::string_view text);
Cmp negate(Cmp c);

/// poly = outer(U_m(u/2), U_n(v/2)), kept so boxes can be bounded through the inner maps.
struct ChebyshevForm {
  Poly2 outer;
  int m = 0;
  int n = 0;
};

/// poly cmp bound.
struct Constraint {
  Poly2 poly;
  Cmp cmp = Cmp::Greater;
  double bound = 0;
  std::optional<ChebyshevForm> form;

  bool holds(double value) const;
  std::string to_string() const;
};

enum class Truth : std::uint8_t { False, True, Unknown };

struct RegionNode {
  enum class Kind { Leaf, All, Any };
  Kind kind = Kind::All;
  std::size_t constraint = 0;  // Leaf only
  std::vector<RegionNode> children;

  static RegionNode leaf(std::size_t index);
};

/// Kleene evaluation of a tree over per-constraint truth values.
Truth evaluate(const RegionNode& node, const std::vector<Truth>& truths);

/// A curve Gamma_t = {poly = level} within the square.
struct BoundaryCurve {
  Poly2 poly;
  double level = 0;
};

class PolynomialRegion {
 public:
  /// The full square.
  PolynomialRegion() = default;
  /// Throws DegenerateError if a constraint polynomial is identically zero.
  PolynomialRegion(std::vector<Constraint> constraints, RegionNode root, std::string description = "");
  static PolynomialRegion all_of(std::vector<Constraint> constraints, std::string description = "");

  const std::vector<Constraint>& constraints() const { return constraints_; }
  const RegionNode& root() const { return root_; }
  const std::string& description() const { return description_; }

  /// Membership of a point of the square, evaluated in double precision.
  bool contains(double u, double v) const;

  /// Same region with every comparison reversed (the complement within the square).
  PolynomialRegion complement() const;

  /// Constraint curves followed by the four square edges.
  std::vector<BoundaryCurve> boundary_curves() const;
  /// Number of boundary curves (constraints plus the four edges).
  int alpha() const;
  /// Largest total degree over curves that are not unions of vertical lines.
  int beta() const;
  /// Sum of curve_length over the constraint curves plus 16 for the edges.
  double total_length() const;

 private:
  std::vector<Constraint> constraints_;
  RegionNode root_;
  std::string description_ = "full square";
};

/// Certified per-constraint truth over boxes.
class RegionEvaluator {
 public:
  explicit RegionEvaluator(const PolynomialRegion& region);

  std::size_t size() const { return polys_.size(); }
  /// Enclosure of poly - bound over the box.
  Enclosure value(std::size_t i, Enclosure u, Enclosure v) const;
  /// Partial derivatives of poly over the box.
  Enclosure du(std::size_t i, Enclosure u, Enclosure v) const;
  Enclosure dv(std::size_t i, Enclosure u, Enclosure v) const;
  /// Strict: True only if the constraint holds with strict inequality on the whole box
  /// (so the box lies in the interior). Otherwise truth up to a null set.
  Truth truth(std::size_t i, Enclosure u, Enclosure v, bool strict) const;
  Truth classify(Enclosure u, Enclosure v, bool strict, std::vector<Truth>& scratch) const;
  bool wants_positive(std::size_t i) const;

 private:
  const PolynomialRegion* region_;
  struct Inner {
    HalfChebyshevRange x, y;
  };
  std::vector<PolyEnclosure> polys_;               // poly, or outer when inner is set
  std::vector<std::shared_ptr<const Inner>> inner_;
};

// Built-in families.
PolynomialRegion full_square();
PolynomialRegion rect_region(double u0, double u1, double v0, double v1);
PolynomialRegion disk_region(double cu, double cv, double r);
/// {U_m(u/2) U_n(v/2) > 0}.
PolynomialRegion sign_product_region(int m, int n);
/// {U_m(u/2) < U_n(v/2)}.
PolynomialRegion dominance_region(int m, int n);

/// E_{I,P}^{(m,n)} = {(u,v) : P(U_m(u/2), U_n(v/2)) in I}. DomainError if (m,n) = (0,0)
/// or P is constant; CompositionOverflow if coefficients leave 128 bits.
PolynomialRegion region_from_poly_interval(const Poly2& p, const Interval& interval, int m, int n);

/// P(U_m(u/2), U_n(v/2)).
Poly2 compose_chebyshev(const Poly2& p, int m, int n);

/// Region definition text. One item per line, '#' starts a comment:
///   poly <c1, c2; c3, ...> cmp <op> bound <real>   coefficients in graded-lex order
///   expr <polynomial> cmp <op> bound <real>        same with a polynomial expression
///   all {  /  any {  /  }                          nesting (top level is "all")
///   rect a,b,c,d | disk cu,cv,r | sign-product m,n | dominance m,n
///   poly-interval <expr> ; <lo>,<hi> ; m,n        bounds may be -inf/inf; closed ends use [ ]
/// Throws ParseError with the line number.
PolynomialRegion parse_region(std::string_view text);

/// Shorthand such as "rect:-1,1,-1,1", "disk:0,0,1", "sign-product:2,2",
/// "dominance:2,3", "poly-interval:u*v;(0,inf);1,1", "expr:u-v>0", "full".
PolynomialRegion parse_region_shorthand(std::string_view spec);

/// Length of {poly = level} within the square, from marching squares at doubling
/// resolution until successive values agree to 1e-6 relative, times 1.01.
/// Separable curves A(u)B(v) = 0 are measured exactly from their real roots.
/// TraceError if the estimate does not settle by the resolution cap.
double curve_length(const Poly2& poly, double level = 0);

}  // namespace jst

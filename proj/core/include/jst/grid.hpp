#pragma once

// The box grid on [-2,2]^2 behind the effective estimates: interior/boundary/exterior
// classification, the boundary-count bound and the strip merge of interior boxes.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace jst {

class PolynomialRegion;

inline constexpr int kMaxGridResolution = 4096;

struct GridLines {
  int m = 1;
  double tau = 1;
  std::vector<double> coords;  // m + 1 increasing values, first -2, last exactly 2

  /// Box index of a coordinate under the half-open rule [c_i, c_{i+1}); 2 maps to m - 1.
  int locate(double x) const;
  /// Diameter bound 4 sqrt(2) tau / m.
  double delta() const;
};

/// Lines at -2 + 4 tau i / m (0 <= i < m) and 2, with tau = 1 + 1/(2 sqrt(2) m).
/// DomainError for m < 1.
GridLines build_grid(int m);

enum class BoxClass : std::uint8_t { Interior, Boundary, Exterior };

struct GridApproximation {
  GridLines grid;
  std::vector<BoxClass> boxes;  // box (i, j) at i * m + j; i indexes u, j indexes v
  std::size_t interior_count = 0;
  std::size_t boundary_count = 0;
  std::size_t exterior_count = 0;
  double mu_low = 0;       // mu_JST(S)
  double mu_high = 0;      // mu_JST(S) + mu_JST(T)
  double mu_exterior = 0;  // mu_JST of exterior boxes

  int m() const { return grid.m; }
  BoxClass at(int i, int j) const { return boxes[static_cast<std::size_t>(i) * grid.m + j]; }
  /// mu_JST of box (i, j).
  double box_measure(int i, int j) const;
};

/// Certified classification: Interior only if every box point lies in the interior of E
/// (relative to the square), Exterior only if no box point lies in E, Boundary otherwise.
/// DomainError for m outside 1..4096. threads = 0 uses the hardware concurrency; the
/// result does not depend on it.
GridApproximation classify_boxes(const PolynomialRegion& region, int m, unsigned threads = 0);

struct BoundaryBound {
  std::size_t count = 0;  // N = |T|
  double bound = 0;       // (m^2/4)(4 pi L delta + 8 pi alpha delta^2)
  double length = 0;      // L
  int alpha = 0;
  double delta = 0;
  bool ok = false;
};

/// N against the area bound from the delta-neighbourhood of the boundary.
BoundaryBound boundary_bound_check(const PolynomialRegion& region, int m);
BoundaryBound boundary_bound_check(const GridApproximation& grid, const PolynomialRegion& region);

struct MergedRectangle {
  int column = 0;
  int row_begin = 0;  // first box row
  int row_end = 0;    // one past the last
};

struct StripMerge {
  std::vector<MergedRectangle> rectangles;
  std::vector<int> components;  // N_j per vertical strip
  int max_components = 0;
  int limit = 0;  // 1 + alpha beta
};

/// Maximal vertical runs of interior boxes in each strip. HypothesisError if some strip
/// has more than 1 + alpha beta runs.
StripMerge strip_merge(const GridApproximation& grid, int alpha, int beta);
StripMerge strip_merge(const PolynomialRegion& region, int m);

}  // namespace jst

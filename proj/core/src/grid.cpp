#include "jst/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

#include "jst/enclosure.hpp"
#include "jst/errors.hpp"
#include "jst/measures.hpp"
#include "jst/region.hpp"

namespace jst {

int GridLines::locate(double x) const {
  if (x >= coords.back()) return m - 1;
  auto it = std::upper_bound(coords.begin(), coords.end(), x);
  return std::clamp(static_cast<int>(it - coords.begin()) - 1, 0, m - 1);
}

double GridLines::delta() const { return 4 * std::sqrt(2.0) * tau / m; }

GridLines build_grid(int m) {
  if (m < 1) throw DomainError("grid resolution must be >= 1, got " + std::to_string(m));
  GridLines g;
  g.m = m;
  g.tau = 1 + 1 / (2 * std::sqrt(2.0) * m);
  g.coords.reserve(static_cast<std::size_t>(m) + 1);
  for (int i = 0; i < m; ++i) g.coords.push_back(-2 + 4 * g.tau * i / m);
  g.coords.push_back(2);
  return g;
}

double GridApproximation::box_measure(int i, int j) const {
  const auto& c = grid.coords;
  return (st_cdf(c[i + 1]) - st_cdf(c[i])) * (st_cdf(c[j + 1]) - st_cdf(c[j]));
}

namespace {

// Subdivision depth for boxes the first enclosure cannot decide.
constexpr int kRefineDepth = 2;

BoxClass classify_box(const RegionEvaluator& eval, Enclosure u, Enclosure v, int depth,
                      std::vector<Truth>& scratch) {
  switch (eval.classify(u, v, true, scratch)) {
    case Truth::True: return BoxClass::Interior;
    case Truth::False: return BoxClass::Exterior;
    case Truth::Unknown: break;
  }
  if (depth == 0) return BoxClass::Boundary;
  const double um = u.mid(), vm = v.mid();
  const Enclosure us[2] = {{u.lo, um}, {um, u.hi}};
  const Enclosure vs[2] = {{v.lo, vm}, {vm, v.hi}};
  BoxClass first = classify_box(eval, us[0], vs[0], depth - 1, scratch);
  if (first == BoxClass::Boundary) return first;
  for (int k = 1; k < 4; ++k) {
    if (classify_box(eval, us[k / 2], vs[k % 2], depth - 1, scratch) != first) return BoxClass::Boundary;
  }
  return first;
}

}  // namespace

GridApproximation classify_boxes(const PolynomialRegion& region, int m, unsigned threads) {
  if (m < 1 || m > kMaxGridResolution) {
    throw DomainError("grid resolution must be in 1.." + std::to_string(kMaxGridResolution) + ", got " +
                      std::to_string(m));
  }
  GridApproximation out;
  out.grid = build_grid(m);
  out.boxes.assign(static_cast<std::size_t>(m) * m, BoxClass::Boundary);
  const RegionEvaluator eval(region);
  const auto& c = out.grid.coords;

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(m));
  auto work = [&](unsigned first) {
    std::vector<Truth> scratch;
    for (int i = static_cast<int>(first); i < m; i += static_cast<int>(threads)) {
      const Enclosure u{c[i], c[i + 1]};
      for (int j = 0; j < m; ++j) {
        out.boxes[static_cast<std::size_t>(i) * m + j] = classify_box(eval, u, {c[j], c[j + 1]}, kRefineDepth, scratch);
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work, t);
    work(0);
  }

  // Sums in box order so the result is independent of the thread count.
  std::vector<double> w(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) w[i] = st_cdf(c[i + 1]) - st_cdf(c[i]);
  long double inside = 0, boundary = 0, outside = 0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const long double mass = static_cast<long double>(w[i]) * w[j];
      switch (out.at(i, j)) {
        case BoxClass::Interior:
          inside += mass;
          ++out.interior_count;
          break;
        case BoxClass::Boundary:
          boundary += mass;
          ++out.boundary_count;
          break;
        case BoxClass::Exterior:
          outside += mass;
          ++out.exterior_count;
          break;
      }
    }
  }
  out.mu_low = static_cast<double>(inside);
  out.mu_high = static_cast<double>(inside + boundary);
  out.mu_exterior = static_cast<double>(outside);
  return out;
}

BoundaryBound boundary_bound_check(const GridApproximation& grid, const PolynomialRegion& region) {
  BoundaryBound b;
  b.count = grid.boundary_count;
  b.length = region.total_length();
  b.alpha = region.alpha();
  b.delta = grid.grid.delta();
  const double m = grid.m(), pi = std::numbers::pi;
  b.bound = m * m / 4 * (4 * pi * b.length * b.delta + 8 * pi * b.alpha * b.delta * b.delta);
  b.ok = static_cast<double>(b.count) <= b.bound;
  return b;
}

BoundaryBound boundary_bound_check(const PolynomialRegion& region, int m) {
  return boundary_bound_check(classify_boxes(region, m), region);
}

StripMerge strip_merge(const GridApproximation& grid, int alpha, int beta) {
  StripMerge out;
  out.limit = 1 + alpha * beta;
  const int m = grid.m();
  out.components.assign(static_cast<std::size_t>(m), 0);
  for (int i = 0; i < m; ++i) {
    int j = 0;
    while (j < m) {
      if (grid.at(i, j) != BoxClass::Interior) {
        ++j;
        continue;
      }
      const int begin = j;
      while (j < m && grid.at(i, j) == BoxClass::Interior) ++j;
      out.rectangles.push_back({i, begin, j});
      ++out.components[i];
    }
    out.max_components = std::max(out.max_components, out.components[i]);
  }
  if (out.max_components > out.limit) {
    const auto worst = std::max_element(out.components.begin(), out.components.end()) - out.components.begin();
    throw HypothesisError("strip " + std::to_string(worst) + " has " + std::to_string(out.max_components) +
                          " interior components, above 1 + alpha beta = " + std::to_string(out.limit));
  }
  return out;
}

StripMerge strip_merge(const PolynomialRegion& region, int m) {
  return strip_merge(classify_boxes(region, m), region.alpha(), region.beta());
}

}  // namespace jst

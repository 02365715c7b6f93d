#include "mhull/geometry.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "mhull/errors.hpp"

namespace mhull {

i128 cross(LatticePoint o, LatticePoint a, LatticePoint b) {
  return static_cast<i128>(a.x - o.x) * (b.y - o.y) - static_cast<i128>(a.y - o.y) * (b.x - o.x);
}

ConvexPolygon convex_hull(std::span<const LatticePoint> points) {
  if (points.empty()) throw InvalidArgument("convex_hull: empty point set");
  std::vector<LatticePoint> pts(points.begin(), points.end());
  if (!std::is_sorted(pts.begin(), pts.end())) std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() <= 2) return ConvexPolygon(std::move(pts));

  std::vector<LatticePoint> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  // The last point repeats the first.
  hull.resize(k - 1);
  return ConvexPolygon(std::move(hull));
}

ConvexPolygon ConvexPolygon::from_vertices(std::vector<LatticePoint> vertices) {
  if (vertices.empty()) throw InvalidArgument("polygon needs at least one vertex");
  ConvexPolygon hull = convex_hull(vertices);
  auto start = std::min_element(vertices.begin(), vertices.end());
  std::rotate(vertices.begin(), start, vertices.end());
  if (hull.vertices_ != vertices) {
    throw InvalidArgument("vertex list is not a strictly convex counterclockwise polygon");
  }
  return hull;
}

bool ConvexPolygon::contains(LatticePoint p) const {
  const std::size_t n = vertices_.size();
  if (n == 0) return false;
  if (n == 1) return p == vertices_[0];
  if (n == 2) {
    const auto& a = vertices_[0];
    const auto& b = vertices_[1];
    return cross(a, b, p) == 0 && std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (cross(vertices_[i], vertices_[(i + 1) % n], p) < 0) return false;
  }
  return true;
}

namespace {

i128 wedge(LatticePoint a, LatticePoint b) {
  return static_cast<i128>(a.x) * b.y - static_cast<i128>(a.y) * b.x;
}

}  // namespace

i64 twice_area(const ConvexPolygon& poly) {
  const auto& v = poly.vertices();
  if (v.size() < 3) return 0;
  i128 sum = 0;
  for (std::size_t i = 0; i < v.size(); ++i) sum += wedge(v[i], v[(i + 1) % v.size()]);
  return static_cast<i64>(sum);
}

LatticePoint UnimodularMap::apply(LatticePoint p) const {
  return {matrix[0] * p.x + matrix[1] * p.y + tx, matrix[2] * p.x + matrix[3] * p.y + ty};
}

ConvexPolygon UnimodularMap::apply(const ConvexPolygon& poly) const {
  std::vector<LatticePoint> image;
  image.reserve(poly.size());
  for (const auto& p : poly.vertices()) image.push_back(apply(p));
  return convex_hull(image);
}

i128 lattice_width(const ConvexPolygon& poly, i64 fx, i64 fy) {
  i128 lo = 0;
  i128 hi = 0;
  bool first = true;
  for (const auto& p : poly.vertices()) {
    const i128 value = static_cast<i128>(fx) * p.x + static_cast<i128>(fy) * p.y;
    if (first || value < lo) lo = value;
    if (first || value > hi) hi = value;
    first = false;
  }
  return hi - lo;
}

namespace {

struct Functional {
  i64 x;
  i64 y;
};

// Integer mu minimizing width(b2 - mu*b1); among ties the one closest to 0.
i64 best_multiplier(const ConvexPolygon& poly, Functional b1, Functional b2) {
  auto width_at = [&](i64 mu) {
    return lattice_width(poly, b2.x - mu * b1.x, b2.y - mu * b1.y);
  };
  const i128 w1 = lattice_width(poly, b1.x, b1.y);
  const i128 w2 = lattice_width(poly, b2.x, b2.y);
  // width(b2 - mu*b1) >= |mu|*w1 - w2, so minimizers satisfy |mu| <= 2*w2/w1.
  const auto bound = static_cast<i64>(2 * w2 / w1 + 1);

  // The width is convex in mu: binary search for the first mu where it
  // stops decreasing, then for the first mu where it starts increasing.
  auto first_where = [&](auto&& pred) {
    i64 lo = -bound;
    i64 hi = bound;
    while (lo < hi) {
      const i64 mid = lo + (hi - lo) / 2;
      if (pred(mid)) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    return lo;
  };
  const i64 flat_begin = first_where([&](i64 mu) { return width_at(mu + 1) >= width_at(mu); });
  const i64 flat_end = first_where([&](i64 mu) { return width_at(mu + 1) > width_at(mu); });
  return std::clamp<i64>(0, flat_begin, flat_end);
}

}  // namespace

BoxNormalization normalize_to_box(const ConvexPolygon& poly) {
  if (poly.is_degenerate()) {
    throw DegenerateInput("normalize_to_box needs a polygon with positive area");
  }
  auto width = [&](Functional f) { return lattice_width(poly, f.x, f.y); };

  // Gauss-Lagrange reduction of the dual lattice Z^2 under the width norm.
  Functional b1{1, 0};
  Functional b2{0, 1};
  if (width(b2) < width(b1)) std::swap(b1, b2);
  for (;;) {
    const i64 mu = best_multiplier(poly, b1, b2);
    b2 = {b2.x - mu * b1.x, b2.y - mu * b1.y};
    if (width(b2) >= width(b1)) break;
    std::swap(b1, b2);
  }

  BoxNormalization out;
  out.map.matrix = {b1.x, b1.y, b2.x, b2.y};
  i64 min1 = 0;
  i64 min2 = 0;
  bool first = true;
  for (const auto& p : poly.vertices()) {
    const i64 f1 = b1.x * p.x + b1.y * p.y;
    const i64 f2 = b2.x * p.x + b2.y * p.y;
    if (first || f1 < min1) min1 = f1;
    if (first || f2 < min2) min2 = f2;
    first = false;
  }
  out.map.tx = -min1;
  out.map.ty = -min2;
  out.u = static_cast<i64>(width(b1));
  out.v = static_cast<i64>(width(b2));
  out.ratio = 2.0 * static_cast<double>(out.u) * static_cast<double>(out.v) /
              static_cast<double>(twice_area(poly));
  return out;
}

i64 consecutive_block_min_area(const ConvexPolygon& poly, std::size_t k) {
  if (k < 3) throw InvalidArgument("consecutive_block_min_area: k must be >= 3");
  const auto& v = poly.vertices();
  const std::size_t r = v.size();
  if (r < k) {
    throw TooFewVertices("polygon has " + std::to_string(r) + " vertices, window needs " +
                         std::to_string(k));
  }
  // edge[j] = wedge(v_j, v_{j+1}) over two laps, prefix-summed.
  std::vector<i128> prefix(2 * r + 1, 0);
  for (std::size_t j = 0; j < 2 * r; ++j) {
    prefix[j + 1] = prefix[j] + wedge(v[j % r], v[(j + 1) % r]);
  }
  i128 best = -1;
  for (std::size_t i = 0; i < r; ++i) {
    const std::size_t last = i + k - 1;
    const i128 area = prefix[last] - prefix[i] + wedge(v[last % r], v[i]);
    if (best < 0 || area < best) best = area;
  }
  return static_cast<i64>(best);
}

}  // namespace mhull

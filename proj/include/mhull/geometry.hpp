#pragma once

// Exact planar geometry on lattice points: convex hulls, doubled areas,
// lattice-preserving box normalization and consecutive-vertex windows.
//
// Coordinates are expected to satisfy |x|, |y| < 2^31; every predicate is
// evaluated in 128-bit arithmetic and is exact within that range.

#include <array>
#include <span>
#include <vector>

#include "mhull/hyperbola.hpp"

namespace mhull {

// Twice the signed area of triangle (o, a, b); positive for a left turn.
i128 cross(LatticePoint o, LatticePoint a, LatticePoint b);

// Strictly convex polygon, counterclockwise, starting at its
// lexicographically smallest vertex. One vertex (a point) and two vertices
// (a segment) are allowed; no vertex lies on the segment joining its
// neighbours.
class ConvexPolygon {
 public:
  ConvexPolygon() = default;

  // Validates strict convexity and orientation, then rotates to canonical
  // start. Throws InvalidArgument on a non-convex, clockwise or repeated
  // vertex list.
  static ConvexPolygon from_vertices(std::vector<LatticePoint> vertices);

  const std::vector<LatticePoint>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  bool empty() const { return vertices_.empty(); }
  bool is_point() const { return vertices_.size() == 1; }
  bool is_segment() const { return vertices_.size() == 2; }
  bool is_degenerate() const { return vertices_.size() < 3; }

  // Inside or on the boundary.
  bool contains(LatticePoint p) const;

  friend bool operator==(const ConvexPolygon&, const ConvexPolygon&) = default;

 private:
  friend ConvexPolygon convex_hull(std::span<const LatticePoint> points);
  explicit ConvexPolygon(std::vector<LatticePoint> canonical) : vertices_(std::move(canonical)) {}

  std::vector<LatticePoint> vertices_;
};

// Monotone chain. Collinear boundary points are dropped, so the result
// holds extreme points only. Throws InvalidArgument on an empty input.
ConvexPolygon convex_hull(std::span<const LatticePoint> points);

// Shoelace sum; 0 for points and segments.
i64 twice_area(const ConvexPolygon& poly);

// x -> M x + t with integer M, det M = +-1.
struct UnimodularMap {
  std::array<i64, 4> matrix{1, 0, 0, 1};  // row-major [a b; c d]
  i64 tx = 0;
  i64 ty = 0;

  i64 determinant() const { return matrix[0] * matrix[3] - matrix[1] * matrix[2]; }
  LatticePoint apply(LatticePoint p) const;
  // Image of a polygon, re-canonicalized (a reflection flips orientation).
  ConvexPolygon apply(const ConvexPolygon& poly) const;
};

struct BoxNormalization {
  UnimodularMap map;
  i64 u = 0;
  i64 v = 0;
  // u*v divided by the polygon area (not the doubled area).
  double ratio = 0.0;
};

// Finds a lattice-preserving affine map sending the polygon into
// [0, u] x [0, v] with u*v small. The rows of the matrix are a
// Gauss-reduced basis of the integer functionals under the width norm
// w(f) = max f.p - min f.p, so u and v are the two successive lattice
// widths of the polygon. Throws DegenerateInput for points and segments.
BoxNormalization normalize_to_box(const ConvexPolygon& poly);

// Width of the polygon along the integer functional (fx, fy).
i128 lattice_width(const ConvexPolygon& poly, i64 fx, i64 fy);

// Minimum over the r cyclic windows of k consecutive vertices of the
// doubled area they span. Throws TooFewVertices if r < k, InvalidArgument
// if k < 3.
i64 consecutive_block_min_area(const ConvexPolygon& poly, std::size_t k);

}  // namespace mhull

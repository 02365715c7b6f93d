#pragma once

// The modular hyperbola H_a(m) = {(x, y) : xy = a (mod m), 1 <= x, y <= m-1},
// its point symmetries, and exact box counts.

#include <compare>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mhull/ntheory.hpp"

namespace mhull {

struct LatticePoint {
  i64 x = 0;
  i64 y = 0;

  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

using PointSet = std::vector<LatticePoint>;

// Modulus m in [2, kMaxModulus] and residue a reduced into [1, m-1] with
// gcd(a, m) = 1. Construction rejects anything else.
class HyperbolaSpec {
 public:
  HyperbolaSpec(i64 m, i64 a);

  i64 m() const { return m_; }
  i64 a() const { return a_; }

  // Residue of the mirrored hyperbola, (m - a) mod m.
  i64 mirrored_residue() const { return m_ - a_; }

  bool contains(LatticePoint p) const;

  friend bool operator==(const HyperbolaSpec&, const HyperbolaSpec&) = default;

 private:
  i64 m_;
  i64 a_;
};

enum class SymmetryKind {
  Swap,     // (x, y) -> (y, x)
  Negate,   // (x, y) -> (m - x, m - y)
  ReflectY  // (x, y) -> (x, m - y); sends H_a(m) to H_{m-a}(m)
};

LatticePoint apply_symmetry(SymmetryKind kind, LatticePoint p, i64 m);

// All phi(m) points, one per unit x, sorted by x.
PointSet enumerate_points(const HyperbolaSpec& spec);

// Exact N(a, m; U, V): points with 1 <= x <= U, 1 <= y <= V. U and V are
// clamped into [0, m-1].
i64 count_in_box(const HyperbolaSpec& spec, i64 U, i64 V);

// Exact rational in lowest terms with a positive denominator.
struct Rational {
  i128 num = 0;
  i128 den = 1;

  long double to_long_double() const {
    return static_cast<long double>(num) / static_cast<long double>(den);
  }
  std::string to_string() const;

  friend bool operator==(const Rational&, const Rational&) = default;
};

Rational make_rational(i128 num, i128 den);

// Main term U*V*phi(m)/m^2 of the equidistribution estimate, with the same
// clamping as count_in_box.
Rational predicted_count(const HyperbolaSpec& spec, i64 U, i64 V);

std::string to_string(i128 v);

// Point list text format: one point per line, "x y" as two base-10 integers
// separated by a single space, every line newline-terminated.
void write_points(std::ostream& out, std::span<const LatticePoint> points);
PointSet read_points(std::istream& in);

}  // namespace mhull

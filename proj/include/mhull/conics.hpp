#pragma once

// Integer linear algebra on monomial evaluation matrices and exact
// counting of integral points on quadratic curves.

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "mhull/hyperbola.hpp"

namespace mhull {

using BigInt = boost::multiprecision::cpp_int;

// Distinct exponent pairs (h, k), each standing for X^h Y^k.
class MonomialSet {
 public:
  explicit MonomialSet(std::vector<std::pair<int, int>> exponents);

  // X^2, XY, Y^2, X, Y, 1 in that order, matching ConicForm's A..F.
  static MonomialSet conic();

  const std::vector<std::pair<int, int>>& exponents() const { return exponents_; }
  std::size_t size() const { return exponents_.size(); }

 private:
  std::vector<std::pair<int, int>> exponents_;
};

// G(X, Y) = A X^2 + B XY + C Y^2 + D X + E Y + F with gcd(A..F) = 1.
class ConicForm {
 public:
  // Divides out the content. Throws InfiniteFamily for the zero polynomial.
  static ConicForm primitive(const std::array<i64, 6>& coeffs);

  const std::array<i64, 6>& coeffs() const { return c_; }
  i64 A() const { return c_[0]; }
  i64 B() const { return c_[1]; }
  i64 C() const { return c_[2]; }
  i64 D() const { return c_[3]; }
  i64 E() const { return c_[4]; }
  i64 F() const { return c_[5]; }

  i128 evaluate(i64 x, i64 y) const;

  friend bool operator==(const ConicForm&, const ConicForm&) = default;

 private:
  explicit ConicForm(const std::array<i64, 6>& c) : c_(c) {}
  std::array<i64, 6> c_;
};

struct ConicClass {
  i128 discriminant = 0;  // B^2 - 4AC
  bool degenerate = false;
  bool parabola_like = false;
};

// Primitive integer vector A, first nonzero entry positive, with
// sum_i A_i mu_i(x, y) = 0 at every point, or nullopt when the evaluation
// matrix has full column rank. If the kernel has dimension > 1 the vector
// belonging to the first non-pivot column of the reduced echelon form is
// returned.
std::optional<std::vector<BigInt>> find_vanishing_form(std::span<const LatticePoint> points,
                                                       const MonomialSet& monos);

// Rank over the rationals of the |points| x |monos| evaluation matrix.
std::size_t evaluation_rank(std::span<const LatticePoint> points, const MonomialSet& monos);

// True iff every s x s minor of the evaluation matrix is divisible by m.
// Throws InvalidArgument if there are fewer points than monomials.
bool minors_singular_mod(std::span<const LatticePoint> points, const MonomialSet& monos, i64 m);

// gcd of all maximal minors of the evaluation matrix (0 if rank-deficient).
BigInt maximal_minor_gcd(std::span<const LatticePoint> points, const MonomialSet& monos);

ConicClass classify_conic(const ConicForm& g);

struct ConicCount {
  i64 count = 0;
  PointSet solutions;  // sorted by (x, y)
};

// Integral (x, y) in [0, H]^2 with G(x, y) = 0, by scanning x and solving
// for y exactly. Supported magnitudes: |coefficient| <= 2^31, H <= 2^24.
ConicCount count_conic_points_in_box(const ConicForm& g, i64 H);
// Raw coefficients; throws InfiniteFamily when all six are zero.
ConicCount count_conic_points_in_box(const std::array<i64, 6>& coeffs, i64 H);

struct RootCount {
  i64 count = 0;
  std::vector<i64> roots;  // increasing, in [0, m-1]
};

// Roots in [0, m-1] of sum_k coeffs[k] X^k (ascending degree) by direct
// evaluation. Throws AllZeroMod when every coefficient vanishes mod m.
RootCount poly_roots_mod(std::span<const i64> coeffs, i64 m);

// Coefficients (ascending, reduced mod m) of X^2 G(X, a/X), the quartic
// whose roots are the abscissae of common zeros of G and XY - a.
std::vector<i64> hyperbola_section_poly(const ConicForm& g, i64 a, i64 m);

}  // namespace mhull

#include "mhull/conics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

#include "mhull/errors.hpp"

namespace mhull {

namespace {

using Matrix = std::vector<std::vector<BigInt>>;

BigInt ipow(i64 base, int exp) {
  BigInt r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

Matrix evaluation_matrix(std::span<const LatticePoint> points, const MonomialSet& monos) {
  Matrix rows;
  rows.reserve(points.size());
  for (const auto& p : points) {
    std::vector<BigInt> row;
    row.reserve(monos.size());
    for (const auto& [h, k] : monos.exponents()) row.push_back(ipow(p.x, h) * ipow(p.y, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

void divide_content(std::vector<BigInt>& row) {
  BigInt g = 0;
  for (const auto& v : row) g = boost::multiprecision::gcd(g, v);
  if (g > 1) {
    for (auto& v : row) v /= g;
  }
}

struct Echelon {
  Matrix rows;
  std::vector<std::size_t> pivot_cols;
};

// Fraction-free Gauss-Jordan: each pivot column ends with a single nonzero
// entry, rows kept primitive to bound growth.
Echelon reduce(Matrix rows, std::size_t cols) {
  Echelon out;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t pivot = rows.size();
    for (std::size_t i = rank; i < rows.size(); ++i) {
      if (rows[i][c] != 0 &&
          (pivot == rows.size() || abs(rows[i][c]) < abs(rows[pivot][c]))) {
        pivot = i;
      }
    }
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    const std::vector<BigInt>& prow = rows[rank];
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == rank || rows[i][c] == 0) continue;
      const BigInt g = boost::multiprecision::gcd(prow[c], rows[i][c]);
      const BigInt scale_row = prow[c] / g;
      const BigInt scale_pivot = rows[i][c] / g;
      for (std::size_t j = 0; j < cols; ++j) {
        rows[i][j] = rows[i][j] * scale_row - prow[j] * scale_pivot;
      }
      divide_content(rows[i]);
    }
    divide_content(rows[rank]);
    out.pivot_cols.push_back(c);
    ++rank;
  }
  rows.resize(rank);
  out.rows = std::move(rows);
  return out;
}

void normalize_sign(std::vector<BigInt>& v) {
  for (const auto& x : v) {
    if (x == 0) continue;
    if (x < 0) {
      for (auto& y : v) y = -y;
    }
    return;
  }
}

i128 isqrt128(i128 n) {
  auto r = static_cast<i128>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

MonomialSet::MonomialSet(std::vector<std::pair<int, int>> exponents)
    : exponents_(std::move(exponents)) {
  if (exponents_.empty()) throw InvalidArgument("monomial set must be nonempty");
  std::set<std::pair<int, int>> seen;
  for (const auto& e : exponents_) {
    if (e.first < 0 || e.second < 0) throw InvalidArgument("monomial exponents must be >= 0");
    if (!seen.insert(e).second) throw InvalidArgument("monomials must be pairwise distinct");
  }
}

MonomialSet MonomialSet::conic() {
  return MonomialSet({{2, 0}, {1, 1}, {0, 2}, {1, 0}, {0, 1}, {0, 0}});
}

ConicForm ConicForm::primitive(const std::array<i64, 6>& coeffs) {
  i64 g = 0;
  for (i64 c : coeffs) g = std::gcd(g, c);
  if (g == 0) throw InfiniteFamily("the zero polynomial vanishes everywhere");
  std::array<i64, 6> reduced{};
  for (std::size_t i = 0; i < 6; ++i) reduced[i] = coeffs[i] / g;
  return ConicForm(reduced);
}

i128 ConicForm::evaluate(i64 x, i64 y) const {
  const i128 X = x;
  const i128 Y = y;
  return A() * X * X + B() * X * Y + C() * Y * Y + D() * X + E() * Y + F();
}

std::size_t evaluation_rank(std::span<const LatticePoint> points, const MonomialSet& monos) {
  return reduce(evaluation_matrix(points, monos), monos.size()).pivot_cols.size();
}

std::optional<std::vector<BigInt>> find_vanishing_form(std::span<const LatticePoint> points,
                                                       const MonomialSet& monos) {
  if (points.empty()) throw InvalidArgument("find_vanishing_form needs at least one point");
  if (monos.size() < 2) throw InvalidArgument("find_vanishing_form needs at least two monomials");
  const std::size_t s = monos.size();
  const Matrix eval = evaluation_matrix(points, monos);
  const Echelon ech = reduce(eval, s);
  if (ech.pivot_cols.size() == s) return std::nullopt;

  std::size_t free_col = 0;
  for (std::size_t c = 0; c < s; ++c) {
    if (std::find(ech.pivot_cols.begin(), ech.pivot_cols.end(), c) == ech.pivot_cols.end()) {
      free_col = c;
      break;
    }
  }
  // Row i reads p_i x_{c_i} + sum_{free g} M[i][g] x_g = 0. Fix x_free = lcm(p_i).
  BigInt scale = 1;
  for (std::size_t i = 0; i < ech.rows.size(); ++i) {
    scale = boost::multiprecision::lcm(scale, abs(ech.rows[i][ech.pivot_cols[i]]));
  }
  std::vector<BigInt> form(s, 0);
  form[free_col] = scale;
  for (std::size_t i = 0; i < ech.rows.size(); ++i) {
    const BigInt& p = ech.rows[i][ech.pivot_cols[i]];
    form[ech.pivot_cols[i]] = -ech.rows[i][free_col] * (scale / p);
  }
  divide_content(form);
  normalize_sign(form);

  for (const auto& row : eval) {
    BigInt sum = 0;
    for (std::size_t j = 0; j < s; ++j) sum += row[j] * form[j];
    if (sum != 0) throw std::logic_error("vanishing form does not annihilate an input point");
  }
  return form;
}

BigInt maximal_minor_gcd(std::span<const LatticePoint> points, const MonomialSet& monos) {
  const std::size_t s = monos.size();
  if (points.size() < s) {
    throw InvalidArgument("need at least " + std::to_string(s) + " points for " +
                          std::to_string(s) + " monomials");
  }
  // Row-style Hermite reduction: unimodular row operations leave the gcd of
  // maximal minors unchanged, and the triangular result has one nonzero
  // maximal minor.
  Matrix rows = evaluation_matrix(points, monos);
  BigInt det = 1;
  std::size_t top = 0;
  for (std::size_t c = 0; c < s; ++c) {
    for (;;) {
      std::size_t pivot = rows.size();
      for (std::size_t i = top; i < rows.size(); ++i) {
        if (rows[i][c] != 0 &&
            (pivot == rows.size() || abs(rows[i][c]) < abs(rows[pivot][c]))) {
          pivot = i;
        }
      }
      if (pivot == rows.size()) return 0;
      std::swap(rows[top], rows[pivot]);
      bool done = true;
      for (std::size_t i = top + 1; i < rows.size(); ++i) {
        if (rows[i][c] == 0) continue;
        const BigInt q = rows[i][c] / rows[top][c];
        for (std::size_t j = c; j < s; ++j) rows[i][j] -= q * rows[top][j];
        if (rows[i][c] != 0) done = false;
      }
      if (done) break;
    }
    det *= abs(rows[top][c]);
    ++top;
  }
  return det;
}

bool minors_singular_mod(std::span<const LatticePoint> points, const MonomialSet& monos, i64 m) {
  if (m < 1) throw InvalidArgument("modulus must be positive");
  return maximal_minor_gcd(points, monos) % m == 0;
}

ConicClass classify_conic(const ConicForm& g) {
  const i128 A = g.A(), B = g.B(), C = g.C(), D = g.D(), E = g.E(), F = g.F();
  ConicClass cls;
  cls.discriminant = B * B - 4 * A * C;
  // det [[2A, B, D], [B, 2C, E], [D, E, 2F]]
  const i128 det = 2 * A * (4 * C * F - E * E) - B * (2 * B * F - D * E) + D * (B * E - 2 * C * D);
  cls.degenerate = det == 0;
  cls.parabola_like = cls.discriminant == 0 && !cls.degenerate;
  return cls;
}

ConicCount count_conic_points_in_box(const ConicForm& g, i64 H) {
  if (H < 0) throw InvalidArgument("box size H must be >= 0");
  if (H > (i64{1} << 24)) throw CeilingExceeded("box size H exceeds 2^24");
  for (i64 c : g.coeffs()) {
    if (c > (i64{1} << 31) || c < -(i64{1} << 31)) {
      throw CeilingExceeded("conic coefficient exceeds 2^31 in magnitude");
    }
  }
  ConicCount out;
  for (i64 x = 0; x <= H; ++x) {
    // C y^2 + b y + c = 0
    const i128 qa = g.C();
    const i128 qb = static_cast<i128>(g.B()) * x + g.E();
    const i128 qc = (static_cast<i128>(g.A()) * x + g.D()) * x + g.F();
    auto accept = [&](i128 num, i128 den) {
      if (num % den != 0) return;
      const i128 y = num / den;
      if (y >= 0 && y <= H) out.solutions.push_back({x, static_cast<i64>(y)});
    };
    if (qa != 0) {
      const i128 disc = qb * qb - 4 * qa * qc;
      if (disc < 0) continue;
      const i128 root = isqrt128(disc);
      if (root * root != disc) continue;
      const std::size_t before = out.solutions.size();
      accept(-qb - root, 2 * qa);
      if (root != 0) accept(-qb + root, 2 * qa);
      std::sort(out.solutions.begin() + static_cast<std::ptrdiff_t>(before), out.solutions.end());
    } else if (qb != 0) {
      accept(-qc, qb);
    } else if (qc == 0) {
      for (i64 y = 0; y <= H; ++y) out.solutions.push_back({x, y});
    }
  }
  out.count = static_cast<i64>(out.solutions.size());
  return out;
}

ConicCount count_conic_points_in_box(const std::array<i64, 6>& coeffs, i64 H) {
  return count_conic_points_in_box(ConicForm::primitive(coeffs), H);
}

RootCount poly_roots_mod(std::span<const i64> coeffs, i64 m) {
  if (m < 2) throw InvalidArgument("modulus must be >= 2");
  std::vector<i64> reduced;
  reduced.reserve(coeffs.size());
  bool all_zero = true;
  for (i64 c : coeffs) {
    reduced.push_back(mod_reduce(c, m));
    if (reduced.back() != 0) all_zero = false;
  }
  if (all_zero) {
    throw AllZeroMod("every coefficient vanishes modulo " + std::to_string(m));
  }
  RootCount out;
  for (i64 x = 0; x < m; ++x) {
    i64 value = 0;
    for (std::size_t k = reduced.size(); k-- > 0;) {
      value = mod_reduce(mul_mod(value, x, m) + reduced[k], m);
    }
    if (value == 0) out.roots.push_back(x);
  }
  out.count = static_cast<i64>(out.roots.size());
  return out;
}

std::vector<i64> hyperbola_section_poly(const ConicForm& g, i64 a, i64 m) {
  if (m < 2) throw InvalidArgument("modulus must be >= 2");
  const i64 ar = mod_reduce(a, m);
  auto r = [m](i64 v) { return mod_reduce(v, m); };
  return {
      mul_mod(r(g.C()), mul_mod(ar, ar, m), m),
      mul_mod(r(g.E()), ar, m),
      r(r(g.F()) + mul_mod(r(g.B()), ar, m)),
      r(g.D()),
      r(g.A()),
  };
}

}  // namespace mhull

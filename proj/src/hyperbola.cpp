#include "mhull/hyperbola.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <iterator>
#include <numeric>
#include <ostream>
#include <string_view>
#include <utility>

#include "mhull/errors.hpp"

namespace mhull {

HyperbolaSpec::HyperbolaSpec(i64 m, i64 a) : m_(m), a_(0) {
  if (m < 2) throw InvalidArgument("modulus must be >= 2, got " + std::to_string(m));
  if (m > kMaxModulus) {
    throw CeilingExceeded("modulus " + std::to_string(m) + " exceeds the 2^31 ceiling");
  }
  a_ = mod_reduce(a, m);
  if (std::gcd(a_, m_) != 1) {
    throw InvalidArgument("residue " + std::to_string(a) + " is not coprime to " +
                          std::to_string(m));
  }
}

bool HyperbolaSpec::contains(LatticePoint p) const {
  return p.x >= 1 && p.x <= m_ - 1 && p.y >= 1 && p.y <= m_ - 1 &&
         mul_mod(p.x, p.y, m_) == a_;
}

LatticePoint apply_symmetry(SymmetryKind kind, LatticePoint p, i64 m) {
  switch (kind) {
    case SymmetryKind::Swap:
      return {p.y, p.x};
    case SymmetryKind::Negate:
      return {m - p.x, m - p.y};
    case SymmetryKind::ReflectY:
      return {p.x, m - p.y};
  }
  return p;
}

PointSet enumerate_points(const HyperbolaSpec& spec) {
  const i64 m = spec.m();
  std::vector<i64> units;
  for (i64 x = 1; x < m; ++x) {
    if (std::gcd(x, m) == 1) units.push_back(x);
  }
  const std::vector<i64> inverses = batch_mod_inv(units, m);
  PointSet points;
  points.reserve(units.size());
  for (std::size_t i = 0; i < units.size(); ++i) {
    points.push_back({units[i], mul_mod(spec.a(), inverses[i], m)});
  }
  return points;
}

i64 count_in_box(const HyperbolaSpec& spec, i64 U, i64 V) {
  const i64 m = spec.m();
  U = std::clamp<i64>(U, 0, m - 1);
  V = std::clamp<i64>(V, 0, m - 1);
  if (U == 0 || V == 0) return 0;
  // Scan the shorter side; the hyperbola is symmetric under swapping x and y.
  const i64 scan = std::min(U, V);
  const i64 other = std::max(U, V);
  i64 count = 0;
  for (i64 x = 1; x <= scan; ++x) {
    if (std::gcd(x, m) != 1) continue;
    if (mul_mod(spec.a(), mod_inv(x, m), m) <= other) ++count;
  }
  return count;
}

namespace {

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) a = std::exchange(b, a % b);
  return a;
}

}  // namespace

Rational make_rational(i128 num, i128 den) {
  if (den == 0) throw InvalidArgument("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const i128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return {num, den};
}

std::string to_string(i128 v) {
  if (v == 0) return "0";
  const bool negative = v < 0;
  u128 u = negative ? static_cast<u128>(-(v + 1)) + 1 : static_cast<u128>(v);
  std::string digits;
  while (u > 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (negative) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

std::string Rational::to_string() const {
  if (den == 1) return mhull::to_string(num);
  return mhull::to_string(num) + "/" + mhull::to_string(den);
}

Rational predicted_count(const HyperbolaSpec& spec, i64 U, i64 V) {
  const i64 m = spec.m();
  U = std::clamp<i64>(U, 0, m - 1);
  V = std::clamp<i64>(V, 0, m - 1);
  const i64 phi = euler_phi(factorize(m));
  return make_rational(static_cast<i128>(U) * V * phi, static_cast<i128>(m) * m);
}

void write_points(std::ostream& out, std::span<const LatticePoint> points) {
  for (const auto& p : points) out << p.x << ' ' << p.y << '\n';
}

namespace {

bool parse_int(std::string_view text, i64& value) {
  if (text.empty()) return false;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  // from_chars accepts a leading '-' but not '+', matching the format.
  const auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc{} && ptr == last;
}

}  // namespace

PointSet read_points(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  PointSet points;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    ++line_no;
    const std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) {
      throw ParseError("point list line " + std::to_string(line_no) +
                       ": missing terminating newline");
    }
    const std::string_view line(text.data() + pos, eol - pos);
    const std::size_t space = line.find(' ');
    LatticePoint p;
    if (space == std::string_view::npos || !parse_int(line.substr(0, space), p.x) ||
        !parse_int(line.substr(space + 1), p.y)) {
      throw ParseError("point list line " + std::to_string(line_no) + ": expected \"x y\", got \"" +
                       std::string(line) + "\"");
    }
    points.push_back(p);
    pos = eol + 1;
  }
  return points;
}

}  // namespace mhull

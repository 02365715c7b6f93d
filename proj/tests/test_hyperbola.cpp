#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "mhull/errors.hpp"
#include "mhull/hyperbola.hpp"
#include "oracles.hpp"

using namespace mhull;

TEST_CASE("HyperbolaSpec validation") {
  CHECK(HyperbolaSpec(7, 8).a() == 1);
  CHECK(HyperbolaSpec(7, -1).a() == 6);
  CHECK(HyperbolaSpec(7, 3).mirrored_residue() == 4);
  CHECK_THROWS_AS(HyperbolaSpec(1, 0), InvalidArgument);
  CHECK_THROWS_AS(HyperbolaSpec(10, 4), InvalidArgument);
  CHECK_THROWS_AS(HyperbolaSpec(7, 0), InvalidArgument);
  CHECK_THROWS_AS(HyperbolaSpec(kMaxModulus + 1, 1), CeilingExceeded);
  CHECK_NOTHROW(HyperbolaSpec(kMaxModulus, 1));
}

TEST_CASE("enumerate_points examples") {
  CHECK(enumerate_points(HyperbolaSpec(5, 1)) == PointSet{{1, 1}, {2, 3}, {3, 2}, {4, 4}});
  CHECK(enumerate_points(HyperbolaSpec(2, 1)) == PointSet{{1, 1}});
  CHECK(enumerate_points(HyperbolaSpec(5, 2)) == PointSet{{1, 2}, {2, 1}, {3, 4}, {4, 3}});
}

TEST_CASE("enumerate_points matches the double-loop oracle") {
  for (i64 m = 2; m <= 120; ++m) {
    for (i64 a = 1; a < m; ++a) {
      if (std::gcd(a, m) != 1) continue;
      const HyperbolaSpec spec(m, a);
      PointSet expected = oracle::hyperbola_points(m, a);
      REQUIRE(enumerate_points(spec) == expected);
    }
  }
}

TEST_CASE("point count equals phi up to 1e4") {
  std::mt19937_64 rng(77);
  for (i64 m = 2; m <= 10000; ++m) {
    i64 a = 1;
    if (m > 2) {
      do {
        a = std::uniform_int_distribution<i64>(1, m - 1)(rng);
      } while (std::gcd(a, m) != 1);
    }
    const HyperbolaSpec spec(m, a);
    const auto pts = enumerate_points(spec);
    REQUIRE(static_cast<i64>(pts.size()) == euler_phi(factorize(m)));
    if (m % 97 == 0) {
      for (const auto& p : pts) REQUIRE(spec.contains(p));
      REQUIRE(std::is_sorted(pts.begin(), pts.end()));
    }
  }
}

TEST_CASE("symmetry examples") {
  CHECK(apply_symmetry(SymmetryKind::Swap, {2, 4}, 7) == LatticePoint{4, 2});
  CHECK(apply_symmetry(SymmetryKind::Negate, {2, 4}, 7) == LatticePoint{5, 3});
  CHECK(apply_symmetry(SymmetryKind::ReflectY, {2, 3}, 7) == LatticePoint{2, 4});
}

TEST_CASE("symmetries are involutions with the stated targets") {
  for (i64 m : {2, 3, 8, 15, 97, 360, 1001}) {
    for (i64 a = 1; a < m; ++a) {
      if (std::gcd(a, m) != 1) continue;
      const HyperbolaSpec spec(m, a);
      const HyperbolaSpec mirror(m, spec.mirrored_residue());
      for (const auto& p : enumerate_points(spec)) {
        const auto s = apply_symmetry(SymmetryKind::Swap, p, m);
        const auto n = apply_symmetry(SymmetryKind::Negate, p, m);
        const auto r = apply_symmetry(SymmetryKind::ReflectY, p, m);
        REQUIRE(spec.contains(s));
        REQUIRE(spec.contains(n));
        REQUIRE(mirror.contains(r));
        REQUIRE(apply_symmetry(SymmetryKind::Swap, s, m) == p);
        REQUIRE(apply_symmetry(SymmetryKind::Negate, n, m) == p);
        REQUIRE(apply_symmetry(SymmetryKind::ReflectY, r, m) == p);
      }
    }
  }
}

TEST_CASE("count_in_box examples") {
  const HyperbolaSpec spec(7, 1);
  CHECK(count_in_box(spec, 3, 5) == 3);
  CHECK(count_in_box(spec, 6, 6) == 6);
  CHECK(count_in_box(spec, 0, 6) == 0);
  CHECK(count_in_box(spec, 100, 100) == 6);
  CHECK(count_in_box(spec, -3, 4) == 0);
}

TEST_CASE("count_in_box matches filtered enumeration and is monotone") {
  for (i64 m : {2, 9, 30, 31, 64, 105, 211}) {
    for (i64 a = 1; a < m; a += 3) {
      if (std::gcd(a, m) != 1) continue;
      const HyperbolaSpec spec(m, a);
      const auto pts = oracle::hyperbola_points(m, a);
      CHECK(count_in_box(spec, m - 1, m - 1) == euler_phi(factorize(m)));
      for (i64 U = 0; U < m; U += std::max<i64>(1, m / 9)) {
        i64 prev = -1;
        for (i64 V = 0; V < m; ++V) {
          const i64 expected = std::count_if(pts.begin(), pts.end(), [&](const LatticePoint& p) {
            return p.x <= U && p.y <= V;
          });
          const i64 got = count_in_box(spec, U, V);
          REQUIRE(got == expected);
          REQUIRE(got >= prev);
          REQUIRE(got >= (U > 0 ? count_in_box(spec, U - 1, V) : 0));
          prev = got;
        }
      }
    }
  }
}

TEST_CASE("predicted_count is the exact main term") {
  const HyperbolaSpec spec(7, 1);
  CHECK(predicted_count(spec, 3, 5) == Rational{90, 49});
  CHECK(predicted_count(spec, 3, 5).to_string() == "90/49");
  CHECK(predicted_count(spec, 6, 6) == Rational{216, 49});
  CHECK(predicted_count(spec, 0, 5) == Rational{0, 1});
  CHECK(predicted_count(spec, 0, 5).to_string() == "0");
  // 11 * 11 * phi(12) / 144 = 484/144 = 121/36.
  CHECK(predicted_count(HyperbolaSpec(12, 5), 11, 11) == Rational{121, 36});
  CHECK(make_rational(6, -4) == Rational{-3, 2});
  CHECK_THROWS_AS(make_rational(1, 0), InvalidArgument);
  CHECK(to_string(static_cast<i128>(-1234567890123456789LL) * 1000) == "-1234567890123456789000");
}

TEST_CASE("point list round trip") {
  const PointSet pts{{1, 1}, {-3, 12}, {40000000000, 7}};
  std::ostringstream out;
  write_points(out, pts);
  CHECK(out.str() == "1 1\n-3 12\n40000000000 7\n");
  std::istringstream in(out.str());
  CHECK(read_points(in) == pts);
  std::istringstream empty("");
  CHECK(read_points(empty).empty());
}

TEST_CASE("point list parse errors carry the line number") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_points(in);
  };
  CHECK_THROWS_AS(parse("1 2"), ParseError);
  CHECK_THROWS_AS(parse("1  2\n"), ParseError);
  CHECK_THROWS_AS(parse("1\t2\n"), ParseError);
  CHECK_THROWS_AS(parse("+1 2\n"), ParseError);
  CHECK_THROWS_AS(parse("1 2 3\n"), ParseError);
  CHECK_THROWS_AS(parse("\n"), ParseError);
  CHECK_THROWS_AS(parse("1 x\n"), ParseError);
  CHECK_THROWS_AS(parse("99999999999999999999 1\n"), ParseError);
  try {
    parse("1 2\n3 4\nfive 6\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

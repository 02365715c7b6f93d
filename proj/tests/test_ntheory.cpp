#include <doctest.h>

#include <numeric>
#include <random>
#include <vector>

#include "mhull/errors.hpp"
#include "mhull/ntheory.hpp"
#include "oracles.hpp"

using namespace mhull;

TEST_CASE("ext_gcd satisfies Bezout") {
  const auto r = ext_gcd(3, 7);
  CHECK(r.g == 1);
  CHECK(r.u == -2);
  CHECK(r.v == 1);
  CHECK(ext_gcd(0, 5).g == 5);
  CHECK(ext_gcd(12, 18).g == 6);

  std::mt19937_64 rng(11);
  std::uniform_int_distribution<i64> dist(-1'000'000'000, 1'000'000'000);
  for (int i = 0; i < 2000; ++i) {
    const i64 a = dist(rng);
    const i64 b = dist(rng);
    const auto e = ext_gcd(a, b);
    CHECK(e.g == std::gcd(a, b));
    CHECK(static_cast<i128>(a) * e.u + static_cast<i128>(b) * e.v == e.g);
  }
}

TEST_CASE("mod_inv examples and errors") {
  CHECK(mod_inv(3, 7) == 5);
  CHECK(mod_inv(2, 5) == 3);
  CHECK(mod_inv(-1, 10) == 9);
  CHECK_THROWS_AS(mod_inv(4, 10), NotInvertible);
  CHECK_THROWS_AS(mod_inv(0, 7), NotInvertible);
  CHECK_THROWS_AS(mod_inv(1, 1), InvalidArgument);
}

TEST_CASE("mod_inv inverts random coprime pairs") {
  std::mt19937_64 rng(2024);
  int tested = 0;
  while (tested < 10000) {
    const i64 m = std::uniform_int_distribution<i64>(2, kMaxModulus)(rng);
    const i64 x = std::uniform_int_distribution<i64>(1, m - 1)(rng);
    if (std::gcd(x, m) != 1) continue;
    const i64 y = mod_inv(x, m);
    REQUIRE(y >= 1);
    REQUIRE(y <= m - 1);
    REQUIRE(mul_mod(x, y, m) == 1 % m);
    ++tested;
  }
}

TEST_CASE("batch_mod_inv matches single inversions") {
  const i64 m = 1'000'000'007;
  std::vector<i64> xs;
  for (i64 x = 1; x <= 500; ++x) xs.push_back(x * 7919 % m);
  const auto inv = batch_mod_inv(xs, m);
  REQUIRE(inv.size() == xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(inv[i] == mod_inv(xs[i], m));

  const std::vector<i64> bad{1, 3, 6};
  CHECK_THROWS_AS(batch_mod_inv(bad, 12), NotInvertible);
  CHECK(batch_mod_inv(std::span<const i64>{}, 12).empty());
}

TEST_CASE("is_prime agrees with trial division") {
  for (i64 n = 0; n < 20000; ++n) {
    REQUIRE(is_prime(static_cast<u64>(n)) == oracle::is_prime(n));
  }
  CHECK(oracle::is_prime(1000003));
  CHECK(is_prime(1000003));
  CHECK_FALSE(is_prime(3215031751ULL));  // strong pseudoprime to bases 2, 3, 5, 7
  CHECK(is_prime(18446744073709551557ULL));
  CHECK_FALSE(is_prime(18446744073709551555ULL));
}

TEST_CASE("factorize round-trips and yields primes") {
  std::mt19937_64 rng(5);
  std::vector<i64> samples{1, 2, 4, 720, 1000003, 600851475143, 9223372036854775807};
  for (int i = 0; i < 300; ++i) {
    samples.push_back(std::uniform_int_distribution<i64>(1, INT64_MAX)(rng));
  }
  // Semiprimes with two large factors exercise the rho path.
  samples.push_back(i64{1000000007} * 998244353);
  samples.push_back(i64{4294967291} * 2147483647);
  for (i64 n : samples) {
    const auto f = factorize(n);
    CHECK(f.value() == n);
    for (std::size_t i = 0; i < f.factors.size(); ++i) {
      CHECK(is_prime(static_cast<u64>(f.factors[i].prime)));
      CHECK(f.factors[i].exponent >= 1);
      if (i > 0) CHECK(f.factors[i - 1].prime < f.factors[i].prime);
    }
  }
  CHECK(factorize(1).factors.empty());
  CHECK_THROWS_AS(factorize(0), InvalidArgument);
  CHECK_THROWS_AS(factorize(-6), InvalidArgument);
}

TEST_CASE("720 = 2^4 * 3^2 * 5") {
  const auto f = factorize(720);
  REQUIRE(f.factors.size() == 3);
  CHECK(f.factors[0] == PrimePower{2, 4});
  CHECK(f.factors[1] == PrimePower{3, 2});
  CHECK(f.factors[2] == PrimePower{5, 1});
  CHECK(divisor_count(f) == 30);
  CHECK(euler_phi(f) == 192);
  CHECK(omega(f) == 3);
  CHECK(kernel(f) == 30);
  const auto d = divisors(f);
  CHECK(d.size() == 30);
  CHECK(d.front() == 1);
  CHECK(d.back() == 720);
  CHECK(std::is_sorted(d.begin(), d.end()));
}

TEST_CASE("tau matches trial counting up to 1e5") {
  // Sieve-free oracle: count divisors by the sqrt loop.
  for (i64 n = 1; n <= 100000; ++n) {
    i64 c = 0;
    for (i64 d = 1; d * d <= n; ++d) {
      if (n % d == 0) c += (d * d == n) ? 1 : 2;
    }
    REQUIRE(divisor_count(factorize(n)) == c);
  }
  for (i64 n = 1; n <= 300; ++n) CHECK(divisor_count(factorize(n)) == oracle::divisor_count(n));
}

TEST_CASE("phi matches gcd counting up to 1e4") {
  for (i64 n = 1; n <= 10000; ++n) {
    REQUIRE(euler_phi(factorize(n)) == oracle::totient(n));
  }
}

TEST_CASE("kernel is squarefree with the same prime support") {
  for (i64 n = 2; n <= 20000; ++n) {
    const auto p = arithmetic_profile(n);
    REQUIRE(n % p.kernel == 0);
    REQUIRE(p.t * p.kernel == n);
    const auto kf = factorize(p.kernel);
    const auto nf = factorize(n);
    REQUIRE(kf.factors.size() == nf.factors.size());
    for (std::size_t i = 0; i < kf.factors.size(); ++i) {
      REQUIRE(kf.factors[i].exponent == 1);
      REQUIRE(kf.factors[i].prime == nf.factors[i].prime);
    }
    REQUIRE(p.squarefree == (p.t == 1));
    REQUIRE(p.omega == static_cast<int>(nf.factors.size()));
  }
  CHECK(arithmetic_profile(12).kernel == 6);
  CHECK(arithmetic_profile(12).t == 2);
  CHECK_FALSE(arithmetic_profile(12).squarefree);
  CHECK(arithmetic_profile(30).squarefree);
  CHECK_THROWS_AS(arithmetic_profile(1), InvalidArgument);
}

TEST_CASE("primes_up_to") {
  const auto p = primes_up_to(30);
  CHECK(p == std::vector<i64>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
  CHECK(primes_up_to(1).empty());
  CHECK(primes_up_to(100000).size() == 9592);
}

TEST_CASE("progression factorization matches factorize") {
  struct Case {
    i64 start;
    i64 step;
    i64 count;
  };
  // Small counts take the fallback path, long ones the sieve.
  const std::vector<Case> cases{{1, 7, 50},      {3, 1000, 5000},   {999, 1009, 20000},
                                {5, 2, 100000},  {123456, 7, 3},    {1, 99991, 60000},
                                {2, 1, 1}};
  for (const auto& c : cases) {
    i64 expected_l = 0;
    for_each_progression_factorization(c.start, c.step, c.count,
                                       [&](i64 l, const Factorization& f) {
                                         REQUIRE(l == expected_l);
                                         ++expected_l;
                                         const i64 n = c.start + c.step * l;
                                         REQUIRE(f == factorize(n));
                                       });
    CHECK(expected_l == c.count);
  }
  CHECK_THROWS_AS(for_each_progression_factorization(INT64_MAX - 5, 10, 3,
                                                     [](i64, const Factorization&) {}),
                  CeilingExceeded);
}

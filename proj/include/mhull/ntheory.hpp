#pragma once

// Exact integer arithmetic used throughout the library: extended gcd,
// modular inverses (single and batched), 64-bit factorization, divisor
// enumeration and the multiplicative functions tau, phi, omega, kernel.
//
// Magnitude ceilings:
//   * factorize() accepts any n in [1, 2^63 - 1].
//   * Moduli are limited to kMaxModulus = 2^31, so products of two residues
//     fit in a signed 64-bit integer and geometric cross products of
//     coordinate differences fit in a signed 128-bit integer.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace mhull {

using i64 = std::int64_t;
using u64 = std::uint64_t;
__extension__ typedef __int128 i128;
__extension__ typedef unsigned __int128 u128;

inline constexpr i64 kMaxModulus = i64{1} << 31;

struct ExtGcd {
  i64 g;
  i64 u;
  i64 v;
};

// g = gcd(a, b) >= 0 and a*u + b*v = g.
ExtGcd ext_gcd(i64 a, i64 b);

// Least nonnegative residue of x modulo m (m >= 1).
constexpr i64 mod_reduce(i64 x, i64 m) {
  i64 r = x % m;
  return r < 0 ? r + m : r;
}

constexpr i64 mul_mod(i64 x, i64 y, i64 m) {
  return static_cast<i64>(static_cast<i128>(x) * y % m);
}

// y in [1, m-1] with x*y = 1 (mod m). Throws NotInvertible if gcd(x, m) != 1.
i64 mod_inv(i64 x, i64 m);

// Inverts every entry of xs modulo m with a single extended gcd (prefix
// products). Throws NotInvertible if any entry shares a factor with m.
std::vector<i64> batch_mod_inv(std::span<const i64> xs, i64 m);

struct PrimePower {
  i64 prime;
  int exponent;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// Primes strictly increasing; the empty list stands for 1.
struct Factorization {
  std::vector<PrimePower> factors;

  i64 value() const;

  friend bool operator==(const Factorization&, const Factorization&) = default;
};

// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(u64 n);

// Trial division by small primes, then Pollard-Brent rho on the cofactor.
Factorization factorize(i64 n);

// Sorted list of all positive divisors.
std::vector<i64> divisors(const Factorization& f);

i64 divisor_count(const Factorization& f);
i64 euler_phi(const Factorization& f);
int omega(const Factorization& f);
i64 kernel(const Factorization& f);

struct ArithmeticProfile {
  i64 n;
  i64 tau;
  i64 phi;
  int omega;
  i64 kernel;
  i64 t;  // n / kernel
  bool squarefree;
};

ArithmeticProfile arithmetic_profile(i64 n);

// Eratosthenes sieve.
std::vector<i64> primes_up_to(i64 limit);

// Factors every term of start + step*l for l in [0, count) and hands
// (l, factorization) to the visitor in increasing l. Terms must be positive.
// Uses a segmented sieve over the progression when the prime bound
// sqrt(last term) is small enough, and falls back to factorize() otherwise.
void for_each_progression_factorization(
    i64 start, i64 step, i64 count,
    const std::function<void(i64, const Factorization&)>& visit);

}  // namespace mhull

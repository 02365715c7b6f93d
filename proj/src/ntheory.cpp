#include "mhull/ntheory.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "mhull/errors.hpp"

namespace mhull {

namespace {

constexpr i64 kTrialBound = 1000;
// Largest prime bound for which the progression sieve is used.
constexpr i64 kMaxSieveBound = i64{1} << 26;
constexpr i64 kSegmentLength = i64{1} << 14;

u64 mul_mod_u(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 pow_mod_u(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod_u(result, base, m);
    base = mul_mod_u(base, base, m);
    exp >>= 1;
  }
  return result;
}

u64 isqrt_u(u64 n) {
  auto r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Pollard rho with Brent's cycle detection; n must be odd and composite.
u64 pollard_brent(u64 n) {
  if (n % 2 == 0) return 2;
  for (u64 c = 1;; ++c) {
    u64 y = 2;
    u64 x = 2;
    u64 q = 1;
    u64 g = 1;
    u64 ys = 2;
    const u64 batch = 128;
    auto f = [&](u64 v) { return (mul_mod_u(v, v, n) + c) % n; };
    for (u64 r = 1; g == 1; r <<= 1) {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      for (u64 k = 0; k < r && g == 1; k += batch) {
        ys = y;
        for (u64 i = 0; i < std::min(batch, r - k); ++i) {
          y = f(y);
          q = mul_mod_u(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
      }
    }
    if (g == n) {
      // Batch overshot: step back one at a time.
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void collect_prime_factors(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  u64 d = pollard_brent(n);
  collect_prime_factors(d, out);
  collect_prime_factors(n / d, out);
}

const std::vector<i64>& small_primes() {
  static const std::vector<i64> primes = primes_up_to(kTrialBound);
  return primes;
}

}  // namespace

ExtGcd ext_gcd(i64 a, i64 b) {
  i64 old_r = a, r = b;
  i64 old_s = 1, s = 0;
  i64 old_t = 0, t = 1;
  while (r != 0) {
    const i64 q = old_r / r;
    old_r = std::exchange(r, old_r - q * r);
    old_s = std::exchange(s, old_s - q * s);
    old_t = std::exchange(t, old_t - q * t);
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

i64 mod_inv(i64 x, i64 m) {
  if (m < 2) throw InvalidArgument("mod_inv: modulus must be >= 2");
  const auto [g, u, v] = ext_gcd(mod_reduce(x, m), m);
  (void)v;
  if (g != 1) {
    throw NotInvertible("mod_inv: gcd(" + std::to_string(x) + ", " +
                        std::to_string(m) + ") = " + std::to_string(g));
  }
  return mod_reduce(u, m);
}

std::vector<i64> batch_mod_inv(std::span<const i64> xs, i64 m) {
  std::vector<i64> out(xs.size());
  if (xs.empty()) return out;
  // prefix[i] = x_0 * ... * x_{i-1}
  std::vector<i64> prefix(xs.size() + 1);
  prefix[0] = 1 % m;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    prefix[i + 1] = mul_mod(prefix[i], mod_reduce(xs[i], m), m);
  }
  i64 inv = mod_inv(prefix.back(), m);
  for (std::size_t i = xs.size(); i-- > 0;) {
    out[i] = mul_mod(inv, prefix[i], m);
    inv = mul_mod(inv, mod_reduce(xs[i], m), m);
  }
  return out;
}

i64 Factorization::value() const {
  i64 v = 1;
  for (const auto& [p, e] : factors) {
    for (int i = 0; i < e; ++i) v *= p;
  }
  return v;
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  static constexpr std::array<u64, 12> kBases{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 p : kBases) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : kBases) {
    u64 x = pow_mod_u(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod_u(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

Factorization factorize(i64 n) {
  if (n < 1) throw InvalidArgument("factorize: n must be >= 1, got " + std::to_string(n));
  Factorization f;
  auto rest = static_cast<u64>(n);
  for (i64 p : small_primes()) {
    const auto up = static_cast<u64>(p);
    if (up * up > rest) break;
    if (rest % up != 0) continue;
    int e = 0;
    while (rest % up == 0) {
      rest /= up;
      ++e;
    }
    f.factors.push_back({p, e});
  }
  if (rest == 1) return f;

  std::vector<u64> big;
  collect_prime_factors(rest, big);
  std::sort(big.begin(), big.end());
  for (std::size_t i = 0; i < big.size();) {
    std::size_t j = i;
    while (j < big.size() && big[j] == big[i]) ++j;
    f.factors.push_back({static_cast<i64>(big[i]), static_cast<int>(j - i)});
    i = j;
  }
  return f;
}

std::vector<i64> divisors(const Factorization& f) {
  std::vector<i64> out{1};
  for (const auto& [p, e] : f.factors) {
    const std::size_t base = out.size();
    i64 pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

i64 divisor_count(const Factorization& f) {
  i64 tau = 1;
  for (const auto& pe : f.factors) tau *= pe.exponent + 1;
  return tau;
}

i64 euler_phi(const Factorization& f) {
  i64 phi = 1;
  for (const auto& [p, e] : f.factors) {
    phi *= p - 1;
    for (int k = 1; k < e; ++k) phi *= p;
  }
  return phi;
}

int omega(const Factorization& f) { return static_cast<int>(f.factors.size()); }

i64 kernel(const Factorization& f) {
  i64 k = 1;
  for (const auto& pe : f.factors) k *= pe.prime;
  return k;
}

ArithmeticProfile arithmetic_profile(i64 n) {
  if (n < 2) throw InvalidArgument("arithmetic_profile: n must be >= 2");
  const Factorization f = factorize(n);
  ArithmeticProfile prof{};
  prof.n = n;
  prof.tau = divisor_count(f);
  prof.phi = euler_phi(f);
  prof.omega = omega(f);
  prof.kernel = kernel(f);
  prof.t = n / prof.kernel;
  prof.squarefree = prof.t == 1;
  return prof;
}

std::vector<i64> primes_up_to(i64 limit) {
  std::vector<i64> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
  for (i64 i = 2; i <= limit; ++i) {
    if (composite[static_cast<std::size_t>(i)]) continue;
    primes.push_back(i);
    for (i64 j = i * i; j <= limit; j += i) composite[static_cast<std::size_t>(j)] = true;
  }
  return primes;
}

void for_each_progression_factorization(
    i64 start, i64 step, i64 count,
    const std::function<void(i64, const Factorization&)>& visit) {
  if (count <= 0) return;
  if (start < 1 || step < 0) {
    throw InvalidArgument("progression terms must be positive");
  }
  const i128 last_wide = static_cast<i128>(start) + static_cast<i128>(step) * (count - 1);
  if (last_wide > static_cast<i128>(INT64_MAX)) {
    throw CeilingExceeded("progression exceeds the 63-bit factorization ceiling");
  }
  const auto last = static_cast<i64>(last_wide);
  const auto bound = static_cast<i64>(isqrt_u(static_cast<u64>(last)));

  if (bound > kMaxSieveBound || bound > 64 * count + 4096) {
    for (i64 l = 0; l < count; ++l) visit(l, factorize(start + step * l));
    return;
  }

  const std::vector<i64> primes = primes_up_to(bound);
  // next[i]: smallest not-yet-visited index l with primes[i] | start + step*l,
  // or -1 when primes[i] never divides a term.
  std::vector<i64> next(primes.size(), -1);
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const i64 p = primes[i];
    if (step % p == 0) {
      if (start % p == 0) next[i] = 0;
      continue;
    }
    next[i] = mul_mod(mod_reduce(-start, p), mod_inv(step % p, p), p);
  }

  std::vector<i64> residual;
  std::vector<Factorization> facs;
  for (i64 base = 0; base < count; base += kSegmentLength) {
    const i64 len = std::min(kSegmentLength, count - base);
    residual.resize(static_cast<std::size_t>(len));
    facs.resize(static_cast<std::size_t>(len));
    for (auto& f : facs) f.factors.clear();
    for (i64 i = 0; i < len; ++i) residual[static_cast<std::size_t>(i)] = start + step * (base + i);

    for (std::size_t pi = 0; pi < primes.size(); ++pi) {
      if (next[pi] < 0) continue;
      const i64 p = primes[pi];
      const i64 stride = step % p == 0 ? 1 : p;
      i64 l = next[pi];
      for (; l < base + len; l += stride) {
        auto& r = residual[static_cast<std::size_t>(l - base)];
        int e = 0;
        while (r % p == 0) {
          r /= p;
          ++e;
        }
        if (e > 0) facs[static_cast<std::size_t>(l - base)].factors.push_back({p, e});
      }
      next[pi] = l;
    }
    for (i64 i = 0; i < len; ++i) {
      auto& f = facs[static_cast<std::size_t>(i)];
      if (residual[static_cast<std::size_t>(i)] > 1) {
        f.factors.push_back({residual[static_cast<std::size_t>(i)], 1});
      }
      visit(base + i, f);
    }
  }
}

}  // namespace mhull

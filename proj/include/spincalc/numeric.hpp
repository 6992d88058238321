#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

namespace spincalc {

using Rat = boost::multiprecision::mpq_rational;
using Int = boost::multiprecision::mpz_int;

/// Error classes: genericity failures are recoverable by resampling; usage
/// errors indicate invalid parameters and map to a distinct CLI exit code.
struct GenericityError : std::runtime_error {
  explicit GenericityError(const std::string& m) : std::runtime_error(m) {}
};
struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& m) : std::runtime_error(m) {}
};

/// Deterministic 64-bit generator (SplitMix64).  All randomness in the
/// toolkit derives from one seed through this generator, so identical
/// configurations reproduce identical output byte-for-byte on any platform.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform value in [0, n) by rejection; unbiased and reproducible.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw UsageError("SplitMix64::below: empty range");
    std::uint64_t rem = std::uint64_t(-n) % n;  // 2^64 mod n
    std::uint64_t threshold = std::uint64_t(0) - rem;
    for (;;) {
      std::uint64_t x = next();
      if (rem == 0 || x < threshold) return x % n;
    }
  }
};

inline Int isqrt_floor(const Int& n) {
  if (n < 0) throw UsageError("isqrt of negative value");
  return boost::multiprecision::sqrt(n);
}

inline bool is_perfect_square(const Int& n, Int* root = nullptr) {
  if (n < 0) return false;
  Int r = isqrt_floor(n);
  if (r * r == n) {
    if (root) *root = r;
    return true;
  }
  return false;
}

/// Exact square test for rationals; a/b is a square iff both a and b are
/// (after canonicalization b > 0).
inline bool is_perfect_square(const Rat& q, Rat* root = nullptr) {
  if (q < 0) return false;
  Int rn, rd;
  if (!is_perfect_square(Int(numerator(q)), &rn)) return false;
  if (!is_perfect_square(Int(denominator(q)), &rd)) return false;
  if (root) *root = Rat(rn, rd);
  return true;
}

namespace detail {

inline Int mulmod(const Int& a, const Int& b, const Int& m) { return (a * b) % m; }

inline Int powmod(Int base, Int exp, const Int& m) {
  base %= m;
  if (base < 0) base += m;
  Int acc = 1;
  while (exp > 0) {
    if ((exp & 1) != 0) acc = mulmod(acc, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return acc;
}

}  // namespace detail

/// Deterministic Miller-Rabin.  The fixed base set decides correctly for all
/// n < 3.3e24, far beyond anything the toolkit touches.
inline bool is_prime(const Int& n) {
  if (n < 2) return false;
  for (int sp : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n == sp) return true;
    if (n % sp == 0) return false;
  }
  Int d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (int a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    Int x = detail::powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 0; i + 1 < r; ++i) {
      x = detail::mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

/// Integer factorization: trial division then Pollard rho (Brent variant,
/// fixed deterministic parameters).  Inputs here are coefficient-sized.
inline void factor_into(Int n, std::map<Int, int>& out) {
  if (n < 0) n = -n;
  if (n <= 1) return;
  for (Int p : {Int(2), Int(3), Int(5)}) {
    while (n % p == 0) {
      out[p]++;
      n /= p;
    }
  }
  Int f = 7;
  const int wheel[8] = {4, 2, 4, 2, 4, 6, 2, 6};
  int wi = 0;
  while (f * f <= n && f < 100000) {
    while (n % f == 0) {
      out[f]++;
      n /= f;
    }
    f += wheel[wi];
    wi = (wi + 1) & 7;
  }
  if (n == 1) return;
  if (n < Int(100000) * 100000 || is_prime(n)) {
    out[n]++;
    return;
  }
  // Pollard rho with deterministic restarts.
  for (Int c = 1;; ++c) {
    Int x = 2, y = 2, d = 1;
    auto step = [&](const Int& v) { return (detail::mulmod(v, v, n) + c) % n; };
    while (d == 1) {
      x = step(x);
      y = step(step(y));
      d = boost::multiprecision::gcd(Int(boost::multiprecision::abs(x - y)), n);
    }
    if (d != n) {
      factor_into(d, out);
      factor_into(n / d, out);
      return;
    }
  }
}

inline std::map<Int, int> factor_integer(const Int& n) {
  std::map<Int, int> out;
  factor_into(n, out);
  return out;
}

/// Squarefree part: n with all even prime powers removed (sign preserved).
inline Int squarefree_part(const Int& n) {
  if (n == 0) return 0;
  Int m = n < 0 ? -n : n;
  Int out = n < 0 ? -1 : 1;
  for (auto& [p, e] : factor_integer(m))
    if (e % 2 == 1) out *= p;
  return out;
}

}  // namespace spincalc

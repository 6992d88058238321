#pragma once

#include "spincalc/numeric.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace spincalc {

// ---------------------------------------------------------------------------
// Prime field element.  Each element carries its modulus so values stay
// self-describing; a default-constructed element is the zero of any modulus
// (p == 0) and adopts the other operand's modulus on first combination.
// ---------------------------------------------------------------------------

struct Fp {
  std::uint64_t v = 0;
  std::uint64_t p = 0;

  friend auto operator<=>(const Fp&, const Fp&) = default;
};

namespace detail {

inline std::uint64_t fp_join(std::uint64_t a, std::uint64_t b) {
  if (a == 0) return b;
  if (b == 0) return a;
  if (a != b) throw UsageError("prime-field elements have mismatched moduli");
  return a;
}

inline std::uint64_t fp_mulraw(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return std::uint64_t((__uint128_t)a * b % p);
}

inline std::uint64_t fp_powraw(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t acc = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) acc = fp_mulraw(acc, a, p);
    a = fp_mulraw(a, a, p);
    e >>= 1;
  }
  return acc;
}

}  // namespace detail

inline Fp operator+(const Fp& a, const Fp& b) {
  std::uint64_t p = detail::fp_join(a.p, b.p);
  if (p == 0) return Fp{};
  std::uint64_t s = a.v + b.v;
  if (s >= p) s -= p;
  return Fp{s, p};
}

inline Fp operator-(const Fp& a) {
  if (a.p == 0) return a;
  return Fp{a.v == 0 ? 0 : a.p - a.v, a.p};
}

inline Fp operator-(const Fp& a, const Fp& b) { return a + (-b); }

inline Fp operator*(const Fp& a, const Fp& b) {
  std::uint64_t p = detail::fp_join(a.p, b.p);
  if (p == 0) return Fp{};
  return Fp{detail::fp_mulraw(a.v, b.v, p), p};
}

inline Fp inverse(const Fp& a) {
  if (a.p == 0 || a.v == 0) throw UsageError("inverse of zero in prime field");
  return Fp{detail::fp_powraw(a.v, a.p - 2, a.p), a.p};
}

inline Fp operator/(const Fp& a, const Fp& b) { return a * inverse(b); }
inline Fp& operator+=(Fp& a, const Fp& b) { return a = a + b; }
inline Fp& operator-=(Fp& a, const Fp& b) { return a = a - b; }
inline Fp& operator*=(Fp& a, const Fp& b) { return a = a * b; }
inline Fp& operator/=(Fp& a, const Fp& b) { return a = a / b; }

/// Legendre symbol: 1 for nonzero squares, -1 for non-squares, 0 for zero.
inline int legendre(const Fp& a) {
  if (a.v == 0) return 0;
  std::uint64_t l = detail::fp_powraw(a.v, (a.p - 1) / 2, a.p);
  return l == 1 ? 1 : -1;
}

/// Square root mod an odd prime (Tonelli-Shanks, deterministic non-residue
/// scan).  Returns the smaller of the two roots; throws on non-squares.
inline Fp sqrt_mod(const Fp& a) {
  if (a.v == 0) return a;
  std::uint64_t p = a.p;
  if (legendre(a) != 1) throw UsageError("sqrt_mod: not a quadratic residue");
  std::uint64_t r;
  if (p % 4 == 3) {
    r = detail::fp_powraw(a.v, (p + 1) / 4, p);
  } else {
    std::uint64_t q = p - 1, s = 0;
    while ((q & 1) == 0) {
      q >>= 1;
      ++s;
    }
    std::uint64_t z = 2;
    while (legendre(Fp{z, p}) != -1) ++z;
    std::uint64_t m = s;
    std::uint64_t c = detail::fp_powraw(z, q, p);
    std::uint64_t t = detail::fp_powraw(a.v, q, p);
    r = detail::fp_powraw(a.v, (q + 1) / 2, p);
    while (t != 1) {
      std::uint64_t i = 0, tt = t;
      while (tt != 1) {
        tt = detail::fp_mulraw(tt, tt, p);
        ++i;
      }
      std::uint64_t b = c;
      for (std::uint64_t j = 0; j + i + 1 < m; ++j) b = detail::fp_mulraw(b, b, p);
      m = i;
      c = detail::fp_mulraw(b, b, p);
      t = detail::fp_mulraw(t, c, p);
      r = detail::fp_mulraw(r, b, p);
    }
  }
  return Fp{std::min(r, p - r), p};
}

// ---------------------------------------------------------------------------
// Quadratic extension element a + b*sqrt(d) over a base field element type.
// The defining non-square d rides along in each element (zero-d elements are
// universal zeros/base-field constants and adopt d on combination).
// ---------------------------------------------------------------------------

template <class E>
struct Quad {
  E a{}, b{}, d{};

  friend auto operator<=>(const Quad&, const Quad&) = default;
};

namespace detail {

template <class E>
E quad_join_d(const E& x, const E& y) {
  if (x == E{}) return y;
  if (y == E{}) return x;
  if (!(x == y)) throw UsageError("quadratic-extension elements have mismatched radicands");
  return x;
}

}  // namespace detail

template <class E>
Quad<E> operator+(const Quad<E>& x, const Quad<E>& y) {
  return Quad<E>{x.a + y.a, x.b + y.b, detail::quad_join_d(x.d, y.d)};
}
template <class E>
Quad<E> operator-(const Quad<E>& x) {
  return Quad<E>{-x.a, -x.b, x.d};
}
template <class E>
Quad<E> operator-(const Quad<E>& x, const Quad<E>& y) {
  return x + (-y);
}
template <class E>
Quad<E> operator*(const Quad<E>& x, const Quad<E>& y) {
  E d = detail::quad_join_d(x.d, y.d);
  return Quad<E>{x.a * y.a + x.b * y.b * d, x.a * y.b + x.b * y.a, d};
}
template <class E>
Quad<E> conjugate(const Quad<E>& x) {
  return Quad<E>{x.a, -x.b, x.d};
}
template <class E>
E norm(const Quad<E>& x) {
  return x.a * x.a - x.b * x.b * x.d;
}
template <class E>
Quad<E> inverse(const Quad<E>& x) {
  E n = norm(x);
  if (n == E{} && x.b == E{} && x.a == E{}) throw UsageError("inverse of zero in quadratic extension");
  if (n == E{}) throw UsageError("quadratic extension is degenerate: radicand is a square");
  E inv_n = E(1) / n;  // requires E to construct from int; specialized below for Fp
  return Quad<E>{x.a * inv_n, -x.b * inv_n, x.d};
}

// Fp has no int constructor; provide the inverse via the field op instead.
template <>
inline Quad<Fp> inverse(const Quad<Fp>& x) {
  Fp n = norm(x);
  if (n.v == 0) {
    if (x.a.v == 0 && x.b.v == 0) throw UsageError("inverse of zero in quadratic extension");
    throw UsageError("quadratic extension is degenerate: radicand is a square");
  }
  Fp inv_n = inverse(n);
  return Quad<Fp>{x.a * inv_n, -x.b * inv_n, x.d};
}

template <class E>
Quad<E> operator/(const Quad<E>& x, const Quad<E>& y) {
  return x * inverse(y);
}
template <class E>
Quad<E>& operator+=(Quad<E>& x, const Quad<E>& y) {
  return x = x + y;
}
template <class E>
Quad<E>& operator-=(Quad<E>& x, const Quad<E>& y) {
  return x = x - y;
}
template <class E>
Quad<E>& operator*=(Quad<E>& x, const Quad<E>& y) {
  return x = x * y;
}

// ---------------------------------------------------------------------------
// Field descriptors.  Generic algorithms (polynomials, elimination, the
// sampler pipeline) take a descriptor K with K::Elem and use it to mint
// constants; elements themselves carry whatever runtime data they need.
// ---------------------------------------------------------------------------

struct RatField {
  using Elem = Rat;

  Rat zero() const { return Rat(0); }
  Rat one() const { return Rat(1); }
  Rat from_int(long long k) const { return Rat(k); }
  bool is_zero(const Rat& x) const { return x.is_zero(); }
  std::uint64_t characteristic() const { return 0; }
  std::string str(const Rat& x) const { return x.str(); }
};

struct PrimeField {
  std::uint64_t p = 0;
  using Elem = Fp;

  PrimeField() = default;
  explicit PrimeField(std::uint64_t prime) : p(prime) {
    if (p < 3 || p % 2 == 0 || !is_prime(Int(p)))
      throw UsageError("field characteristic must be an odd prime, got " + std::to_string(prime));
  }

  Fp zero() const { return Fp{0, p}; }
  Fp one() const { return Fp{1 % p, p}; }
  Fp from_int(long long k) const {
    long long r = k % (long long)p;
    if (r < 0) r += (long long)p;
    return Fp{(std::uint64_t)r, p};
  }
  Fp elem(std::uint64_t v) const { return Fp{v % p, p}; }
  bool is_zero(const Fp& x) const { return x.v == 0; }
  std::uint64_t characteristic() const { return p; }
  std::string str(const Fp& x) const { return std::to_string(x.v); }
};

/// Quadratic extension K(sqrt(d)) of a base field.  Used when a conic has no
/// point over the base field but acquires one over a degree-2 extension.
template <class Base>
struct QuadExt {
  Base base;
  typename Base::Elem d;
  using Elem = Quad<typename Base::Elem>;

  QuadExt() = default;
  QuadExt(Base b, typename Base::Elem dd) : base(b), d(dd) {
    if (base.is_zero(d)) throw UsageError("quadratic extension radicand must be nonzero");
  }

  Elem zero() const { return Elem{base.zero(), base.zero(), d}; }
  Elem one() const { return Elem{base.one(), base.zero(), d}; }
  Elem from_int(long long k) const { return Elem{base.from_int(k), base.zero(), d}; }
  Elem lift(const typename Base::Elem& a) const { return Elem{a, base.zero(), d}; }
  Elem sqrt_d() const { return Elem{base.zero(), base.one(), d}; }
  Elem make(const typename Base::Elem& a, const typename Base::Elem& b) const { return Elem{a, b, d}; }
  bool is_zero(const Elem& x) const { return base.is_zero(x.a) && base.is_zero(x.b); }
  std::uint64_t characteristic() const { return base.characteristic(); }
  std::string str(const Elem& x) const {
    return base.str(x.a) + "+" + base.str(x.b) + "*sqrt(" + base.str(d) + ")";
  }
};

using QuadRatField = QuadExt<RatField>;
using QuadPrimeField = QuadExt<PrimeField>;

}  // namespace spincalc

#pragma once

#include "spincalc/forms.hpp"

#include <algorithm>
#include <utility>
#include <vector>

namespace spincalc {

/// Multiset of (multiplicity, degree) pairs describing the irreducible
/// factorization of a binary form over the coefficient field, sorted
/// ascending.  Scalars are dropped.
struct FactorPattern {
  std::vector<std::pair<int, int>> parts;

  friend bool operator==(const FactorPattern& a, const FactorPattern& b) { return a.parts == b.parts; }
};

// ---------------------------------------------------------------------------
// Dense univariate polynomial helpers (ascending coefficients) over a field.
// ---------------------------------------------------------------------------

namespace upoly {

template <class K>
using P = std::vector<typename K::Elem>;

template <class K>
void trim(const K& f, P<K>& a) {
  while (!a.empty() && f.is_zero(a.back())) a.pop_back();
}

template <class K>
int deg(const P<K>& a) {
  return (int)a.size() - 1;
}

template <class K>
bool is_one(const K& f, const P<K>& a) {
  return a.size() == 1 && f.is_zero(a[0] - f.one());
}

template <class K>
P<K> mul(const K& f, const P<K>& a, const P<K>& b) {
  if (a.empty() || b.empty()) return {};
  P<K> out(a.size() + b.size() - 1, f.zero());
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  trim(f, out);
  return out;
}

template <class K>
P<K> sub(const K& f, P<K> a, const P<K>& b) {
  if (a.size() < b.size()) a.resize(b.size(), f.zero());
  for (size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  trim(f, a);
  return a;
}

template <class K>
P<K> monic(const K& f, P<K> a) {
  if (a.empty()) return a;
  auto inv = f.one() / a.back();
  for (auto& x : a) x = inv * x;
  return a;
}

template <class K>
std::pair<P<K>, P<K>> divmod(const K& f, P<K> num, const P<K>& den) {
  if (den.empty()) throw UsageError("univariate division by zero");
  if (num.size() < den.size()) return {{}, std::move(num)};
  auto lead_inv = f.one() / den.back();
  P<K> q(num.size() - den.size() + 1, f.zero());
  for (int i = (int)num.size() - 1; i >= (int)den.size() - 1; --i) {
    if (f.is_zero(num[i])) continue;
    auto coef = num[i] * lead_inv;
    q[i - ((int)den.size() - 1)] = coef;
    for (size_t j = 0; j < den.size(); ++j) num[i - (den.size() - 1) + j] -= coef * den[j];
  }
  trim(f, num);
  trim(f, q);
  return {std::move(q), std::move(num)};
}

template <class K>
P<K> mod(const K& f, P<K> num, const P<K>& den) {
  return divmod(f, std::move(num), den).second;
}

template <class K>
P<K> div_exact(const K& f, const P<K>& num, const P<K>& den) {
  auto [q, r] = divmod(f, num, den);
  if (!r.empty()) throw std::logic_error("univariate division expected to be exact");
  return q;
}

template <class K>
P<K> gcd(const K& f, P<K> a, P<K> b) {
  while (!b.empty()) {
    auto r = mod(f, std::move(a), b);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(f, std::move(a));
}

template <class K>
P<K> derivative(const K& f, const P<K>& a) {
  if (a.size() <= 1) return {};
  P<K> out(a.size() - 1, f.zero());
  for (size_t i = 1; i < a.size(); ++i) out[i - 1] = f.from_int((long long)i) * a[i];
  trim(f, out);
  return out;
}

template <class K>
typename K::Elem eval(const K& f, const P<K>& a, const typename K::Elem& x) {
  auto acc = f.zero();
  for (int i = (int)a.size() - 1; i >= 0; --i) acc = acc * x + a[i];
  return acc;
}

/// f(x + c) via Horner recomposition.
template <class K>
P<K> shift(const K& f, const P<K>& a, const typename K::Elem& c) {
  P<K> acc;
  P<K> lin = {c, f.one()};
  for (int i = (int)a.size() - 1; i >= 0; --i) {
    acc = mul(f, acc, lin);
    if (acc.empty()) acc = {a[i]};
    else acc[0] += a[i];
    trim(f, acc);
  }
  return acc;
}

template <class K>
P<K> powmod(const K& f, P<K> base, Int e, const P<K>& m) {
  P<K> result = {f.one()};
  base = mod(f, std::move(base), m);
  while (e > 0) {
    if ((e & 1) != 0) result = mod(f, mul(f, result, base), m);
    e >>= 1;
    if (e > 0) base = mod(f, mul(f, base, base), m);
  }
  return result;
}

}  // namespace upoly

// ---------------------------------------------------------------------------
// Squarefree decomposition (Yun; with p-th power handling in characteristic
// p), distinct-degree and equal-degree factorization over a prime field, and
// bounded-degree splitting over the rationals.
// ---------------------------------------------------------------------------

namespace detail {

/// Yun's algorithm.  In characteristic p a p-th power survives in the final
/// gcd chain and is handled by recursing on its p-th root.
template <class K>
std::vector<std::pair<upoly::P<K>, int>> squarefree_decompose(const K& f, upoly::P<K> a) {
  using namespace upoly;
  std::vector<std::pair<P<K>, int>> out;
  a = monic(f, std::move(a));
  if (deg<K>(a) <= 0) return out;
  P<K> da = derivative(f, a);
  if (da.empty()) {
    // a = b(x^p) in characteristic p; coefficients are fixed by Frobenius.
    long long p = (long long)f.characteristic();
    if (p == 0) throw std::logic_error("zero derivative for nonconstant polynomial in characteristic 0");
    P<K> b;
    for (size_t i = 0; i < a.size(); i += (size_t)p) b.push_back(a[i]);
    auto inner = squarefree_decompose(f, std::move(b));
    for (auto& [part, m] : inner) out.emplace_back(part, m * (int)p);
    return out;
  }
  P<K> c = gcd(f, a, da);
  P<K> w = div_exact(f, a, c);
  int i = 1;
  while (deg<K>(w) > 0) {
    P<K> y = gcd(f, w, c);
    P<K> z = div_exact(f, w, y);
    if (deg<K>(z) > 0) out.emplace_back(monic(f, z), i);
    w = std::move(y);
    c = div_exact(f, c, w);
    ++i;
  }
  if (deg<K>(c) > 0) {
    // Leftover p-th power part.
    auto inner = squarefree_decompose(f, std::move(c));
    for (auto& [part, m] : inner) out.emplace_back(part, m);
  }
  return out;
}

/// Distinct-degree split of a monic squarefree polynomial over a prime field:
/// returns (product of degree-d irreducibles, d).
inline std::vector<std::pair<upoly::P<PrimeField>, int>> ddf(const PrimeField& f, upoly::P<PrimeField> a) {
  using namespace upoly;
  std::vector<std::pair<P<PrimeField>, int>> out;
  P<PrimeField> x = {f.zero(), f.one()};
  P<PrimeField> h = x;  // x^(p^i) mod a, iterated
  int d = 0;
  while (deg<PrimeField>(a) >= 2 * (d + 1)) {
    ++d;
    h = upoly::powmod(f, h, Int(f.p), a);
    P<PrimeField> g = gcd(f, a, sub(f, h, x));
    if (deg<PrimeField>(g) > 0) {
      out.emplace_back(g, d);
      a = div_exact(f, a, g);
      h = mod(f, std::move(h), a);
    }
  }
  if (deg<PrimeField>(a) > 0) out.emplace_back(a, deg<PrimeField>(a));
  return out;
}

/// Deterministic equal-degree factorization: splits a monic product of k>=1
/// distinct irreducibles of degree d by sweeping trial polynomials u in a
/// fixed base-p enumeration and taking gcd(a, u^((p^d-1)/2) - 1).
inline void edf(const PrimeField& f, upoly::P<PrimeField> a, int d, std::vector<upoly::P<PrimeField>>& out) {
  using namespace upoly;
  if (deg<PrimeField>(a) == d) {
    out.push_back(monic(f, std::move(a)));
    return;
  }
  Int e = (boost::multiprecision::pow(Int(f.p), (unsigned)d) - 1) / 2;
  for (Int idx = f.p;; ++idx) {
    // Interpret idx in base p as the coefficient vector of u (degree >= 1).
    P<PrimeField> u;
    Int t = idx;
    while (t > 0) {
      u.push_back(f.from_int((long long)(uint64_t)(t % f.p)));
      t /= f.p;
    }
    trim(f, u);
    if (deg<PrimeField>(u) < 1 || deg<PrimeField>(u) > 2 * d - 1) continue;
    P<PrimeField> w = upoly::powmod(f, u, e, a);
    if (w.empty()) continue;
    w[0] -= f.one();
    trim(f, w);
    P<PrimeField> g = gcd(f, a, w);
    int gd = deg<PrimeField>(g);
    if (gd > 0 && gd < deg<PrimeField>(a)) {
      edf(f, g, d, out);
      edf(f, div_exact(f, a, g), d, out);
      return;
    }
  }
}

inline Int rat_num(const Rat& q) { return boost::multiprecision::numerator(q); }
inline Int rat_den(const Rat& q) { return boost::multiprecision::denominator(q); }

/// All positive divisors of |n| (n != 0), unsorted.
inline std::vector<Int> all_divisors(Int n) {
  if (n < 0) n = -n;
  auto fac = factor_integer(n);
  std::vector<Int> divs = {Int(1)};
  for (auto& [p, e] : fac) {
    std::vector<Int> next;
    Int pk = 1;
    for (int k = 0; k <= e; ++k) {
      for (auto& dv : divs) next.push_back(dv * pk);
      pk *= p;
    }
    divs = std::move(next);
  }
  return divs;
}

/// Rational roots of a rational-coefficient polynomial (nonzero constant and
/// leading coefficients assumed), by the rational root theorem.
inline std::vector<Rat> rational_roots(const RatField& f, const upoly::P<RatField>& a) {
  using namespace upoly;
  // Clear denominators to an integer polynomial.
  Int den_lcm = 1;
  for (auto& c : a) den_lcm = boost::multiprecision::lcm(den_lcm, rat_den(c));
  std::vector<Int> ic;
  for (auto& c : a) ic.push_back(rat_num(c * Rat(den_lcm)));
  Int content = 0;
  for (auto& c : ic) content = boost::multiprecision::gcd(content, c);
  for (auto& c : ic) c /= content;
  std::vector<Rat> roots;
  auto nums = all_divisors(ic.front());
  auto dens = all_divisors(ic.back());
  for (auto& nu : nums)
    for (auto& de : dens) {
      if (boost::multiprecision::gcd(nu, de) != 1) continue;
      for (int sign = 0; sign < 2; ++sign) {
        Rat cand = sign == 0 ? Rat(nu, de) : Rat(-nu, de);
        if (f.is_zero(eval(f, a, cand))) roots.push_back(cand);
      }
    }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

/// Attempt to split a monic rational quartic with no rational roots into two
/// monic quadratics.  Returns true on success (factors then verified).
inline bool quartic_splits(const RatField& f, const upoly::P<RatField>& a) {
  using namespace upoly;
  // Depress: x -> y - p/4 removes the cubic term; the split pattern is
  // invariant under the shift.
  Rat p = a[3];
  P<RatField> dep = shift(f, a, Rat(-p / 4));
  Rat Q = dep[2], R = dep[1], S = dep[0];
  auto check = [&](const Rat& aa, const Rat& b, const Rat& d) {
    P<RatField> f1 = {b, aa, Rat(1)};
    P<RatField> f2 = {d, -aa, Rat(1)};
    return mul(f, f1, f2) == dep;
  };
  if (f.is_zero(R)) {
    // Biquadratic: (y^2+b)(y^2+d) with b+d=Q, bd=S ...
    Rat disc = Q * Q - 4 * S, w;
    if (is_perfect_square(disc, &w)) {
      Rat b = (Q + w) / 2, d = (Q - w) / 2;
      if (check(Rat(0), b, d)) return true;
    }
    // ... or (y^2+ay+b)(y^2-ay+b) with b^2=S, a^2=2b-Q.
    Rat sq;
    if (is_perfect_square(S, &sq)) {
      for (const Rat& b : {Rat(sq), Rat(-sq)}) {
        Rat asq = 2 * b - Q, aa;
        if (is_perfect_square(asq, &aa) && check(aa, b, b)) return true;
      }
    }
    return false;
  }
  // General case: a^2 = A satisfies A^3 + 2Q A^2 + (Q^2-4S) A - R^2 = 0.
  P<RatField> cubic = {-R * R, Q * Q - 4 * S, 2 * Q, Rat(1)};
  for (auto& A : rational_roots(f, cubic)) {
    if (A <= 0) continue;
    Rat aa;
    if (!is_perfect_square(A, &aa)) continue;
    Rat sum = Q + A, diff = R / aa;
    Rat b = (sum - diff) / 2, d = (sum + diff) / 2;
    if (check(aa, b, d)) return true;
  }
  return false;
}

/// Attempt to split a monic rational quintic with no rational roots into a
/// monic quadratic times a monic cubic, by eliminating one unknown from the
/// coefficient equations and searching rational roots of the resultant.
inline bool quintic_splits(const RatField& f, const upoly::P<RatField>& a) {
  using namespace upoly;
  Rat p1 = a[4], p2 = a[3], p3 = a[2], p4 = a[1], p5 = a[0];
  // f = (x^2 + a x + b)(x^3 + c x^2 + d x + e) forces c = p1 - a,
  // d = d0(a) - b with d0 = p2 - a*p1 + a^2, e = e0(a) + b(2a - p1) with
  // e0 = p3 - a*d0, and leaves E1 = a e + b d - p4 = 0, E2 = b e - p5 = 0.
  // Both are quadratics in b with coefficients in Q[a]; eliminate b with a
  // Sylvester resultant over Q[a] and search its rational roots.
  using PA = P<RatField>;                                // polynomials in a
  PA d0 = {p2, -p1, Rat(1)};                             // p2 - p1 a + a^2
  PA e0 = sub(f, {p3}, mul(f, {Rat(0), Rat(1)}, d0));    // p3 - a d0
  PA lin = {-p1, Rat(2)};                                // 2a - p1
  // E1 coefficients by powers of b.
  PA e1_0 = sub(f, mul(f, {Rat(0), Rat(1)}, e0), {p4});  // a e0 - p4
  PA e1_1 = sub(f, mul(f, {Rat(0), Rat(1)}, lin), sub(f, {}, d0));  // a(2a-p1) + d0
  PA e1_2 = {Rat(-1)};
  // E2 coefficients by powers of b.
  PA e2_0 = {-p5};
  PA e2_1 = e0;
  PA e2_2 = lin;
  // 4x4 Sylvester determinant over Q[a] via cofactor expansion (tiny).
  auto pm = [&](const PA& x, const PA& y) { return mul(f, x, y); };
  auto ps = [&](const PA& x, const PA& y) { return sub(f, x, y); };
  auto pa = [&](const PA& x, const PA& y) { return sub(f, x, sub(f, PA{}, y)); };
  std::array<std::array<PA, 4>, 4> M = {{{e1_2, e1_1, e1_0, PA{}},
                                         {PA{}, e1_2, e1_1, e1_0},
                                         {e2_2, e2_1, e2_0, PA{}},
                                         {PA{}, e2_2, e2_1, e2_0}}};
  auto minor2 = [&](int r0, int r1, int c0, int c1) {
    return ps(pm(M[r0][c0], M[r1][c1]), pm(M[r0][c1], M[r1][c0]));
  };
  auto det3 = [&](int r0, int r1, int r2, int c0, int c1, int c2) {
    PA t0 = pm(M[r0][c0], minor2(r1, r2, c1, c2));
    PA t1 = pm(M[r0][c1], minor2(r1, r2, c0, c2));
    PA t2 = pm(M[r0][c2], minor2(r1, r2, c0, c1));
    return pa(ps(t0, t1), t2);
  };
  PA res{};
  for (int c = 0; c < 4; ++c) {
    int cc[3], k = 0;
    for (int j = 0; j < 4; ++j)
      if (j != c) cc[k++] = j;
    PA term = pm(M[0][c], det3(1, 2, 3, cc[0], cc[1], cc[2]));
    res = (c % 2 == 0) ? pa(res, term) : ps(res, term);
  }
  auto try_pair = [&](const Rat& av, const Rat& bv) {
    Rat cv = p1 - av;
    Rat dv = eval(f, d0, av) - bv;
    Rat ev = eval(f, e0, av) + bv * (2 * av - p1);
    P<RatField> quad = {bv, av, Rat(1)};
    P<RatField> cub = {ev, dv, cv, Rat(1)};
    return mul(f, quad, cub) == a;
  };
  std::vector<Rat> cands;
  if (!res.empty() && res.front() != 0 && deg<RatField>(res) >= 1) {
    cands = rational_roots(f, res);
  } else if (res.empty()) {
    // Degenerate elimination: fall back to a bounded direct search.
    for (long long n = -64; n <= 64; ++n) cands.push_back(Rat(n));
  } else {
    // Resultant has zero constant term: a = 0 is a candidate too.
    PA shifted = res;
    while (!shifted.empty() && shifted.front() == 0) shifted.erase(shifted.begin());
    if (deg<RatField>(shifted) >= 1) cands = rational_roots(f, shifted);
    cands.push_back(Rat(0));
  }
  for (auto& av : cands) {
    // Solve E2(av, b) = 0, a quadratic (or lower) in b.
    Rat c2 = 2 * av - p1, c1 = eval(f, e0, av), c0 = -p5;
    std::vector<Rat> bs;
    if (!f.is_zero(c2)) {
      Rat disc = c1 * c1 - 4 * c2 * c0, w;
      if (!is_perfect_square(disc, &w)) continue;
      bs = {(-c1 + w) / (2 * c2), (-c1 - w) / (2 * c2)};
    } else if (!f.is_zero(c1)) {
      bs = {-c0 / c1};
    } else {
      continue;
    }
    for (auto& bv : bs)
      if (try_pair(av, bv)) return true;
  }
  return false;
}

}  // namespace detail

/// Factorization pattern of a binary form over a prime field.  The returned
/// pattern is re-verified by multiplying the discovered irreducible factors
/// back together.
inline FactorPattern factor_binary(const BForm<PrimeField>& form) {
  using namespace upoly;
  const PrimeField& f = form.field;
  if (form.is_zero()) throw UsageError("cannot factor the zero form");
  FactorPattern pat;
  int lo = 0, hi = form.degree();
  while (f.is_zero(form.c[lo])) ++lo;
  while (f.is_zero(form.c[hi])) --hi;
  if (lo > 0) pat.parts.emplace_back(lo, 1);                            // s^lo
  if (form.degree() - hi > 0) pat.parts.emplace_back(form.degree() - hi, 1);  // t^...
  P<PrimeField> core(form.c.begin() + lo, form.c.begin() + hi + 1);
  core = monic(f, std::move(core));
  P<PrimeField> rebuilt = {f.one()};
  for (auto& [part, m] : detail::squarefree_decompose(f, core)) {
    for (auto& [prod, d] : detail::ddf(f, part)) {
      std::vector<P<PrimeField>> irr;
      detail::edf(f, prod, d, irr);
      for (auto& q : irr) {
        pat.parts.emplace_back(m, deg<PrimeField>(q));
        for (int k = 0; k < m; ++k) rebuilt = mul(f, rebuilt, q);
      }
    }
  }
  if (!(rebuilt == core)) throw std::logic_error("prime-field factorization failed re-verification");
  std::sort(pat.parts.begin(), pat.parts.end());
  return pat;
}

/// Factorization pattern of a binary form over the rationals.  Squarefree
/// parts are split with exact root extraction plus quadratic/quartic/quintic
/// criteria; squarefree parts of degree six or higher are not supported.
inline FactorPattern factor_binary(const BForm<RatField>& form) {
  using namespace upoly;
  const RatField& f = form.field;
  if (form.is_zero()) throw UsageError("cannot factor the zero form");
  FactorPattern pat;
  int lo = 0, hi = form.degree();
  while (f.is_zero(form.c[lo])) ++lo;
  while (f.is_zero(form.c[hi])) --hi;
  if (lo > 0) pat.parts.emplace_back(lo, 1);
  if (form.degree() - hi > 0) pat.parts.emplace_back(form.degree() - hi, 1);
  P<RatField> core(form.c.begin() + lo, form.c.begin() + hi + 1);
  core = monic(f, std::move(core));
  P<RatField> rebuilt = {f.one()};
  for (auto& [part, m] : detail::squarefree_decompose(f, core)) {
    P<RatField> rest = part;
    for (auto& r : detail::rational_roots(f, part)) {
      pat.parts.emplace_back(m, 1);
      rest = div_exact(f, rest, {-r, Rat(1)});
    }
    for (int k = 0; k < m; ++k) rebuilt = mul(f, rebuilt, part);
    int e = deg<RatField>(rest);
    switch (e) {
      case 0:
        break;
      case 2:
      case 3:
        // No rational root: a quadratic or cubic is irreducible.
        pat.parts.emplace_back(m, e);
        break;
      case 4:
        if (detail::quartic_splits(f, rest)) {
          pat.parts.emplace_back(m, 2);
          pat.parts.emplace_back(m, 2);
        } else {
          pat.parts.emplace_back(m, 4);
        }
        break;
      case 5:
        if (detail::quintic_splits(f, rest)) {
          pat.parts.emplace_back(m, 2);
          pat.parts.emplace_back(m, 3);
        } else {
          pat.parts.emplace_back(m, 5);
        }
        break;
      default:
        throw UsageError("rational factorization supports squarefree parts of degree at most 5");
    }
  }
  if (!(rebuilt == core)) throw std::logic_error("rational factorization failed re-verification");
  std::sort(pat.parts.begin(), pat.parts.end());
  return pat;
}

}  // namespace spincalc

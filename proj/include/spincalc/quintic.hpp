#pragma once

#include "spincalc/forms.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace spincalc {

// ---------------------------------------------------------------------------
// Plane-quintic construction engine.
//
// Builds the linear system of quintics with assigned double points at two
// frame points and a simple base point at a third, projects residual
// intersections with a fixed line through the squaring map onto a projected
// Veronese surface, and samples verified two-nodal quintics whose line
// section is a perfect square times the fixed base point — the plane model
// of a genus-4 curve with an odd theta-characteristic and ten marked points.
// Everything is templated over an exact field descriptor (prime field,
// rationals, or a quadratic extension of the rationals).
// ---------------------------------------------------------------------------

/// Raised over the rationals when a conic acquires a point only over a
/// quadratic extension; `d` is the squarefree radicand of one that works.
struct ExtensionRequired : std::runtime_error {
  Int d;
  explicit ExtensionRequired(Int dd)
      : std::runtime_error(
            "conic has no rational point within the height bound; a quadratic "
            "extension contains one"),
        d(std::move(dd)) {}
};

template <class K>
struct is_quadratic_extension : std::false_type {};
template <class B>
struct is_quadratic_extension<QuadExt<B>> : std::true_type {};

// ---------------------------------------------------------------------------
// Field-specific hooks: square roots, deterministic element ordering, and
// seeded element draws.  Everything downstream is field-generic.
// ---------------------------------------------------------------------------

inline std::optional<Fp> field_sqrt(const PrimeField& f, const Fp& a) {
  if (a.v == 0) return f.zero();
  Fp x{a.v, f.p};
  if (legendre(x) != 1) return std::nullopt;
  return sqrt_mod(x);
}

inline std::optional<Rat> field_sqrt(const RatField&, const Rat& a) {
  if (a < 0) return std::nullopt;
  Rat r;
  if (is_perfect_square(a, &r)) return r;
  return std::nullopt;
}

inline std::optional<Quad<Rat>> field_sqrt(const QuadExt<RatField>& f, const Quad<Rat>& x) {
  if (!x.b.is_zero()) return std::nullopt;  // only base-field radicands arise here
  if (auto r = field_sqrt(f.base, x.a)) return f.lift(*r);
  Rat ratio = x.a / f.d;  // x.a = d * m^2 exactly when the extension was chosen for it
  if (ratio >= 0) {
    Rat m;
    if (is_perfect_square(ratio, &m)) return f.make(Rat(0), m);
  }
  return std::nullopt;
}

/// Deterministic total order used to pick one root of a quadratic: smallest
/// representative over a prime field; smallest magnitude with positive before
/// negative over the rationals.
inline bool elem_order_less(const PrimeField&, const Fp& x, const Fp& y) { return x.v < y.v; }

inline bool elem_order_less(const RatField&, const Rat& x, const Rat& y) {
  Rat ax = abs(x), ay = abs(y);
  if (ax != ay) return ax < ay;
  return x > y;  // equal magnitude: positive first
}

template <class B>
bool elem_order_less(const QuadExt<B>& f, const Quad<typename B::Elem>& x,
                     const Quad<typename B::Elem>& y) {
  if (!(x.a == y.a)) return elem_order_less(f.base, x.a, y.a);
  return elem_order_less(f.base, x.b, y.b);
}

/// One seeded element: uniform residue over a prime field; an integer in
/// [-1000, 1000] over the rationals (and lifted there over an extension, so
/// an extension re-run consumes the generator identically).
inline Fp draw_element(const PrimeField& f, SplitMix64& rng) { return f.elem(rng.below(f.p)); }

inline Rat draw_element(const RatField& f, SplitMix64& rng) {
  // A modest coordinate range keeps the exact arithmetic downstream of the
  // kernel computations from ballooning; genericity failures just retry.
  return f.from_int((long long)rng.below(41) - 20);
}

template <class B>
typename QuadExt<B>::Elem draw_element(const QuadExt<B>& f, SplitMix64& rng) {
  return f.lift(draw_element(f.base, rng));
}

// ---------------------------------------------------------------------------
// Frame: two lines, their intersection point n, and two further points on F.
// ---------------------------------------------------------------------------

template <class K>
struct FrameConfig {
  K field;
  TForm<K> L, F;                 // linear forms cutting the two lines
  Pt3<K> n, nprime, nsecond;     // n = L ∩ F; n', n'' on F only
  Pt3<K> L0, L1;                 // parametrization of L: [s:t] -> s*L0 + t*L1
  Pt3<K> F0, F1;                 // parametrization of F
};

template <class K>
FrameConfig<K> canonical_frame(const K& f) {
  FrameConfig<K> fr;
  fr.field = f;
  fr.L = TForm<K>(f, 1);
  fr.L.add_term({1, 0, 0}, f.one());  // x
  fr.F = TForm<K>(f, 1);
  fr.F.add_term({0, 1, 0}, f.one());  // y
  auto E0 = f.zero(), E1 = f.one();
  fr.n = {E0, E0, E1};
  fr.nprime = {E1, E0, E0};
  fr.nsecond = {E1, E0, E1};
  fr.L0 = {E0, E1, E0};
  fr.L1 = {E0, E0, E1};
  fr.F0 = {E1, E0, E0};
  fr.F1 = {E0, E0, E1};
  return fr;
}

/// Parameter coordinates (sigma, tau) of a point Q = sigma*P0 + tau*P1 on the
/// line spanned by P0, P1.  Throws if Q is not on the line or P0, P1 are
/// proportional.
template <class K>
std::pair<typename K::Elem, typename K::Elem> param_coords(const K& f, const Pt3<K>& P0,
                                                           const Pt3<K>& P1, const Pt3<K>& Q) {
  using E = typename K::Elem;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      E det = E(P0[i] * P1[j] - P0[j] * P1[i]);
      if (f.is_zero(det)) continue;
      E inv = E(f.one() / det);
      E sigma = E(E(Q[i] * P1[j] - Q[j] * P1[i]) * inv);
      E tau = E(E(P0[i] * Q[j] - P0[j] * Q[i]) * inv);
      for (int k = 0; k < 3; ++k)
        if (!f.is_zero(E(sigma * P0[k] + tau * P1[k] - Q[k])))
          throw UsageError("param_coords: point is not on the line");
      return {sigma, tau};
    }
  throw UsageError("param_coords: parametrization points are proportional");
}

template <class K>
void validate_frame(const FrameConfig<K>& fr) {
  const K& f = fr.field;
  if (fr.L.deg != 1 || fr.F.deg != 1 || fr.L.is_zero() || fr.F.is_zero())
    throw UsageError("degenerate frame: L and F must be nonzero linear forms");
  auto on = [&](const TForm<K>& line, const Pt3<K>& P) { return f.is_zero(tform_eval(line, P)); };
  if (!on(fr.L, fr.n) || !on(fr.F, fr.n))
    throw UsageError("degenerate frame: n must lie on both lines");
  if (!on(fr.F, fr.nprime) || !on(fr.F, fr.nsecond))
    throw UsageError("degenerate frame: n' and n'' must lie on F");
  if (on(fr.L, fr.nprime) || on(fr.L, fr.nsecond))
    throw UsageError("degenerate frame: n' and n'' must avoid L");
  if (same_projective_point(f, fr.nprime, fr.nsecond) ||
      same_projective_point(f, fr.n, fr.nprime) || same_projective_point(f, fr.n, fr.nsecond))
    throw UsageError("degenerate frame: n, n', n'' must be distinct");
  if (!on(fr.L, fr.L0) || !on(fr.L, fr.L1) || same_projective_point(f, fr.L0, fr.L1))
    throw UsageError("degenerate frame: invalid parametrization of L");
  if (!on(fr.F, fr.F0) || !on(fr.F, fr.F1) || same_projective_point(f, fr.F0, fr.F1))
    throw UsageError("degenerate frame: invalid parametrization of F");
}

/// Binary linear form on a parametrized line vanishing at the point Q.
template <class K>
BForm<K> line_form_at(const K& f, const Pt3<K>& P0, const Pt3<K>& P1, const Pt3<K>& Q) {
  auto [sigma, tau] = param_coords(f, P0, P1, Q);
  return BForm<K>(f, {-sigma, tau});  // tau*s - sigma*t
}

// ---------------------------------------------------------------------------
// The quintic system: 21 monomials, 7 linear conditions, 14-dimensional
// kernel.
// ---------------------------------------------------------------------------

inline std::vector<std::array<int, 3>> quintic_monomials() {
  std::vector<std::array<int, 3>> out;
  for (int i = 5; i >= 0; --i)
    for (int j = 5 - i; j >= 0; --j) out.push_back({i, j, 5 - i - j});
  return out;  // x^5 first, z^5 last
}

template <class K>
TForm<K> quintic_from_coeffs(const K& f, const std::vector<typename K::Elem>& v) {
  auto mons = quintic_monomials();
  if (v.size() != mons.size()) throw UsageError("quintic coefficient vector must have 21 entries");
  TForm<K> out(f, 5);
  for (size_t i = 0; i < mons.size(); ++i) out.add_term(mons[i], v[i]);
  return out;
}

template <class K>
struct QuinticSystem {
  FrameConfig<K> frame;
  std::vector<TForm<K>> basis;  // 14 independent quintics satisfying the conditions
};

template <class K>
QuinticSystem<K> quintic_system(const FrameConfig<K>& fr) {
  validate_frame(fr);
  const K& f = fr.field;
  auto mons = quintic_monomials();
  // 7 conditions: value at n, then the three first partials at n' and n''.
  // (Values at n', n'' follow from the partials by the Euler relation away
  // from characteristic 5.)
  if (f.characteristic() == 5)
    throw UsageError("field characteristic 5 degenerates the node conditions");
  Mat<K> M(f, 7, (int)mons.size());
  auto mono_eval = [&](const std::array<int, 3>& e, const Pt3<K>& P) {
    auto acc = f.one();
    for (int k = 0; k < 3; ++k)
      for (int c = 0; c < e[k]; ++c) acc = acc * P[k];
    return acc;
  };
  auto mono_partial_eval = [&](const std::array<int, 3>& e, int var, const Pt3<K>& P) {
    if (e[var] == 0) return f.zero();
    auto ne = e;
    ne[var] -= 1;
    return f.from_int(e[var]) * mono_eval(ne, P);
  };
  for (int c = 0; c < (int)mons.size(); ++c) {
    M.at(0, c) = mono_eval(mons[c], fr.n);
    for (int var = 0; var < 3; ++var) {
      M.at(1 + var, c) = mono_partial_eval(mons[c], var, fr.nprime);
      M.at(4 + var, c) = mono_partial_eval(mons[c], var, fr.nsecond);
    }
  }
  auto kb = kernel_basis(M);
  if (kb.size() != 14)
    throw UsageError("degenerate frame: the node and base-point conditions are dependent");
  QuinticSystem<K> sys;
  sys.frame = fr;
  sys.basis.reserve(kb.size());
  for (auto& v : kb) sys.basis.push_back(quintic_from_coeffs(f, v));
  return sys;
}

// ---------------------------------------------------------------------------
// rho: restriction to L divided by the linear form at n — a binary quartic.
// ---------------------------------------------------------------------------

template <class K>
BForm<K> rho(const TForm<K>& gamma, const FrameConfig<K>& fr) {
  const K& f = fr.field;
  if (gamma.deg != 5) throw UsageError("rho expects a quintic");
  BForm<K> r = restrict_to_line(gamma, fr.L, fr.L0, fr.L1);
  if (r.is_zero()) return r;  // L divides gamma: kernel element
  auto [sigma, tau] = param_coords(f, fr.L0, fr.L1, fr.n);
  if (!f.is_zero(bform_eval(r, sigma, tau)))
    throw UsageError("rho: the quintic does not vanish at n");
  return bform_divide_exact(r, BForm<K>(f, {-sigma, tau}));
}

/// Coefficient vector of a binary quartic in the basis (s^4, t^4, s^2 t^2,
/// s^3 t, s t^3) — the coordinates used for the projected Veronese surface.
template <class K>
std::array<typename K::Elem, 5> quartic_coords(const BForm<K>& r) {
  return {r.coeff(4), r.coeff(0), r.coeff(2), r.coeff(3), r.coeff(1)};
}

/// Rows = the five quartic coordinates, columns = the given quintics.
template <class K>
Mat<K> rho_matrix(const FrameConfig<K>& fr, const std::vector<TForm<K>>& forms) {
  const K& f = fr.field;
  Mat<K> R(f, 5, (int)forms.size());
  for (int c = 0; c < (int)forms.size(); ++c) {
    auto x = quartic_coords(rho(forms[c], fr));
    for (int r = 0; r < 5; ++r) R.at(r, c) = x[r];
  }
  return R;
}

// ---------------------------------------------------------------------------
// Restriction to marked points.
// ---------------------------------------------------------------------------

template <class K>
struct RestrictedSystem {
  std::vector<std::vector<typename K::Elem>> coords;  // in the quintic-system basis
  std::vector<TForm<K>> basis;
};

template <class K>
RestrictedSystem<K> restricted_system(const QuinticSystem<K>& sys,
                                      const std::vector<Pt3<K>>& points) {
  const K& f = sys.frame.field;
  Mat<K> M(f, (int)points.size(), (int)sys.basis.size());
  for (int r = 0; r < (int)points.size(); ++r)
    for (int c = 0; c < (int)sys.basis.size(); ++c)
      M.at(r, c) = tform_eval(sys.basis[c], points[r]);
  RestrictedSystem<K> out;
  out.coords = kernel_basis(M);
  for (auto& v : out.coords) {
    TForm<K> acc(f, 5);
    for (size_t i = 0; i < v.size(); ++i) {
      if (f.is_zero(v[i])) continue;
      acc = acc + v[i] * sys.basis[i];
    }
    out.basis.push_back(std::move(acc));
  }
  return out;
}

/// True when the points are usable for sampling: pairwise distinct, distinct
/// from the frame points, and off both frame lines.
template <class K>
bool points_valid(const FrameConfig<K>& fr, const std::vector<Pt3<K>>& points) {
  const K& f = fr.field;
  for (size_t i = 0; i < points.size(); ++i) {
    const auto& P = points[i];
    if (!(!f.is_zero(tform_eval(fr.L, P)) && !f.is_zero(tform_eval(fr.F, P)))) return false;
    if (same_projective_point(f, P, fr.n) || same_projective_point(f, P, fr.nprime) ||
        same_projective_point(f, P, fr.nsecond))
      return false;
    for (size_t j = 0; j < i; ++j)
      if (same_projective_point(f, P, points[j])) return false;
  }
  return true;
}

/// Annihilator of the rho-image of the restricted system: the hyperplane the
/// quartic points sweep.  nullopt unless the image has rank exactly 4 (so
/// the annihilator is one line); normalized so its first nonzero entry is 1.
template <class K>
std::optional<std::array<typename K::Elem, 5>> restricted_hyperplane(
    const FrameConfig<K>& fr, const std::vector<TForm<K>>& forms) {
  const K& f = fr.field;
  if (forms.size() != 4) return std::nullopt;
  Mat<K> M(f, (int)forms.size(), 5);
  for (int r = 0; r < (int)forms.size(); ++r) {
    auto x = quartic_coords(rho(forms[r], fr));
    for (int c = 0; c < 5; ++c) M.at(r, c) = x[c];
  }
  auto kb = kernel_basis(M);
  if (kb.size() != 1) return std::nullopt;
  std::array<typename K::Elem, 5> h;
  auto scale = f.zero();
  for (int i = 0; i < 5; ++i)
    if (!f.is_zero(kb[0][i])) {
      scale = f.one() / kb[0][i];
      break;
    }
  for (int i = 0; i < 5; ++i) h[i] = scale * kb[0][i];
  return h;
}

// ---------------------------------------------------------------------------
// Squaring map and the hyperplane-section conic.
// ---------------------------------------------------------------------------

/// [a:b:c] (the binary quadratic a s^2 + b t^2 + c st on L) to the quartic
/// coordinates of its square.
template <class K>
std::array<typename K::Elem, 5> squaring_map(const K& f,
                                             const std::array<typename K::Elem, 3>& q) {
  if (f.is_zero(q[0]) && f.is_zero(q[1]) && f.is_zero(q[2]))
    throw UsageError("squaring_map: zero input");
  auto two = f.from_int(2);
  return {q[0] * q[0], q[1] * q[1], q[2] * q[2] + two * q[0] * q[1], two * q[0] * q[2],
          two * q[1] * q[2]};
}

/// Ternary quadratic caa a^2 + cbb b^2 + ccc c^2 + cab ab + cac ac + cbc bc.
template <class K>
struct Conic {
  K field;
  typename K::Elem caa, cbb, ccc, cab, cac, cbc;

  typename K::Elem eval(const std::array<typename K::Elem, 3>& P) const {
    const auto &a = P[0], &b = P[1], &c = P[2];
    return caa * a * a + cbb * b * b + ccc * c * c + cab * a * b + cac * a * c + cbc * b * c;
  }
};

/// Pullback of a linear form on the quartic coordinates through the squaring
/// map: the conic cut on the source plane by a hyperplane section of the
/// projected Veronese surface.
template <class K>
Conic<K> veronese_hyperplane_conic(const K& f, const std::array<typename K::Elem, 5>& h) {
  bool all = true;
  for (auto& x : h)
    if (!f.is_zero(x)) {
      all = false;
      break;
    }
  if (all) throw UsageError("veronese_hyperplane_conic: zero hyperplane");
  auto two = f.from_int(2);
  Conic<K> C{f, h[0], h[1], h[2], two * h[2], two * h[3], two * h[4]};
  return C;
}

template <class K>
int conic_rank(const Conic<K>& C) {
  const K& f = C.field;
  auto two = f.from_int(2);
  typename K::Elem inv2 = typename K::Elem(f.one() / two);
  Mat<K> M(f, 3, 3);
  M.at(0, 0) = C.caa;
  M.at(1, 1) = C.cbb;
  M.at(2, 2) = C.ccc;
  M.at(0, 1) = M.at(1, 0) = C.cab * inv2;
  M.at(0, 2) = M.at(2, 0) = C.cac * inv2;
  M.at(1, 2) = M.at(2, 1) = C.cbc * inv2;
  return rank(M);
}

namespace detail {

/// Deterministically chosen root of A k^2 + B k + C = 0 (smallest in the
/// field's canonical order), when one exists in the field.
template <class K>
std::optional<typename K::Elem> quadratic_min_root(const K& f, const typename K::Elem& A,
                                                   const typename K::Elem& B,
                                                   const typename K::Elem& C) {
  using E = typename K::Elem;
  if (f.is_zero(A)) {
    if (f.is_zero(B)) return std::nullopt;
    return E(-C / B);
  }
  E disc = E(B * B - f.from_int(4) * A * C);
  auto r = field_sqrt(f, disc);
  if (!r) return std::nullopt;
  E inv = E(f.one() / (f.from_int(2) * A));
  E r1 = E((-B + *r) * inv);
  E r2 = E((-B - *r) * inv);
  return elem_order_less(f, r1, r2) ? r1 : r2;
}

}  // namespace detail

template <class K>
struct ConicPointOutcome {
  std::optional<std::array<typename K::Elem, 3>> point;
  Int ext_d = 0;  // set (nonzero) when only a quadratic extension has a point
};

/// Radicand in the square class of n with small square factors removed.
/// Full squarefree reduction would need a complete factorization, which is
/// out of reach for the discriminants the sampler produces over the
/// rationals; stripping squares of primes below 10^5 (and a final perfect
/// square) reduces every small case exactly and always preserves the square
/// class.
inline Int reduce_radicand(Int n) {
  if (n == 0) return 0;
  bool neg = n < 0;
  if (neg) n = -n;
  for (Int p = 2; p <= 100000; p = (p == 2 ? Int(3) : Int(p + 2))) {
    Int p2 = p * p;
    if (p2 > n) break;
    while (n % p2 == 0) n /= p2;
  }
  Int r;
  if (is_perfect_square(n, &r)) n = 1;
  return neg ? Int(-n) : n;
}

/// Deterministic staged search for a point on a rank-3 conic: coordinate
/// points, then the three coordinate lines, then lines [1 : j : *] over a
/// fixed enumeration of j.  Over a prime field a point always exists; over
/// the rationals the search is height-bounded and exhaustion reports the
/// squarefree radicand of a quadratic extension containing a point.
template <class K>
ConicPointOutcome<K> conic_point(const Conic<K>& C, long long height_bound = 10000) {
  const K& f = C.field;
  using E = typename K::Elem;
  if (conic_rank(C) < 3) throw UsageError("conic_point requires a rank-3 conic");
  auto E0 = f.zero(), E1 = f.one();
  auto mk = [&](E a, E b, E c) {
    ConicPointOutcome<K> out;
    out.point = std::array<E, 3>{a, b, c};
    return out;
  };
  // Stage 1: coordinate points.
  if (f.is_zero(C.caa)) return mk(E1, E0, E0);
  if (f.is_zero(C.cbb)) return mk(E0, E1, E0);
  if (f.is_zero(C.ccc)) return mk(E0, E0, E1);
  // Stage 2: [1 : k : 0].
  if (auto k = detail::quadratic_min_root(f, C.cbb, C.cab, C.caa)) return mk(E1, *k, E0);
  // Stage 3: [1 : 0 : k].
  if (auto k = detail::quadratic_min_root(f, C.ccc, C.cac, C.caa)) return mk(E1, E0, *k);
  // Stage 4: [0 : 1 : k].
  if (auto k = detail::quadratic_min_root(f, C.ccc, C.cbc, C.cbb)) return mk(E0, E1, *k);
  // Stage 5: [1 : j : k] over the fixed j-enumeration.
  auto try_j = [&](const E& j) -> std::optional<std::array<E, 3>> {
    E A = C.ccc;
    E B = E(C.cac + C.cbc * j);
    E Cc = E(C.caa + C.cab * j + C.cbb * j * j);
    if (auto k = detail::quadratic_min_root(f, A, B, Cc))
      return std::array<E, 3>{E1, j, *k};
    return std::nullopt;
  };
  if (f.characteristic() != 0) {
    for (std::uint64_t jj = 1; jj < f.characteristic(); ++jj)
      if (auto P = try_j(f.from_int((long long)jj))) {
        ConicPointOutcome<K> out;
        out.point = *P;
        return out;
      }
    throw std::logic_error("a rank-3 conic over a finite field must have a point");
  }
  for (long long m = 1; m <= height_bound; ++m) {
    if (auto P = try_j(f.from_int(m))) {
      ConicPointOutcome<K> out;
      out.point = *P;
      return out;
    }
    if (auto P = try_j(f.from_int(-m))) {
      ConicPointOutcome<K> out;
      out.point = *P;
      return out;
    }
  }
  if constexpr (std::is_same_v<K, RatField>) {
    // Exhausted: the restriction to the middle coordinate line (stage 3)
    // has a nonzero non-square discriminant; its squarefree part names an
    // extension with a point.
    Rat disc = C.cac * C.cac - Rat(4) * C.caa * C.ccc;
    if (disc.is_zero())
      throw std::logic_error("a vanishing line discriminant yields a rational point");
    Int d = reduce_radicand(Int(numerator(disc) * denominator(disc)));
    if (d == 1)
      throw std::logic_error("a square line discriminant yields a rational point");
    ConicPointOutcome<K> out;
    out.ext_d = d;
    return out;
  } else {
    throw std::logic_error("conic-point search exhausted over an extension field");
  }
}

/// Degree-2 parametrization of a rank-3 conic through a point P0 on it, by
/// the pencil of lines through P0: X(u,v) = C(W) P0 - 2B(P0, W) W with
/// W = u e_i + v e_j for the first coordinate pair independent of P0.
template <class K>
struct ConicParam {
  std::array<BForm<K>, 3> coords;  // binary quadratics in (u, v)

  std::array<typename K::Elem, 3> at(const typename K::Elem& u,
                                     const typename K::Elem& v) const {
    return {bform_eval(coords[0], u, v), bform_eval(coords[1], u, v),
            bform_eval(coords[2], u, v)};
  }
};

template <class K>
ConicParam<K> parametrize_conic(const Conic<K>& C, const std::array<typename K::Elem, 3>& P0) {
  const K& f = C.field;
  using E = typename K::Elem;
  if (!f.is_zero(C.eval(P0))) throw UsageError("parametrize_conic: point is not on the conic");
  // Pick the first pair (i, j) with {e_i, e_j, P0} independent, i.e. with the
  // complementary coordinate of P0 nonzero.
  int i = -1, j = -1;
  if (!f.is_zero(P0[2])) {
    i = 0, j = 1;
  } else if (!f.is_zero(P0[1])) {
    i = 0, j = 2;
  } else if (!f.is_zero(P0[0])) {
    i = 1, j = 2;
  } else {
    throw UsageError("parametrize_conic: zero point");
  }
  auto diag = [&](int k) { return k == 0 ? C.caa : (k == 1 ? C.cbb : C.ccc); };
  auto cross = [&](int a, int b) {
    if (a > b) std::swap(a, b);
    if (a == 0 && b == 1) return C.cab;
    if (a == 0 && b == 2) return C.cac;
    return C.cbc;
  };
  // C(W) = Cii u^2 + Cij uv + Cjj v^2.
  E Cii = diag(i), Cij = cross(i, j), Cjj = diag(j);
  // 2B(P0, e_k) = d/dk of C at P0.
  auto twoB = [&](int k) {
    E acc = f.from_int(2) * diag(k) * P0[k];
    for (int m = 0; m < 3; ++m)
      if (m != k) acc = acc + cross(k, m) * P0[m];
    return acc;
  };
  E Ti = twoB(i), Tj = twoB(j);
  ConicParam<K> out;
  // X_m = C(W) P0[m] - (Ti u + Tj v) W_m, with W_m = u [m==i] + v [m==j].
  for (int m = 0; m < 3; ++m) {
    // coefficients of (u^2, uv, v^2) -> BForm c = {v^2, uv, u^2}
    E cu2 = Cii * P0[m], cuv = Cij * P0[m], cv2 = Cjj * P0[m];
    if (m == i) {
      cu2 = cu2 - Ti;
      cuv = cuv - Tj;
    }
    if (m == j) {
      cuv = cuv - Ti;
      cv2 = cv2 - Tj;
    }
    out.coords[m] = BForm<K>(f, {cv2, cuv, cu2});
  }
  // The parametrization must land on the conic identically.
  BForm<K> check(f);
  auto addq = [&](BForm<K>& acc, const BForm<K>& term) {
    if (term.is_zero()) return;
    acc = acc.is_zero() ? term : acc + term;
  };
  addq(check, C.caa * (out.coords[0] * out.coords[0]));
  addq(check, C.cbb * (out.coords[1] * out.coords[1]));
  addq(check, C.ccc * (out.coords[2] * out.coords[2]));
  addq(check, C.cab * (out.coords[0] * out.coords[1]));
  addq(check, C.cac * (out.coords[0] * out.coords[2]));
  addq(check, C.cbc * (out.coords[1] * out.coords[2]));
  if (!check.is_zero()) throw std::logic_error("conic parametrization failed re-verification");
  return out;
}

/// Rank of the coefficient matrix of the three coordinate quadratics: 3 for
/// a nondegenerate parametrization.
template <class K>
int parametrization_rank(const ConicParam<K>& cp, const K& f) {
  Mat<K> M(f, 3, 3);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) M.at(r, c) = cp.coords[r].coeff(c);
  return rank(M);
}

// ---------------------------------------------------------------------------
// Verification of a sampled datum.
// ---------------------------------------------------------------------------

struct NamedCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<NamedCheck> checks;
  bool all_pass = false;
  int genus = 4;  // (5-1)(5-2)/2 - 2 for a two-nodal quintic
};

template <class K>
struct SpinDatum {
  K field;
  FrameConfig<K> frame;
  TForm<K> gamma;                        // the sampled quintic
  std::vector<Pt3<K>> points;            // ten marked points
  std::array<typename K::Elem, 3> q;     // gamma|_L = l_n (q0 s^2 + q1 t^2 + q2 st)^2
  std::uint64_t seed = 0;
  int attempts = 1;
  std::map<std::string, int> failures;   // genericity-stage failure counts
  VerifyReport report;
};

namespace detail {

template <class K>
int actual_x_degree(const TForm<K>& F) {
  int d = -1;
  for (auto& [e, v] : F.c) d = std::max(d, e[0]);
  return d;
}

/// Sylvester resultant of two forms with respect to x, taken at their actual
/// x-degrees; zero form returned for vacuous pairs (both x-free) or zero
/// inputs.  The result is a binary form in (s, t) = (y, z).
template <class K>
BForm<K> resultant_x_actual(const TForm<K>& A, const TForm<K>& B) {
  const K& f = A.field;
  int m = actual_x_degree(A), n = actual_x_degree(B);
  if (m < 0 || n < 0) return BForm<K>(f);
  if (m == 0 && n == 0) return BForm<K>(f);
  auto coeff_forms = [&](const TForm<K>& H, int xdeg) {
    std::vector<BForm<K>> out(xdeg + 1, BForm<K>(f));
    for (auto& [e, v] : H.c) {
      BForm<K> term = bform_monomial(f, e[1], e[2], v);
      out[e[0]] = out[e[0]].is_zero() ? term : out[e[0]] + term;
    }
    return out;
  };
  auto FA = coeff_forms(A, m), FB = coeff_forms(B, n);
  int size = m + n;
  std::vector<std::vector<BForm<K>>> syl(size, std::vector<BForm<K>>(size, BForm<K>(f)));
  for (int r = 0; r < n; ++r)
    for (int t = 0; t <= m; ++t) syl[r][r + t] = FA[m - t];
  for (int r = 0; r < m; ++r)
    for (int t = 0; t <= n; ++t) syl[n + r][r + t] = FB[n - t];
  return bareiss_det(std::move(syl), f);
}

/// F(x, 0, 1) as a binary form (x-degree homogenized at the actual degree):
/// finite roots x0 correspond to roots (s : t) = (x0 : 1).
template <class K>
BForm<K> x_fiber_form(const TForm<K>& F) {
  const K& f = F.field;
  std::vector<typename K::Elem> coef;
  for (auto& [e, v] : F.c) {
    if (e[1] != 0) continue;
    if ((int)coef.size() <= e[0]) coef.resize(e[0] + 1, f.zero());
    coef[e[0]] = coef[e[0]] + v;
  }
  while (!coef.empty() && f.is_zero(coef.back())) coef.pop_back();
  if (coef.empty()) return BForm<K>(f);
  return BForm<K>(f, std::move(coef));
}

/// r == lambda * e for some nonzero scalar lambda?
template <class K>
bool proportional_forms(const K& f, const BForm<K>& r, const BForm<K>& e) {
  if (r.is_zero() || e.is_zero() || r.degree() != e.degree()) return false;
  for (int i = 0; i <= e.degree(); ++i) {
    if (f.is_zero(e.coeff(i))) continue;
    typename K::Elem lambda = typename K::Elem(r.coeff(i) / e.coeff(i));
    if (f.is_zero(lambda)) return false;
    BForm<K> scaled = lambda * e;
    return scaled == r;
  }
  return false;
}

}  // namespace detail

template <class K>
VerifyReport verify_spin_datum(const SpinDatum<K>& datum) {
  const K& f = datum.field;
  const FrameConfig<K>& fr = datum.frame;
  validate_frame(fr);
  if (datum.gamma.deg != 5) throw UsageError("verify_spin_datum expects a quintic");
  VerifyReport rep;
  rep.genus = (5 - 1) * (5 - 2) / 2 - 2;
  auto push = [&](std::string name, bool pass, std::string detail = "") {
    rep.checks.push_back(NamedCheck{std::move(name), pass, std::move(detail)});
  };

  // (1) gamma|_F is the assigned contact divisor n + 2n' + 2n'' up to scalar.
  {
    BForm<K> rF = restrict_to_line(datum.gamma, fr.F, fr.F0, fr.F1);
    BForm<K> ln = line_form_at(f, fr.F0, fr.F1, fr.n);
    BForm<K> lp = line_form_at(f, fr.F0, fr.F1, fr.nprime);
    BForm<K> ls = line_form_at(f, fr.F0, fr.F1, fr.nsecond);
    BForm<K> expect = ln * (lp * lp) * (ls * ls);
    bool ok = detail::proportional_forms(f, rF, expect);
    push("restriction-to-F-matches-assigned-contact", ok,
         ok ? "" : "gamma|_F is not l_n * l_n'^2 * l_n''^2 up to scalar");
  }

  // (2) gamma|_L equals l_n times the square of the recorded quadratic,
  //     whose roots (the contact points on L) are distinct and avoid n.
  {
    BForm<K> rL = restrict_to_line(datum.gamma, fr.L, fr.L0, fr.L1);
    BForm<K> ln = line_form_at(f, fr.L0, fr.L1, fr.n);
    BForm<K> qf(f, {datum.q[1], datum.q[2], datum.q[0]});  // b t^2 + c st + a s^2
    bool ok = false;
    std::string why;
    if (qf.is_zero()) {
      why = "recorded tangency quadratic is zero";
    } else {
      BForm<K> expect = ln * (qf * qf);
      if (!(rL == expect)) {
        why = "gamma|_L differs from l_n * q^2";
      } else {
        using EE = typename K::Elem;
        EE disc = EE(datum.q[2] * datum.q[2] - f.from_int(4) * datum.q[0] * datum.q[1]);
        auto [sigma, tau] = param_coords(f, fr.L0, fr.L1, fr.n);
        if (f.is_zero(disc)) {
          why = "tangency quadratic has a double root";
        } else if (f.is_zero(bform_eval(qf, sigma, tau))) {
          why = "a tangency point collides with n";
        } else {
          ok = true;
        }
      }
    }
    push("restriction-to-L-is-ln-times-square", ok, why);
  }

  // (3) the two assigned points are nodes: gamma and its first-order part
  //     vanish there and the local degree-2 part is nondegenerate.
  {
    bool ok = true;
    std::string why;
    for (const Pt3<K>* P : {&fr.nprime, &fr.nsecond}) {
      int m = -1;
      for (int k = 0; k < 3 && m < 0; ++k)
        if (!f.is_zero((*P)[k])) m = k;
      Pt3<K> A{}, B{};
      int idx = 0;
      for (int k = 0; k < 3; ++k) {
        if (k == m) continue;
        Pt3<K> e{f.zero(), f.zero(), f.zero()};
        e[k] = f.one();
        (idx++ == 0 ? A : B) = e;
      }
      UVPoly<K> chart = tform_chart_expand(datum.gamma, *P, A, B);
      if (!f.is_zero(chart.coeff(0, 0)) || !f.is_zero(chart.coeff(1, 0)) ||
          !f.is_zero(chart.coeff(0, 1))) {
        ok = false;
        why = "an assigned point is not a base point of multiplicity two";
        break;
      }
      auto c20 = chart.coeff(2, 0), c11 = chart.coeff(1, 1), c02 = chart.coeff(0, 2);
      if (f.is_zero(c11 * c11 - f.from_int(4) * c20 * c02)) {
        ok = false;
        why = "an assigned double point is degenerate (not a node)";
        break;
      }
    }
    push("assigned-points-are-nodes", ok, why);
  }

  // (4) no unassigned singular points, by resultants of the partials taken
  //     at their actual x-degrees plus exact accounting on the fiber of the
  //     second node.  Spurious resultant roots can only fail this check,
  //     never pass it.
  {
    bool ok = true;
    std::string why;
    TForm<K> Gx = tform_partial(datum.gamma, 0);
    TForm<K> Gy = tform_partial(datum.gamma, 1);
    TForm<K> Gz = tform_partial(datum.gamma, 2);
    // The accounting projects away the first coordinate, so the first node
    // must sit at the projection center and the second on the fiber y = 0.
    Pt3<K> e0{f.one(), f.zero(), f.zero()};
    if (!same_projective_point(f, fr.nprime, e0) || !f.is_zero(fr.nsecond[1]) ||
        f.is_zero(fr.nsecond[2])) {
      ok = false;
      why = "singularity accounting requires the coordinate-adapted frame";
    } else if (Gx.is_zero() || Gy.is_zero() || Gz.is_zero()) {
      ok = false;
      why = "a partial derivative vanishes identically";
    } else {
      std::vector<BForm<K>> res;
      for (auto& r : {detail::resultant_x_actual(Gx, Gy), detail::resultant_x_actual(Gx, Gz),
                      detail::resultant_x_actual(Gy, Gz)})
        if (!r.is_zero()) res.push_back(r);
      if (res.empty()) {
        ok = false;
        why = "the partial-derivative resultants carry no information";
      } else {
        BForm<K> G = res[0];
        for (size_t i = 1; i < res.size(); ++i) G = bform_gcd(G, res[i]);
        BForm<K> s_form = bform_monomial(f, 1, 0, f.one());
        while (!G.is_zero() && G.degree() >= 1 && f.is_zero(G.coeff(0)))
          G = bform_divide_exact(G, s_form);
        if (G.degree() != 0) {
          ok = false;
          why = "a possible singular point lies off the assigned fiber";
        } else {
          // Fiber y = 0, z = 1: the common univariate root must be exactly
          // the second node's x-coordinate, with nothing else.
          BForm<K> u = bform_gcd(bform_gcd(detail::x_fiber_form(Gx), detail::x_fiber_form(Gy)),
                                 detail::x_fiber_form(Gz));
          if (u.is_zero()) {
            ok = false;
            why = "the assigned fiber is entirely singular";
          } else {
            // x-coordinate of n'' in the chart (y = 0, z = 1).
            using EE = typename K::Elem;
            EE x2 = EE(fr.nsecond[0] / fr.nsecond[2]);
            BForm<K> root_form(f, {EE(-x2), f.one()});  // s - x2 t
            int k = 0;
            while (!u.is_zero() && u.degree() >= 1 && f.is_zero(bform_eval(u, x2, f.one()))) {
              u = bform_divide_exact(u, root_form);
              ++k;
            }
            if (k < 1) {
              ok = false;
              why = "the second assigned node is not singular on its fiber";
            } else if (u.degree() != 0) {
              ok = false;
              why = "an extra singular point lies on the assigned fiber";
            }
          }
        }
      }
    }
    push("no-unassigned-singularities", ok, why);
  }

  // (5) the ten marked points lie on gamma, are pairwise distinct, and are
  //     smooth points of the curve.
  {
    bool ok = datum.points.size() == 10;
    std::string why = ok ? "" : "expected exactly ten marked points";
    TForm<K> Gx = tform_partial(datum.gamma, 0);
    TForm<K> Gy = tform_partial(datum.gamma, 1);
    TForm<K> Gz = tform_partial(datum.gamma, 2);
    for (size_t i = 0; ok && i < datum.points.size(); ++i) {
      const auto& P = datum.points[i];
      if (!f.is_zero(tform_eval(datum.gamma, P))) {
        ok = false;
        why = "a marked point is off the curve";
        break;
      }
      if (f.is_zero(tform_eval(Gx, P)) && f.is_zero(tform_eval(Gy, P)) &&
          f.is_zero(tform_eval(Gz, P))) {
        ok = false;
        why = "a marked point is singular";
        break;
      }
      for (size_t j = 0; j < i; ++j)
        if (same_projective_point(f, P, datum.points[j])) {
          ok = false;
          why = "two marked points coincide";
          break;
        }
    }
    push("marked-points-on-curve-smooth-distinct", ok, why);
  }

  rep.all_pass = true;
  for (auto& c : rep.checks) rep.all_pass = rep.all_pass && c.pass;
  return rep;
}

// ---------------------------------------------------------------------------
// The sampler.
// ---------------------------------------------------------------------------

template <class K>
SpinDatum<K> sample_spin4(const K& field, std::uint64_t seed, int retry_cap = 20,
                          long long height_bound = 10000) {
  if (field.characteristic() != 0 && field.characteristic() <= 13)
    throw UsageError("field characteristic must exceed 13 for reliable genericity");
  const K& f = field;
  using E = typename K::Elem;
  FrameConfig<K> fr = canonical_frame(f);
  QuinticSystem<K> sys = quintic_system(fr);
  SplitMix64 rng(seed);
  std::map<std::string, int> failures;
  auto fail_stage = [&](const std::string& stage) { failures[stage] += 1; };

  for (int attempt = 1; attempt <= retry_cap; ++attempt) {
    // Draw the ten marked points: [x : y : 1], twenty field draws.
    std::vector<Pt3<K>> pts;
    pts.reserve(10);
    for (int i = 0; i < 10; ++i) {
      E x = draw_element(f, rng);
      E y = draw_element(f, rng);
      pts.push_back(Pt3<K>{x, y, f.one()});
    }
    if (!points_valid(fr, pts)) {
      fail_stage("points-valid");
      continue;
    }

    RestrictedSystem<K> rsys = restricted_system(sys, pts);
    if (rsys.basis.size() != 4) {
      fail_stage("restricted-dimension");
      continue;
    }

    auto h = restricted_hyperplane(fr, rsys.basis);
    if (!h) {
      fail_stage("rho-image-hyperplane");
      continue;
    }

    Conic<K> conic = veronese_hyperplane_conic(f, *h);
    if (conic_rank(conic) != 3) {
      fail_stage("conic-rank");
      continue;
    }

    ConicPointOutcome<K> cp = conic_point(conic, height_bound);
    if (!cp.point) {
      if constexpr (std::is_same_v<K, RatField>) {
        throw ExtensionRequired(cp.ext_d);
      } else {
        throw std::logic_error("conic-point search cannot exhaust over this field");
      }
    }

    ConicParam<K> param = parametrize_conic(conic, *cp.point);
    bool nondeg = parametrization_rank(param, f) == 3;
    // Quartic coordinates along the parametrization: five binary quartics
    // spanning exactly the hyperplane (rank 4).
    std::array<BForm<K>, 5> Q;
    if (nondeg) {
      auto& a = param.coords[0];
      auto& b = param.coords[1];
      auto& c = param.coords[2];
      auto two = f.from_int(2);
      auto addq = [&](const BForm<K>& x, const BForm<K>& y) {
        if (x.is_zero()) return y;
        if (y.is_zero()) return x;
        return x + y;
      };
      Q[0] = a * a;
      Q[1] = b * b;
      Q[2] = addq(c * c, two * (a * b));
      Q[3] = two * (a * c);
      Q[4] = two * (b * c);
      Mat<K> QM(f, 5, 5);
      for (int r = 0; r < 5; ++r)
        for (int cix = 0; cix < 5; ++cix) QM.at(r, cix) = Q[r].coeff(cix);
      if (rank(QM) != 4) nondeg = false;
      if (nondeg) {
        // The quartic path must lie on the hyperplane identically.
        BForm<K> onh(f);
        for (int r = 0; r < 5; ++r) {
          if (f.is_zero((*h)[r]) || Q[r].is_zero()) continue;
          BForm<K> term = (*h)[r] * Q[r];
          onh = onh.is_zero() ? term : onh + term;
        }
        if (!onh.is_zero())
          throw std::logic_error("hyperplane-section parametrization failed re-verification");
      }
    }
    if (!nondeg) {
      fail_stage("parametrization-nondegenerate");
      continue;
    }

    // Lift through rho: pick four independent coordinate rows of the
    // restriction matrix, invert, and express the quartic path in the
    // restricted basis.
    Mat<K> R = rho_matrix(fr, rsys.basis);  // 5 x 4
    std::array<int, 4> rows{};
    Mat<K> RJ(f, 4, 4);
    bool found_rows = false;
    for (int skip = 4; skip >= 0 && !found_rows; --skip) {
      int idx = 0;
      for (int r = 0; r < 5; ++r) {
        if (r == skip) continue;
        rows[idx++] = r;
      }
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) RJ.at(r, c) = R.at(rows[r], c);
      if (rank(RJ) == 4) found_rows = true;
    }
    if (!found_rows) throw std::logic_error("rank-4 restriction matrix has no independent rows");
    Mat<K> RJinv = mat_inverse(RJ);
    std::array<BForm<K>, 4> ycoef;
    for (int kk = 0; kk < 4; ++kk) {
      BForm<K> acc(f);
      for (int m = 0; m < 4; ++m) {
        if (f.is_zero(RJinv.at(kk, m)) || Q[rows[m]].is_zero()) continue;
        BForm<K> term = RJinv.at(kk, m) * Q[rows[m]];
        acc = acc.is_zero() ? term : acc + term;
      }
      ycoef[kk] = acc;
    }
    // Re-verify the row left out of the solve.
    for (int r5 = 0; r5 < 5; ++r5) {
      bool used = false;
      for (int m = 0; m < 4; ++m) used = used || rows[m] == r5;
      if (used) continue;
      BForm<K> acc(f);
      for (int kk = 0; kk < 4; ++kk) {
        if (f.is_zero(R.at(r5, kk)) || ycoef[kk].is_zero()) continue;
        BForm<K> term = R.at(r5, kk) * ycoef[kk];
        acc = acc.is_zero() ? term : acc + term;
      }
      BForm<K> want = Q[r5];
      if (!(acc == want) && !(acc.is_zero() && want.is_zero()))
        throw std::logic_error("rho lift failed re-verification on the remaining row");
    }

    // Pick the parameter value (one more draw) and assemble the quintic.
    E u0 = draw_element(f, rng);
    E v0 = f.one();
    std::array<E, 3> qv = param.at(u0, v0);
    E disc = E(qv[2] * qv[2] - f.from_int(4) * qv[0] * qv[1]);
    bool param_ok = !(f.is_zero(qv[0]) && f.is_zero(qv[1]) && f.is_zero(qv[2]));
    if (param_ok) param_ok = !f.is_zero(disc);
    if (param_ok) param_ok = !f.is_zero(qv[1]);  // tangency point at n is refused
    std::vector<E> yval(4, f.zero());
    bool any_y = false;
    if (param_ok) {
      for (int kk = 0; kk < 4; ++kk) {
        yval[kk] = bform_eval(ycoef[kk], u0, v0);
        any_y = any_y || !f.is_zero(yval[kk]);
      }
      param_ok = any_y;
    }
    if (!param_ok) {
      fail_stage("parameter-valid");
      continue;
    }

    TForm<K> gamma(f, 5);
    for (int kk = 0; kk < 4; ++kk) {
      if (f.is_zero(yval[kk])) continue;
      gamma = gamma + yval[kk] * rsys.basis[kk];
    }

    SpinDatum<K> datum;
    datum.field = f;
    datum.frame = fr;
    datum.gamma = std::move(gamma);
    datum.points = std::move(pts);
    datum.q = qv;
    datum.seed = seed;
    datum.attempts = attempt;
    datum.failures = failures;
    datum.report = verify_spin_datum(datum);
    if (!datum.report.all_pass) {
      fail_stage("verification");
      continue;
    }
    return datum;
  }

  std::string msg = "sampling failed " + std::to_string(retry_cap) +
                    " consecutive genericity attempts (";
  bool first = true;
  for (auto& [stage, count] : failures) {
    if (!first) msg += ", ";
    msg += stage + ": " + std::to_string(count);
    first = false;
  }
  msg += ")";
  throw GenericityError(msg);
}

}  // namespace spincalc

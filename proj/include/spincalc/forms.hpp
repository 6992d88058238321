#pragma once

#include "spincalc/linalg.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace spincalc {

// ---------------------------------------------------------------------------
// Binary homogeneous forms in (s, t), stored densely: c[i] is the coefficient
// of s^i t^(deg-i).  The canonical zero form has an empty coefficient vector
// and combines with forms of any degree, which keeps graded determinant
// arithmetic (Sylvester/Bareiss) free of degree bookkeeping corner cases.
// ---------------------------------------------------------------------------

template <class K>
struct BForm {
  using E = typename K::Elem;
  K field;
  std::vector<E> c;

  BForm() = default;
  explicit BForm(K f) : field(f) {}
  BForm(K f, std::vector<E> coeffs) : field(f), c(std::move(coeffs)) { normalize(); }

  int degree() const { return (int)c.size() - 1; }  // -1 for the zero form
  bool is_zero() const { return c.empty(); }

  void normalize() {
    bool all = true;
    for (auto& x : c)
      if (!field.is_zero(x)) {
        all = false;
        break;
      }
    if (all) c.clear();
  }

  E coeff(int i) const {
    if (i < 0 || i >= (int)c.size()) return field.zero();
    return c[i];
  }

  friend bool operator==(const BForm& a, const BForm& b) { return a.c == b.c; }
};

template <class K>
BForm<K> bform_zero(K f) {
  return BForm<K>(f);
}

template <class K>
BForm<K> bform_monomial(K f, int s_exp, int t_exp, typename K::Elem coeff) {
  BForm<K> out(f);
  out.c.assign(s_exp + t_exp + 1, f.zero());
  out.c[s_exp] = coeff;
  out.normalize();
  return out;
}

template <class K>
BForm<K> operator+(const BForm<K>& a, const BForm<K>& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.degree() != b.degree()) throw UsageError("binary form sum: degree mismatch");
  BForm<K> out = a;
  for (size_t i = 0; i < out.c.size(); ++i) out.c[i] += b.c[i];
  out.normalize();
  return out;
}

template <class K>
BForm<K> operator-(const BForm<K>& a) {
  BForm<K> out = a;
  for (auto& x : out.c) x = -x;
  return out;
}

template <class K>
BForm<K> operator-(const BForm<K>& a, const BForm<K>& b) {
  return a + (-b);
}

template <class K>
BForm<K> operator*(const BForm<K>& a, const BForm<K>& b) {
  if (a.is_zero() || b.is_zero()) return BForm<K>(a.field);
  BForm<K> out(a.field);
  out.c.assign(a.c.size() + b.c.size() - 1, a.field.zero());
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < b.c.size(); ++j) out.c[i + j] += a.c[i] * b.c[j];
  out.normalize();
  return out;
}

template <class K>
BForm<K> operator*(const typename K::Elem& s, const BForm<K>& a) {
  BForm<K> out = a;
  for (auto& x : out.c) x = s * x;
  out.normalize();
  return out;
}

template <class K>
BForm<K> bform_pow(const BForm<K>& a, int e) {
  BForm<K> out = bform_monomial(a.field, 0, 0, a.field.one());
  for (int i = 0; i < e; ++i) out = out * a;
  return out;
}

template <class K>
typename K::Elem bform_eval(const BForm<K>& a, const typename K::Elem& s, const typename K::Elem& t) {
  auto acc = a.field.zero();
  if (a.is_zero()) return acc;
  int d = a.degree();
  // Horner in s with explicit t powers.
  std::vector<typename K::Elem> tp(d + 1, a.field.one());
  for (int i = 1; i <= d; ++i) tp[i] = tp[i - 1] * t;
  auto sp = a.field.one();
  for (int i = 0; i <= d; ++i) {
    acc += a.c[i] * sp * tp[d - i];
    sp = sp * s;
  }
  return acc;
}

template <class K>
BForm<K> bform_derivative_s(const BForm<K>& a) {
  if (a.is_zero() || a.degree() == 0) return BForm<K>(a.field);
  BForm<K> out(a.field);
  out.c.assign(a.c.size() - 1, a.field.zero());
  for (int i = 1; i <= a.degree(); ++i) out.c[i - 1] = a.field.from_int(i) * a.c[i];
  out.normalize();
  return out;
}

template <class K>
BForm<K> bform_derivative_t(const BForm<K>& a) {
  if (a.is_zero() || a.degree() == 0) return BForm<K>(a.field);
  BForm<K> out(a.field);
  out.c.assign(a.c.size() - 1, a.field.zero());
  int d = a.degree();
  for (int i = 0; i < d; ++i) out.c[i] = a.field.from_int(d - i) * a.c[i];
  out.normalize();
  return out;
}

/// Exact division a / b; throws if b does not divide a.
template <class K>
BForm<K> bform_divide_exact(const BForm<K>& a, const BForm<K>& b) {
  const K& f = a.field;
  if (b.is_zero()) throw UsageError("binary form division by zero");
  if (a.is_zero()) return BForm<K>(f);
  // Strip the t-power that makes b's top s-coefficient nonzero, matching it in a.
  int bt = b.degree();
  while (bt >= 0 && f.is_zero(b.c[bt])) --bt;  // bt = s-degree of b
  int at = a.degree();
  while (at >= 0 && f.is_zero(a.c[at])) --at;
  int qdeg = a.degree() - b.degree();
  // x-degree (x = s/t) and t-divisibility must both leave room for a quotient.
  if (qdeg < 0 || at < bt || at - bt > qdeg) throw UsageError("binary form division is not exact");
  // Long division viewing index i as the monomial x^i (x = s/t).
  std::vector<typename K::Elem> rem = a.c;
  std::vector<typename K::Elem> q(qdeg + 1, f.zero());
  auto lead_inv = f.one() / b.c[bt];
  for (int i = at; i >= bt; --i) {
    if (f.is_zero(rem[i])) continue;
    auto coef = rem[i] * lead_inv;
    q[i - bt] = coef;
    for (int j = 0; j <= bt; ++j) rem[i - bt + j] -= coef * b.c[j];
  }
  for (auto& x : rem)
    if (!f.is_zero(x)) throw UsageError("binary form division is not exact");
  BForm<K> out(f, std::move(q));
  if (!(out * b == a)) throw std::logic_error("binary form division failed re-verification");
  return out;
}

/// Greatest common divisor, normalized so the top nonzero coefficient is one.
template <class K>
BForm<K> bform_gcd(BForm<K> a, BForm<K> b) {
  const K& f = a.field;
  if (a.is_zero()) std::swap(a, b);
  if (a.is_zero()) return a;
  if (b.is_zero()) {
    int hi = a.degree();
    while (f.is_zero(a.c[hi])) --hi;
    auto inv = f.one() / a.c[hi];
    return inv * a;
  }
  // Split off the monomial content s^lo t^(deg-hi); the stripped cores are
  // coprime to both s and t, and the monomial parts contribute min exponents.
  auto split = [&](const BForm<K>& x, int& s_pow, int& t_pow, std::vector<typename K::Elem>& core) {
    int lo = 0, hi = x.degree();
    while (f.is_zero(x.c[lo])) ++lo;
    while (f.is_zero(x.c[hi])) --hi;
    s_pow = lo;
    t_pow = x.degree() - hi;
    core.assign(x.c.begin() + lo, x.c.begin() + hi + 1);
  };
  int a_s = 0, a_t = 0, b_s = 0, b_t = 0;
  std::vector<typename K::Elem> ua, ub;
  split(a, a_s, a_t, ua);
  split(b, b_s, b_t, ub);
  int g_s = std::min(a_s, b_s), g_t = std::min(a_t, b_t);
  // Euclid on the cores viewed as univariate polynomials in x = s/t.
  auto mod = [&](std::vector<typename K::Elem> num, const std::vector<typename K::Elem>& den) {
    auto lead_inv = f.one() / den.back();
    for (int i = (int)num.size() - 1; i >= (int)den.size() - 1; --i) {
      if (f.is_zero(num[i])) continue;
      auto coef = num[i] * lead_inv;
      for (size_t j = 0; j < den.size(); ++j) num[i - (den.size() - 1) + j] -= coef * den[j];
    }
    while (!num.empty() && f.is_zero(num.back())) num.pop_back();
    return num;
  };
  while (!ub.empty()) {
    auto r = mod(ua, ub);
    ua = std::move(ub);
    ub = std::move(r);
  }
  auto inv = f.one() / ua.back();
  for (auto& x : ua) x = inv * x;
  BForm<K> core(f, std::move(ua));
  return bform_monomial(f, g_s, g_t, f.one()) * core;
}

/// If r equals (top coefficient) * q^2 for a binary form q, return the monic
/// q; otherwise nullopt.  Works over any odd-characteristic field.
template <class K>
std::optional<BForm<K>> bform_sqrt_up_to_scalar(const BForm<K>& r) {
  const K& f = r.field;
  if (r.is_zero() || r.degree() % 2 != 0) return std::nullopt;
  int lo = 0, hi = r.degree();
  while (f.is_zero(r.c[lo])) ++lo;
  while (f.is_zero(r.c[hi])) --hi;
  if (lo % 2 != 0 || (r.degree() - hi) % 2 != 0) return std::nullopt;
  std::vector<typename K::Elem> core(r.c.begin() + lo, r.c.begin() + hi + 1);
  auto lead_inv = f.one() / core.back();
  for (auto& x : core) x = lead_inv * x;
  int m = ((int)core.size() - 1) / 2;
  std::vector<typename K::Elem> q(m + 1, f.zero());
  q[m] = f.one();
  auto two_inv = f.one() / f.from_int(2);
  for (int j = m - 1; j >= 0; --j) {
    auto acc = core[m + j];
    for (int i = j + 1; i <= m - 1; ++i) {
      int k = m + j - i;
      if (k > m - 1 || k < 0) continue;
      acc -= q[i] * q[k];
    }
    q[j] = acc * two_inv;
  }
  BForm<K> qq(f, std::move(q));
  BForm<K> full = bform_monomial(f, lo / 2, (r.degree() - hi) / 2, f.one()) * qq;
  auto sq = full * full;
  // r must equal lead * full^2 with lead the top nonzero coefficient of r.
  BForm<K> scaled = r.c[hi] * sq;
  if (scaled == r) return full;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Trivariate homogeneous forms in (x, y, z), stored sparsely by exponent.
// ---------------------------------------------------------------------------

template <class K>
using Pt3 = std::array<typename K::Elem, 3>;

template <class K>
struct TForm {
  using E = typename K::Elem;
  K field;
  int deg = 0;
  std::map<std::array<int, 3>, E> c;

  TForm() = default;
  TForm(K f, int d) : field(f), deg(d) {}

  bool is_zero() const { return c.empty(); }

  void add_term(std::array<int, 3> e, const E& v) {
    if (e[0] + e[1] + e[2] != deg) throw UsageError("trivariate term degree mismatch");
    if (field.is_zero(v)) return;
    auto it = c.find(e);
    if (it == c.end()) {
      c.emplace(e, v);
    } else {
      it->second += v;
      if (field.is_zero(it->second)) c.erase(it);
    }
  }

  E coeff(std::array<int, 3> e) const {
    auto it = c.find(e);
    return it == c.end() ? field.zero() : it->second;
  }

  friend bool operator==(const TForm& a, const TForm& b) { return a.deg == b.deg && a.c == b.c; }
};

template <class K>
TForm<K> operator+(const TForm<K>& a, const TForm<K>& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.deg != b.deg) throw UsageError("trivariate form sum: degree mismatch");
  TForm<K> out = a;
  for (auto& [e, v] : b.c) out.add_term(e, v);
  return out;
}

template <class K>
TForm<K> operator-(const TForm<K>& a) {
  TForm<K> out = a;
  for (auto& [e, v] : out.c) v = -v;
  return out;
}

template <class K>
TForm<K> operator-(const TForm<K>& a, const TForm<K>& b) {
  return a + (-b);
}

template <class K>
TForm<K> operator*(const TForm<K>& a, const TForm<K>& b) {
  TForm<K> out(a.field, a.deg + b.deg);
  for (auto& [ea, va] : a.c)
    for (auto& [eb, vb] : b.c)
      out.add_term({ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]}, va * vb);
  return out;
}

template <class K>
TForm<K> operator*(const typename K::Elem& s, const TForm<K>& a) {
  TForm<K> out(a.field, a.deg);
  for (auto& [e, v] : a.c) out.add_term(e, s * v);
  return out;
}

template <class K>
typename K::Elem tform_eval(const TForm<K>& a, const Pt3<K>& p) {
  const K& f = a.field;
  std::array<std::vector<typename K::Elem>, 3> pw;
  for (int k = 0; k < 3; ++k) {
    pw[k].assign(a.deg + 1, f.one());
    for (int i = 1; i <= a.deg; ++i) pw[k][i] = pw[k][i - 1] * p[k];
  }
  auto acc = f.zero();
  for (auto& [e, v] : a.c) acc += v * pw[0][e[0]] * pw[1][e[1]] * pw[2][e[2]];
  return acc;
}

template <class K>
TForm<K> tform_partial(const TForm<K>& a, int var) {
  TForm<K> out(a.field, a.deg - 1);
  if (a.deg == 0) return out;
  for (auto& [e, v] : a.c) {
    if (e[var] == 0) continue;
    auto ne = e;
    ne[var] -= 1;
    out.add_term(ne, a.field.from_int(e[var]) * v);
  }
  return out;
}

/// Projective equality of points (proportional coordinate triples).
template <class K>
bool same_projective_point(K f, const Pt3<K>& p, const Pt3<K>& q) {
  // Cross product vanishes iff the triples are proportional.
  auto c0 = p[1] * q[2] - p[2] * q[1];
  auto c1 = p[2] * q[0] - p[0] * q[2];
  auto c2 = p[0] * q[1] - p[1] * q[0];
  return f.is_zero(c0) && f.is_zero(c1) && f.is_zero(c2);
}

/// Restrict a form to the line through P0 and P1 via [s:t] -> s*P0 + t*P1.
/// `line` is the linear form cutting the line; both points must lie on it.
template <class K>
BForm<K> restrict_to_line(const TForm<K>& f, const TForm<K>& line, const Pt3<K>& P0, const Pt3<K>& P1) {
  const K& fld = f.field;
  if (line.deg != 1) throw UsageError("restrict_to_line: cutting form must be linear");
  if (!fld.is_zero(tform_eval(line, P0)) || !fld.is_zero(tform_eval(line, P1)))
    throw UsageError("restrict_to_line: parametrization points must lie on the line");
  if (same_projective_point(fld, P0, P1))
    throw UsageError("restrict_to_line: parametrization points coincide");
  std::array<std::vector<BForm<K>>, 3> pw;
  for (int k = 0; k < 3; ++k) {
    BForm<K> lin(fld, {P1[k], P0[k]});  // c[0]=t-coeff=P1, c[1]=s-coeff=P0
    pw[k].push_back(bform_monomial(fld, 0, 0, fld.one()));
    for (int i = 1; i <= f.deg; ++i) pw[k].push_back(pw[k].back() * lin);
  }
  BForm<K> out(fld);
  bool first = true;
  for (auto& [e, v] : f.c) {
    BForm<K> term = v * (pw[0][e[0]] * pw[1][e[1]] * pw[2][e[2]]);
    if (first && !term.is_zero()) {
      out = term;
      first = false;
    } else if (!term.is_zero()) {
      out = out + term;
    }
  }
  if (out.is_zero()) return BForm<K>(fld);
  return out;
}

// ---------------------------------------------------------------------------
// Sylvester resultant of two trivariate forms with respect to one variable,
// computed by fraction-free Bareiss elimination over the graded ring of
// binary forms in the two remaining variables (first remaining variable
// corresponds to s).  The determinant is taken with respect to the declared
// total degrees; callers ensure a nonzero constant leading coefficient when
// they need vanishing loci to coincide with common roots.
// ---------------------------------------------------------------------------

namespace detail {

template <class K>
BForm<K> bareiss_det(std::vector<std::vector<BForm<K>>> m, K f) {
  int n = (int)m.size();
  if (n == 0) return bform_monomial(f, 0, 0, f.one());
  BForm<K> prev = bform_monomial(f, 0, 0, f.one());
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (m[k][k].is_zero()) {
      int pr = -1;
      for (int r = k + 1; r < n; ++r)
        if (!m[r][k].is_zero()) {
          pr = r;
          break;
        }
      if (pr < 0) return BForm<K>(f);
      std::swap(m[k], m[pr]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        BForm<K> num = m[k][k] * m[i][j] - m[i][k] * m[k][j];
        m[i][j] = num.is_zero() ? BForm<K>(f) : bform_divide_exact(num, prev);
      }
    prev = m[k][k];
    if (prev.is_zero()) return BForm<K>(f);
  }
  BForm<K> det = m[n - 1][n - 1];
  if (sign < 0) det = -det;
  return det;
}

}  // namespace detail

template <class K>
BForm<K> resultant(const TForm<K>& f, const TForm<K>& g, int var) {
  const K& fld = f.field;
  int rv[2], ri = 0;
  for (int k = 0; k < 3; ++k)
    if (k != var) rv[ri++] = k;
  auto coeffs_by_deg = [&](const TForm<K>& h) {
    // Entry k: coefficient of x_var^k, a binary form of degree h.deg - k in
    // the remaining variables (s = first remaining, t = second).
    std::vector<BForm<K>> out(h.deg + 1, BForm<K>(fld));
    for (auto& [e, v] : h.c) {
      int k = e[var];
      int si = e[rv[0]];
      if (out[k].is_zero()) out[k] = bform_monomial(fld, si, e[rv[1]], v);
      else out[k] = out[k] + bform_monomial(fld, si, e[rv[1]], v);
    }
    return out;
  };
  int m = f.deg, n = g.deg;
  auto F = coeffs_by_deg(f), G = coeffs_by_deg(g);
  int size = m + n;
  std::vector<std::vector<BForm<K>>> syl(size, std::vector<BForm<K>>(size, BForm<K>(fld)));
  for (int i = 0; i < n; ++i)
    for (int t = 0; t <= m; ++t) syl[i][i + t] = F[m - t];
  for (int i = 0; i < m; ++i)
    for (int t = 0; t <= n; ++t) syl[n + i][i + t] = G[n - t];
  return detail::bareiss_det(std::move(syl), fld);
}

// ---------------------------------------------------------------------------
// Inhomogeneous polynomials in two local parameters (u, v): used to expand a
// form in an affine chart around a point, e.g. for node verification.
// ---------------------------------------------------------------------------

template <class K>
struct UVPoly {
  using E = typename K::Elem;
  K field;
  std::map<std::pair<int, int>, E> c;

  explicit UVPoly(K f) : field(f) {}

  void add_term(int i, int j, const E& v) {
    if (field.is_zero(v)) return;
    auto key = std::make_pair(i, j);
    auto it = c.find(key);
    if (it == c.end()) {
      c.emplace(key, v);
    } else {
      it->second += v;
      if (field.is_zero(it->second)) c.erase(it);
    }
  }

  E coeff(int i, int j) const {
    auto it = c.find({i, j});
    return it == c.end() ? field.zero() : it->second;
  }
};

template <class K>
UVPoly<K> operator*(const UVPoly<K>& a, const UVPoly<K>& b) {
  UVPoly<K> out(a.field);
  for (auto& [ea, va] : a.c)
    for (auto& [eb, vb] : b.c) out.add_term(ea.first + eb.first, ea.second + eb.second, va * vb);
  return out;
}

template <class K>
UVPoly<K> operator+(const UVPoly<K>& a, const UVPoly<K>& b) {
  UVPoly<K> out = a;
  for (auto& [e, v] : b.c) out.add_term(e.first, e.second, v);
  return out;
}

/// Expand F(P + u*A + v*B) as a polynomial in the chart parameters (u, v).
template <class K>
UVPoly<K> tform_chart_expand(const TForm<K>& F, const Pt3<K>& P, const Pt3<K>& A, const Pt3<K>& B) {
  const K& f = F.field;
  std::array<std::vector<UVPoly<K>>, 3> pw;
  for (int k = 0; k < 3; ++k) {
    UVPoly<K> lin(f);
    lin.add_term(0, 0, P[k]);
    lin.add_term(1, 0, A[k]);
    lin.add_term(0, 1, B[k]);
    UVPoly<K> one(f);
    one.add_term(0, 0, f.one());
    pw[k].push_back(one);
    for (int i = 1; i <= F.deg; ++i) pw[k].push_back(pw[k].back() * lin);
  }
  UVPoly<K> out(f);
  for (auto& [e, v] : F.c) {
    UVPoly<K> term = pw[0][e[0]] * pw[1][e[1]] * pw[2][e[2]];
    for (auto& [uv, w] : term.c) out.add_term(uv.first, uv.second, v * w);
  }
  return out;
}

}  // namespace spincalc

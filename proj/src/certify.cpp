#include "spincalc/certify.hpp"

#include "spincalc/curves.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <stdexcept>

namespace spincalc {

namespace {

uint32_t full_mask(int n) { return n == 0 ? 0u : ((1u << n) - 1u); }

void require_spin(const Space& sp, const std::string& what) {
  if (sp.kind == SpaceKind::ModuliCurves)
    throw UsageError(what + " requires a spin space");
}

/// Tag of the genus-0 two-label boundary family on the space (the only
/// surviving genus-0 pair class: the other parity component is empty).
Tag pair_tag(SpaceKind kind) {
  return kind == SpaceKind::SpinOdd ? Tag::Beta : Tag::Alpha;
}

std::string set_label(uint32_t S) {
  std::string out = "{";
  bool first = true;
  for (int k = 1; k <= 32; ++k) {
    if (S & (1u << (k - 1))) {
      if (!first) out += ",";
      out += std::to_string(k);
      first = false;
    }
  }
  return out + "}";
}

std::string class_label(const BasisClass& b) {
  switch (b.tag) {
    case Tag::Lambda:
    case Tag::DeltaIrr:
    case Tag::AlphaIrr:
    case Tag::BetaIrr:
      return tag_name(b.tag);
    case Tag::Psi:
      return "psi_" + std::to_string(b.i);
    default:
      return tag_name(b.tag) + "(" + std::to_string(b.i) + ":" + set_label(b.S) + ")";
  }
}

bool tracked_slot(const Space& sp, const BasisClass& b) {
  if (b.tag == Tag::Lambda || b.tag == Tag::Psi || b.tag == Tag::AlphaIrr ||
      b.tag == Tag::BetaIrr)
    return true;
  return b.tag == pair_tag(sp.kind) && b.i == 0 && std::popcount(b.S) == 2;
}

bool same_tracked(const TrackedVec& a, const TrackedVec& b) {
  return a.lambda == b.lambda && a.psi == b.psi && a.alpha0 == b.alpha0 &&
         a.beta0 == b.beta0 && a.pair0 == b.pair0;
}

TrackedVec combine_tracked(const std::vector<CertTerm>& terms, const Space& sp) {
  TrackedVec out{Rat(0), Rat(0), Rat(0), Rat(0), Rat(0)};
  for (const auto& t : terms) {
    TrackedVec v = tracked_vector(t.class_name, sp);
    out.lambda += t.coeff * v.lambda;
    out.psi += t.coeff * v.psi;
    out.alpha0 += t.coeff * v.alpha0;
    out.beta0 += t.coeff * v.beta0;
    out.pair0 += t.coeff * v.pair0;
  }
  return out;
}

Rat min_coeff(const std::vector<CertTerm>& terms) {
  if (terms.empty()) throw std::logic_error("certificate without terms");
  Rat m = terms.front().coeff;
  for (const auto& t : terms) m = std::min(m, t.coeff);
  return m;
}

bool all_pass(const std::vector<Inequality>& checks) {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

/// Tracked coordinates of a residual's written part (its addition bounds must
/// not touch tracked coordinates: they come from boundary-family tails only).
TrackedVec residual_tracked(const ResidualClass& r) {
  for (const auto& [b, L] : r.addition_bounds)
    if (tracked_slot(r.space, b))
      throw std::logic_error("residual addition bound on a tracked coordinate");
  DivisorClass tmp;
  tmp.space = r.space;
  tmp.coeffs = r.written;
  return tracked_coords(tmp);
}

/// Cross-genus notes attached to the handful of marking counts where the
/// mechanical verdict needs context (bespoke decompositions, known-sharp
/// failures).  Shared between certify and the scan.
std::vector<std::string> special_notes(const Space& sp) {
  std::vector<std::string> out;
  if (sp.kind == SpaceKind::SpinEven && sp.g == 7 && sp.n == 3)
    out.push_back(
        "threshold fails here; the bespoke decomposition s73_plus certifies "
        "nonnegative Kodaira dimension");
  if (sp.kind == SpaceKind::SpinEven && sp.g == 8 && sp.n == 1)
    out.push_back(
        "lambda threshold equals 13 exactly: not certified; bigness is known "
        "here through a pointed-Weierstrass combination outside this "
        "toolkit's catalogue");
  if (sp.kind == SpaceKind::SpinOdd && sp.g == 8 && sp.n == 4)
    out.push_back(
        "psi-average share is zero: bigness not certified; the bespoke "
        "decomposition s84_minus certifies nonnegative Kodaira dimension");
  if (sp.kind == SpaceKind::SpinOdd && sp.g == 9 && sp.n == 3)
    out.push_back(
        "psi-average share is zero: bigness not certified; the bespoke "
        "decomposition s93_minus certifies nonnegative Kodaira dimension");
  if (sp.kind == SpaceKind::SpinOdd && sp.g == 11 && sp.n == 1)
    out.push_back(
        "psi-average share is zero and a filling family of rational curves "
        "has canonical degree zero (case s111_minus): the space is not of "
        "general type");
  return out;
}

/// Coverage report over the residual coordinates beyond the tracked set.
/// Shortfalls are disclosed as notes; they do not enter the verdict, which
/// is decided by the recorded inequalities.
void append_coverage_notes(Certificate& c) {
  if (!c.residual) return;
  const ResidualClass& r = *c.residual;
  int total = 0, certified = 0;
  std::vector<std::string> bad;
  for (const auto& b : enumerate_basis(r.space)) {
    if (tracked_slot(r.space, b)) continue;
    ++total;
    Rat w = r.written_coeff(b);
    Rat L = r.addition_bound(b);
    if (w + L >= 0) {
      ++certified;
    } else {
      bad.push_back(class_label(b) + " (written " + w.str() +
                    ", certified addition >= " + L.str() + ")");
    }
  }
  c.notes.push_back("boundary residual coverage: " + std::to_string(certified) +
                    " of " + std::to_string(total) +
                    " coordinates certified nonnegative");
  for (const auto& s : bad)
    c.notes.push_back("not certified by the recorded bounds: " + s);
}

}  // namespace

// ---------------------------------------------------------------------------
// ResidualClass
// ---------------------------------------------------------------------------

Rat ResidualClass::written_coeff(const BasisClass& b) const {
  auto it = written.find(b);
  return it == written.end() ? Rat(0) : it->second;
}

Rat ResidualClass::addition_bound(const BasisClass& b) const {
  auto it = addition_bounds.find(b);
  return it == addition_bounds.end() ? Rat(0) : it->second;
}

void ResidualClass::subtract_scaled(const DivisorClass& cls, const Rat& coeff) {
  if (coeff < 0)
    throw UsageError("residual subtraction requires a nonnegative coefficient");
  Space a = space, b = cls.space;
  a.symmetrized = b.symmetrized = false;
  if (!(a == b)) throw UsageError("residual subtraction across different spaces");
  if (coeff == 0) return;
  for (const auto& [bc, v] : cls.coeffs) {
    auto [it, fresh] = written.emplace(bc, -coeff * v);
    if (!fresh) {
      it->second -= coeff * v;
      if (it->second == 0) written.erase(it);
    }
  }
  // A subtracted tail -t·b with t >= L becomes an addition +coeff·t·b here.
  for (const auto& [bc, L] : cls.tail_bounds) addition_bounds[bc] += coeff * L;
}

ResidualClass residual_from(const DivisorClass& cls) {
  if (!cls.tail_bounds.empty())
    throw UsageError("residuals must start from a fully known class");
  ResidualClass r;
  r.space = cls.space;
  r.space.symmetrized = false;
  r.written = cls.coeffs;
  return r;
}

// ---------------------------------------------------------------------------
// Checks
// ---------------------------------------------------------------------------

Inequality make_check(std::string name, const Rat& lhs, std::string sense, const Rat& rhs) {
  bool pass = false;
  if (sense == "<") pass = lhs < rhs;
  else if (sense == "<=") pass = lhs <= rhs;
  else if (sense == ">") pass = lhs > rhs;
  else if (sense == ">=") pass = lhs >= rhs;
  else if (sense == "==") pass = lhs == rhs;
  else throw UsageError("unknown inequality sense: " + sense);
  return Inequality{std::move(name), lhs, std::move(sense), rhs, pass};
}

// ---------------------------------------------------------------------------
// Tracked coordinates
// ---------------------------------------------------------------------------

TrackedVec tracked_coords(const DivisorClass& cls) {
  const Space& sp = cls.space;
  require_spin(sp, "tracked_coords");
  for (const auto& [b, L] : cls.tail_bounds)
    if (tracked_slot(sp, b))
      throw std::logic_error("tracked coordinate carries a tail bound");
  TrackedVec t{cls.get(BasisClass{Tag::Lambda, 0, 0}), Rat(0),
               cls.get(BasisClass{Tag::AlphaIrr, 0, 0}),
               cls.get(BasisClass{Tag::BetaIrr, 0, 0}), Rat(0)};
  if (sp.n >= 1) {
    t.psi = cls.get(BasisClass{Tag::Psi, 1, 0});
    for (int j = 2; j <= sp.n; ++j)
      if (cls.get(BasisClass{Tag::Psi, j, 0}) != t.psi)
        throw std::logic_error("tracked_coords: psi coefficients differ across labels");
  }
  if (sp.n >= 2) {
    bool first = true;
    for (int a = 1; a <= sp.n; ++a)
      for (int b = a + 1; b <= sp.n; ++b) {
        uint32_t S = (1u << (a - 1)) | (1u << (b - 1));
        Rat v = cls.get(require_class(sp, pair_tag(sp.kind), 0, S));
        if (first) {
          t.pair0 = v;
          first = false;
        } else if (v != t.pair0) {
          throw std::logic_error("tracked_coords: genus-0 pair coefficients differ");
        }
      }
  }
  return t;
}

TrackedVec tracked_vector(const std::string& name, const Space& sp) {
  require_spin(sp, "tracked_vector");
  const int g = sp.g, n = sp.n;
  const bool odd = sp.kind == SpaceKind::SpinOdd;
  if (name == "canonical")
    return {Rat(13), Rat(n >= 1 ? 1 : 0), Rat(-2), Rat(-3), Rat(n >= 2 ? -2 : 0)};
  if (name == "mu*(theta-null)") {
    if (odd) throw UsageError("mu*(theta-null) lives on even spaces");
    return {Rat(1, 4), Rat(0), Rat(-1, 16), Rat(0), Rat(0)};
  }
  if (name == "theta-pointed") {
    if (!odd) throw UsageError("theta-pointed lives on odd spaces");
    if (n < 1) throw UsageError("theta-pointed needs a marked point");
    return {Rat(n, 4), Rat(1, 2), Rat(-n, 16), Rat(0), Rat(n >= 2 ? -1 : 0)};
  }
  if (name == "mu*(z)") {
    if (!odd) throw UsageError("mu*(z) lives on odd spaces");
    return {Rat(g + 8), Rat(0), Rat(-(g + 2), 4), Rat(-2), Rat(0)};
  }
  if (name == "sigma*(slope)")
    return {slope_value(g), Rat(0), Rat(-1), Rat(-2), Rat(0)};
  if (name == "pi*(symmetrized-logan)") {
    if (n < 2) throw UsageError("the symmetrized logan class needs n >= 2");
    return {Rat(-1), Rat(g, n), Rat(0), Rat(0),
            Rat(-g * (g - 3 + 2 * n), n * (n - 1))};
  }
  if (name == "psi-average") {
    if (n < 1) throw UsageError("psi-average needs a marked point");
    return {Rat(0), Rat(1, n), Rat(0), Rat(0), Rat(0)};
  }
  if (name == "weighted-tangency-2-2-3") {
    if (!(sp.kind == SpaceKind::SpinEven && g == 7 && n == 3))
      throw UsageError("weighted-tangency-2-2-3 lives on the even space with g = 7, n = 3");
    return {Rat(-3), Rat(12), Rat(0), Rat(0), Rat(-40)};
  }
  throw UsageError("unknown combination term: " + name);
}

// ---------------------------------------------------------------------------
// Term classes (exact machinery)
// ---------------------------------------------------------------------------

DivisorClass term_class(const std::string& name, const Space& sp) {
  validate_space(sp);
  require_spin(sp, "term_class");
  Space plain = sp;
  plain.symmetrized = false;
  const int g = plain.g, n = plain.n;
  if (name == "canonical") return canonical_class(plain);
  if (name == "mu*(theta-null)") {
    if (plain.kind != SpaceKind::SpinEven)
      throw UsageError("mu*(theta-null) lives on even spaces");
    return pullback_forgetful(theta_null_class(g), plain, full_mask(n));
  }
  if (name == "theta-pointed") {
    if (plain.kind != SpaceKind::SpinOdd)
      throw UsageError("theta-pointed lives on odd spaces");
    return theta_gn(g, n);
  }
  if (name == "mu*(z)") {
    if (plain.kind != SpaceKind::SpinOdd) throw UsageError("mu*(z) lives on odd spaces");
    return pullback_forgetful(z_class(g), plain, full_mask(n));
  }
  if (name == "sigma*(slope)") {
    Space msrc{SpaceKind::ModuliCurves, g, n, false};
    DivisorClass lifted = pullback_forgetful(slope_divisor(g), msrc, full_mask(n));
    return pullback_pi(lifted, plain.kind);
  }
  if (name == "pi*(symmetrized-logan)") {
    if (n < g)
      throw UsageError(
          "the symmetrized logan pullback is exact only for n >= g; below "
          "that only its leading coefficients are catalogued");
    Space msrc{SpaceKind::ModuliCurves, g, n, false};
    uint32_t forgotten = full_mask(n) & ~full_mask(g);
    DivisorClass sym = symmetrize(pullback_forgetful(logan_class(g), msrc, forgotten));
    sym.space.symmetrized = false;  // averaged class on the same space
    return pullback_pi(sym, plain.kind);
  }
  if (name == "psi-average") {
    if (n < 1) throw UsageError("psi-average needs a marked point");
    DivisorClass out;
    out.space = plain;
    for (int j = 1; j <= n; ++j) out.add(BasisClass{Tag::Psi, j, 0}, Rat(1, n));
    return out;
  }
  if (name == "weighted-tangency-2-2-3") {
    Space want{SpaceKind::SpinEven, 7, 3, false};
    if (!(plain == want))
      throw UsageError("weighted-tangency-2-2-3 lives on the even space with g = 7, n = 3");
    DivisorClass out;
    out.space = want;
    out.add(BasisClass{Tag::Lambda, 0, 0}, Rat(-3));
    for (int j = 1; j <= 3; ++j) out.add(BasisClass{Tag::Psi, j, 0}, Rat(12));
    std::set<BasisClass> pairs;
    for (uint32_t S : {0b011u, 0b101u, 0b110u}) {
      BasisClass c = require_class(want, Tag::Alpha, 0, S);
      out.add(c, Rat(-40));
      pairs.insert(c);
    }
    // alpha_0 and beta_0 are exactly zero in this class.  Every other
    // boundary coefficient is known only to be nonpositive: record it as a
    // zero-lower-bound tail so downstream arithmetic keeps the direction.
    for (const auto& b : enumerate_basis(want)) {
      if (b.tag == Tag::Lambda || b.tag == Tag::Psi || b.tag == Tag::AlphaIrr ||
          b.tag == Tag::BetaIrr)
        continue;
      if (pairs.count(b)) continue;
      out.add_tail(b, Rat(0));
    }
    return out;
  }
  throw UsageError("unknown combination term: " + name);
}

// ---------------------------------------------------------------------------
// Threshold formulas
// ---------------------------------------------------------------------------

Rat threshold_lambda(const Space& sp) {
  require_spin(sp, "threshold_lambda");
  const int g = sp.g, n = sp.n;
  if (n < 1) throw UsageError("threshold formulas need a marked point");
  Rat s = slope_value(g);
  Rat base = (3 * s + 4) / 2;
  if (sp.kind == SpaceKind::SpinEven)
    return base - Rat(2 * n * (n - 1), g * (g - 3 + 2 * n));
  return base - Rat(2 * (n - 4) * (n - 1), g * (g - 3 + 2 * n));
}

Rat threshold_psi(const Space& sp) {
  require_spin(sp, "threshold_psi");
  const int g = sp.g, n = sp.n;
  if (n < 1) throw UsageError("threshold formulas need a marked point");
  if (sp.kind == SpaceKind::SpinEven) return Rat(2 * (n - 1), g - 3 + 2 * n);
  return Rat(2 * (n * n + 2 * g - n - 2), n * (g - 3 + 2 * n));
}

// ---------------------------------------------------------------------------
// Certificates
// ---------------------------------------------------------------------------

namespace {

std::vector<CertTerm> threshold_terms(const Space& sp) {
  const int g = sp.g, n = sp.n;
  std::vector<CertTerm> terms;
  Rat logan_coeff = sp.kind == SpaceKind::SpinEven
                        ? Rat(2 * n * (n - 1), g * (g - 3 + 2 * n))
                        : Rat(2 * (n - 4) * (n - 1), g * (g - 3 + 2 * n));
  if (sp.kind == SpaceKind::SpinEven)
    terms.push_back({"mu*(theta-null)", Rat(8)});
  else
    terms.push_back({"theta-pointed", Rat(8, n)});
  if (logan_coeff != 0) terms.push_back({"pi*(symmetrized-logan)", logan_coeff});
  terms.push_back({"sigma*(slope)", Rat(3, 2)});
  return terms;
}

Certificate threshold_certificate(const Space& sp, bool with_residual) {
  Certificate c;
  c.label = "general-type-threshold";
  c.space = sp;
  c.claims_general_type = true;
  c.terms = threshold_terms(sp);
  c.lambda_coeff = threshold_lambda(sp);
  c.psi_coeff = threshold_psi(sp);
  c.psi_surplus = 1 - c.psi_coeff;

  TrackedVec comb = combine_tracked(c.terms, sp);
  TrackedVec K = tracked_vector("canonical", sp);
  if (comb.lambda != c.lambda_coeff || comb.psi != c.psi_coeff)
    throw std::logic_error("threshold formulas disagree with the catalogued coefficient vectors");

  c.checks.push_back(make_check("lambda-coefficient < 13", c.lambda_coeff, "<", Rat(13)));
  c.checks.push_back(make_check("psi-coefficient < 1", c.psi_coeff, "<", Rat(1)));
  c.checks.push_back(make_check("term-coefficients >= 0", min_coeff(c.terms), ">=", Rat(0)));
  c.checks.push_back(make_check("combination[alpha_0] == canonical", comb.alpha0, "==", K.alpha0));
  c.checks.push_back(make_check("combination[beta_0] == canonical", comb.beta0, "==", K.beta0));
  if (sp.n >= 2)
    c.checks.push_back(
        make_check("combination[genus-0-pair] == canonical", comb.pair0, "==", K.pair0));

  if (sp.n >= sp.g && with_residual && min_coeff(c.terms) >= 0) {
    ResidualClass res = residual_from(canonical_class(sp));
    for (const auto& t : c.terms) {
      DivisorClass cls = term_class(t.class_name, sp);
      if (!same_tracked(tracked_coords(cls), tracked_vector(t.class_name, sp)))
        throw std::logic_error("catalogued coefficients disagree with the class machinery");
      res.subtract_scaled(cls, t.coeff);
    }
    c.residual = std::move(res);
  } else if (sp.n < sp.g) {
    c.notes.push_back(
        "boundary coefficients beyond the tracked set are taken from the "
        "catalogued classes; the exact residual is computed once n >= g");
  }
  for (auto& s : special_notes(sp)) c.notes.push_back(s);
  append_coverage_notes(c);
  c.verdict = all_pass(c.checks);
  return c;
}

Certificate lp_certificate(const Space& sp) {
  Reconstruction rec = reconstruct_odd(sp.g, sp.n);
  Certificate c;
  c.label = "lp-reconstruction";
  c.space = sp;
  c.claims_general_type = true;
  if (rec.status == LPStatus::Optimal) {
    for (std::size_t i = 0; i < rec.generator_names.size(); ++i)
      c.terms.push_back({rec.generator_names[i], rec.coefficients[i]});
    c.lambda_coeff = Rat(13);
    c.psi_surplus = rec.psi_share / sp.n;
    c.psi_coeff = 1 - c.psi_surplus;
    TrackedVec comb = combine_tracked(c.terms, sp);
    TrackedVec K = tracked_vector("canonical", sp);
    c.checks.push_back(make_check("reconstruction-feasible == 1", Rat(1), "==", Rat(1)));
    c.checks.push_back(make_check("psi-average-share > 0", rec.psi_share, ">", Rat(0)));
    c.checks.push_back(make_check("term-coefficients >= 0", min_coeff(c.terms), ">=", Rat(0)));
    c.checks.push_back(make_check("combination[lambda] == canonical", comb.lambda, "==", K.lambda));
    c.checks.push_back(make_check("combination[psi] == canonical", comb.psi, "==", K.psi));
    c.checks.push_back(make_check("combination[alpha_0] == canonical", comb.alpha0, "==", K.alpha0));
    c.checks.push_back(make_check("combination[beta_0] == canonical", comb.beta0, "==", K.beta0));
    if (sp.n >= 2)
      c.checks.push_back(
          make_check("combination[genus-0-pair] == canonical", comb.pair0, "==", K.pair0));
  } else {
    c.lambda_coeff = Rat(0);
    c.psi_coeff = Rat(1);
    c.psi_surplus = Rat(0);
    c.checks.push_back(make_check("reconstruction-feasible == 1", Rat(0), "==", Rat(1)));
  }
  c.notes.push_back(
      "coefficients reconstructed on the tracked coordinates (lambda, psi, "
      "alpha_0, beta_0, genus-0 pairs); boundary coefficients beyond the "
      "tracked set are taken from the catalogued classes");
  for (auto& s : special_notes(sp)) c.notes.push_back(s);
  c.verdict = all_pass(c.checks);
  return c;
}

Certificate make_bespoke(const std::string& label, const Space& sp,
                         std::vector<CertTerm> terms, bool with_k3_rows,
                         std::vector<std::string> extra_notes) {
  Certificate c;
  c.label = label;
  c.space = sp;
  c.claims_general_type = false;
  c.terms = std::move(terms);
  TrackedVec comb = combine_tracked(c.terms, sp);
  c.lambda_coeff = comb.lambda;
  c.psi_coeff = comb.psi;
  c.psi_surplus = 1 - c.psi_coeff;

  ResidualClass res = residual_from(canonical_class(sp));
  for (const auto& t : c.terms) {
    DivisorClass cls = term_class(t.class_name, sp);
    if (!same_tracked(tracked_coords(cls), tracked_vector(t.class_name, sp)))
      throw std::logic_error("catalogued coefficients disagree with the class machinery");
    res.subtract_scaled(cls, t.coeff);
  }
  TrackedVec rt = residual_tracked(res);

  c.checks.push_back(make_check("term-coefficients >= 0", min_coeff(c.terms), ">=", Rat(0)));
  c.checks.push_back(make_check("residual[lambda] >= 0", rt.lambda, ">=", Rat(0)));
  if (sp.n >= 1) c.checks.push_back(make_check("residual[psi] >= 0", rt.psi, ">=", Rat(0)));
  c.checks.push_back(make_check("residual[alpha_0] >= 0", rt.alpha0, ">=", Rat(0)));
  c.checks.push_back(make_check("residual[beta_0] >= 0", rt.beta0, ">=", Rat(0)));
  if (sp.n >= 2)
    c.checks.push_back(make_check("residual[genus-0-pair] >= 0", rt.pair0, ">=", Rat(0)));

  if (with_k3_rows) {
    TestCurve k3 = test_curve("k3_pencil", sp.g);
    c.checks.push_back(make_check("k3-pencil . canonical == 0",
                                  intersect(k3, canonical_class(sp)), "==", Rat(0)));
    for (const auto& t : c.terms)
      c.checks.push_back(make_check("k3-pencil . " + t.class_name + " == 0",
                                    intersect(k3, term_class(t.class_name, sp)), "==",
                                    Rat(0)));
  }

  c.residual = std::move(res);
  c.notes.push_back(
      "certifies an effective decomposition of the canonical class "
      "(nonnegative Kodaira dimension), not bigness");
  for (auto& s : extra_notes) c.notes.push_back(std::move(s));
  append_coverage_notes(c);
  c.verdict = all_pass(c.checks);
  return c;
}

}  // namespace

Certificate certify_general_type(const Space& sp, bool with_residual) {
  validate_space(sp);
  require_spin(sp, "certify_general_type");
  if (sp.g < 4 || sp.g > 11)
    throw UsageError("certified genus range is 4 <= g <= 11");
  if (sp.n < 1)
    throw UsageError("certificates cover pointed spaces only (n >= 1)");
  slope_value(sp.g);  // every genus in range has one; throws otherwise
  Space plain = sp;
  plain.symmetrized = false;
  if (plain.kind == SpaceKind::SpinOdd && plain.n < plain.g && plain.g >= 8)
    return lp_certificate(plain);
  return threshold_certificate(plain, with_residual);
}

Certificate bespoke_s73_with_coeff(const Rat& tangency_coeff) {
  Space sp{SpaceKind::SpinEven, 7, 3, false};
  return make_bespoke(
      "s73_plus", sp,
      {{"mu*(theta-null)", Rat(8)},
       {"weighted-tangency-2-2-3", tangency_coeff},
       {"sigma*(slope)", Rat(3, 2)}},
      false,
      {"the tangency divisor's remaining boundary coefficients are "
       "nonpositive and recorded as zero-lower-bound tails"});
}

Certificate verify_bespoke(const std::string& name) {
  if (name == "s73_plus") return bespoke_s73_with_coeff(Rat(1, 12));
  if (name == "s84_minus") {
    Space sp{SpaceKind::SpinOdd, 8, 4, false};
    return make_bespoke("s84_minus", sp,
                        {{"theta-pointed", Rat(2)}, {"sigma*(slope)", Rat(3, 2)}}, false, {});
  }
  if (name == "s93_minus") {
    Space sp{SpaceKind::SpinOdd, 9, 3, false};
    return make_bespoke("s93_minus", sp,
                        {{"theta-pointed", Rat(2)},
                         {"sigma*(slope)", Rat(10, 7)},
                         {"mu*(z)", Rat(1, 14)}},
                        false, {});
  }
  if (name == "s111_minus") {
    Space sp{SpaceKind::SpinOdd, 11, 1, false};
    return make_bespoke(
        "s111_minus", sp,
        {{"theta-pointed", Rat(2)}, {"sigma*(slope)", Rat(4, 3)}, {"mu*(z)", Rat(1, 6)}},
        true,
        {"a filling family of rational curves meets the canonical class and "
         "every term in degree zero: the decomposition is sharp and the "
         "canonical class is not big"});
  }
  throw UsageError("unknown bespoke case " + name +
                   " (expected one of s73_plus, s84_minus, s93_minus, s111_minus)");
}

std::vector<std::string> bespoke_case_names() {
  return {"s73_plus", "s84_minus", "s93_minus", "s111_minus"};
}

// ---------------------------------------------------------------------------
// Reconstruction
// ---------------------------------------------------------------------------

Reconstruction reconstruct_odd(int g, int n) {
  if (g < 8 || g > 11)
    throw UsageError("reconstruction is catalogued for 8 <= g <= 11");
  if (n < 1 || n >= g)
    throw UsageError("reconstruction applies below the pullback range (1 <= n < g)");
  Space sp{SpaceKind::SpinOdd, g, n, false};
  Reconstruction rec;
  rec.space = sp;
  rec.generator_names = {"theta-pointed", "mu*(z)", "sigma*(slope)"};
  if (n >= 2) rec.generator_names.push_back("pi*(symmetrized-logan)");
  rec.generator_names.push_back("psi-average");

  TrackedVec K = tracked_vector("canonical", sp);
  std::vector<Rat> rhs = {K.lambda, K.psi, K.alpha0, K.beta0};
  if (n >= 2) rhs.push_back(K.pair0);
  std::vector<std::vector<Rat>> A(rhs.size(),
                                  std::vector<Rat>(rec.generator_names.size(), Rat(0)));
  for (std::size_t j = 0; j < rec.generator_names.size(); ++j) {
    TrackedVec v = tracked_vector(rec.generator_names[j], sp);
    A[0][j] = v.lambda;
    A[1][j] = v.psi;
    A[2][j] = v.alpha0;
    A[3][j] = v.beta0;
    if (n >= 2) A[4][j] = v.pair0;
  }
  std::vector<Rat> obj(rec.generator_names.size(), Rat(0));
  obj.back() = Rat(1);

  LPResult lp = lp_maximize(A, rhs, obj);
  rec.status = lp.status;
  if (lp.status == LPStatus::Unbounded)
    throw std::logic_error("reconstruction cannot be unbounded on these generators");
  if (lp.status == LPStatus::Optimal) {
    rec.coefficients = lp.x;
    rec.psi_share = lp.value;
    rec.pass = lp.value > 0;
  } else {
    rec.psi_share = Rat(0);
    rec.pass = false;
  }
  return rec;
}

// ---------------------------------------------------------------------------
// Independent re-evaluation
// ---------------------------------------------------------------------------

bool verify_certificate(const Certificate& cert) {
  try {
    Space sp = cert.space;
    sp.symmetrized = false;
    validate_space(sp);
    require_spin(sp, "verify_certificate");

    TrackedVec comb{Rat(0), Rat(0), Rat(0), Rat(0), Rat(0)};
    Rat psi_effective(0);
    for (const auto& t : cert.terms) {
      TrackedVec v = tracked_vector(t.class_name, sp);
      comb.lambda += t.coeff * v.lambda;
      comb.psi += t.coeff * v.psi;
      comb.alpha0 += t.coeff * v.alpha0;
      comb.beta0 += t.coeff * v.beta0;
      comb.pair0 += t.coeff * v.pair0;
      if (t.class_name != "psi-average") psi_effective += t.coeff * v.psi;
    }
    TrackedVec K = tracked_vector("canonical", sp);

    // The stored summary coefficients must match the re-derived combination
    // (infeasible reconstructions carry no terms and conventional summaries).
    if (!cert.terms.empty() &&
        (cert.lambda_coeff != comb.lambda || cert.psi_coeff != psi_effective))
      return false;

    // Rebuild the exact residual whenever every term is constructible and
    // every coefficient is nonnegative; cross-check catalogue vs machinery.
    std::optional<ResidualClass> res;
    try {
      ResidualClass r = residual_from(canonical_class(sp));
      bool ok = true;
      for (const auto& t : cert.terms) {
        DivisorClass cls = term_class(t.class_name, sp);
        if (!same_tracked(tracked_coords(cls), tracked_vector(t.class_name, sp)))
          return false;
        if (t.coeff < 0) {
          ok = false;
          break;
        }
        r.subtract_scaled(cls, t.coeff);
      }
      if (ok) res = std::move(r);
    } catch (const UsageError&) {
      // Some term exists only through its catalogued leading coefficients.
    }
    if (cert.residual) {
      if (!res) return false;
      if (!(res->written == cert.residual->written &&
            res->addition_bounds == cert.residual->addition_bounds))
        return false;
    }

    std::optional<Reconstruction> rec;
    auto reconstruction = [&]() -> const Reconstruction& {
      if (!rec) rec = reconstruct_odd(sp.g, sp.n);
      return *rec;
    };

    for (const auto& row : cert.checks) {
      Rat lhs, rhs;
      const std::string& name = row.name;
      if (name == "lambda-coefficient < 13") {
        lhs = comb.lambda;
        rhs = Rat(13);
      } else if (name == "psi-coefficient < 1") {
        lhs = psi_effective;
        rhs = Rat(1);
      } else if (name == "term-coefficients >= 0") {
        if (cert.terms.empty()) return false;
        lhs = min_coeff(cert.terms);
        rhs = Rat(0);
      } else if (name == "combination[lambda] == canonical") {
        lhs = comb.lambda;
        rhs = K.lambda;
      } else if (name == "combination[psi] == canonical") {
        lhs = comb.psi;
        rhs = K.psi;
      } else if (name == "combination[alpha_0] == canonical") {
        lhs = comb.alpha0;
        rhs = K.alpha0;
      } else if (name == "combination[beta_0] == canonical") {
        lhs = comb.beta0;
        rhs = K.beta0;
      } else if (name == "combination[genus-0-pair] == canonical") {
        lhs = comb.pair0;
        rhs = K.pair0;
      } else if (name == "reconstruction-feasible == 1") {
        lhs = Rat(reconstruction().status == LPStatus::Optimal ? 1 : 0);
        rhs = Rat(1);
      } else if (name == "psi-average-share > 0") {
        lhs = reconstruction().psi_share;
        rhs = Rat(0);
      } else if (name == "residual[lambda] >= 0") {
        if (!res) return false;
        lhs = residual_tracked(*res).lambda;
        rhs = Rat(0);
      } else if (name == "residual[psi] >= 0") {
        if (!res) return false;
        lhs = residual_tracked(*res).psi;
        rhs = Rat(0);
      } else if (name == "residual[alpha_0] >= 0") {
        if (!res) return false;
        lhs = residual_tracked(*res).alpha0;
        rhs = Rat(0);
      } else if (name == "residual[beta_0] >= 0") {
        if (!res) return false;
        lhs = residual_tracked(*res).beta0;
        rhs = Rat(0);
      } else if (name == "residual[genus-0-pair] >= 0") {
        if (!res) return false;
        lhs = residual_tracked(*res).pair0;
        rhs = Rat(0);
      } else if (name.rfind("k3-pencil . ", 0) == 0 && name.size() > 17 &&
                 name.substr(name.size() - 5) == " == 0") {
        std::string term = name.substr(12, name.size() - 12 - 5);
        TestCurve k3 = test_curve("k3_pencil", sp.g);
        DivisorClass cls =
            term == "canonical" ? canonical_class(sp) : term_class(term, sp);
        lhs = intersect(k3, cls);
        rhs = Rat(0);
      } else {
        return false;  // unrecognized row: cannot re-evaluate
      }
      Inequality fresh = make_check(row.name, lhs, row.sense, rhs);
      if (fresh.lhs != row.lhs || fresh.rhs != row.rhs || fresh.pass != row.pass)
        return false;
    }

    // The verdict must equal the conjunction of the recorded rows, and for
    // reconstruction certificates the recorded coefficients must be the
    // optimizer's.
    if (cert.verdict != all_pass(cert.checks)) return false;
    if (cert.label == "lp-reconstruction" &&
        !cert.terms.empty()) {
      const Reconstruction& r = reconstruction();
      if (r.status != LPStatus::Optimal) return false;
      if (cert.terms.size() != r.generator_names.size()) return false;
      for (std::size_t i = 0; i < r.generator_names.size(); ++i) {
        if (cert.terms[i].class_name != r.generator_names[i]) return false;
        if (cert.terms[i].coeff != r.coefficients[i]) return false;
      }
      if (cert.psi_surplus * sp.n != r.psi_share) return false;
    }
    if (cert.psi_surplus != 1 - cert.psi_coeff) return false;
    return true;
  } catch (...) {
    return false;
  }
}

// ---------------------------------------------------------------------------
// Scan
// ---------------------------------------------------------------------------

ScanResult threshold_scan(int g, SpaceKind kind, int n_max) {
  if (kind == SpaceKind::ModuliCurves)
    throw UsageError("threshold_scan requires a spin space kind");
  if (n_max < 1) throw UsageError("n_max must be at least 1");
  ScanResult out;
  out.g = g;
  out.kind = kind;
  out.n_max = n_max;
  for (int n = 1; n <= n_max; ++n) {
    Space sp{kind, g, n, false};
    Certificate cert = certify_general_type(sp, /*with_residual=*/false);
    ScanRow row;
    row.n = n;
    row.mechanism = cert.label == "lp-reconstruction" ? "lp-reconstruction" : "formula";
    row.pass = cert.verdict;
    if (row.mechanism == "formula") {
      row.lambda_coeff = cert.lambda_coeff;
      row.psi_coeff = cert.psi_coeff;
    } else if (cert.verdict || !cert.terms.empty()) {
      row.note = "psi-average share " + Rat(cert.psi_surplus * n).str();
    }
    std::string extra;
    for (const auto& s : special_notes(sp)) {
      if (!extra.empty()) extra += "; ";
      extra += s;
    }
    if (!extra.empty()) row.note = row.note.empty() ? extra : row.note + "; " + extra;
    if (row.pass && !out.first_pass) out.first_pass = n;
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace spincalc

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "spincalc/classes.hpp"
#include "spincalc/divisors.hpp"

using namespace spincalc;

namespace {

Space moduli(int g, int n) { return Space{SpaceKind::ModuliCurves, g, n, false}; }
Space spin_odd(int g, int n) { return Space{SpaceKind::SpinOdd, g, n, false}; }
Space spin_even(int g, int n) { return Space{SpaceKind::SpinEven, g, n, false}; }

/// Canonical class of the moduli of curves itself:
/// 13λ + Σψ − 2δ_irr − 2Σδ_{i:S} − δ_{1:∅}.
DivisorClass moduli_canonical(const Space& sp) {
  DivisorClass out{sp};
  out.add(require_class(sp, Tag::Lambda, 0, 0), Rat(13));
  for (int i = 1; i <= sp.n; ++i) out.add(require_class(sp, Tag::Psi, i, 0), Rat(1));
  for (const auto& b : enumerate_basis(sp)) {
    if (b.tag == Tag::DeltaIrr) out.add(b, Rat(-2));
    if (b.tag == Tag::Delta) out.add(b, Rat(-2));
  }
  out.add(require_class(sp, Tag::Delta, 1, 0), Rat(-1));
  return out;
}

}  // namespace

TEST_CASE("basis enumeration has the expected sizes and is canonically named") {
  CHECK(enumerate_basis(moduli(2, 0)).size() == 3);   // lambda, delta_irr, delta_1
  CHECK(enumerate_basis(moduli(2, 1)).size() == 4);
  CHECK(enumerate_basis(moduli(4, 2)).size() == 11);
  CHECK(enumerate_basis(moduli(4, 4)).size() == 41);
  CHECK(enumerate_basis(spin_odd(4, 0)).size() == 6);
  CHECK(enumerate_basis(spin_even(4, 0)).size() == 7);
  CHECK(enumerate_basis(spin_odd(4, 2)).size() == 18);
  CHECK(enumerate_basis(spin_even(4, 2)).size() == 18);
  CHECK(enumerate_basis(spin_odd(5, 1)).size() == 12);

  for (const Space& sp : {moduli(4, 3), spin_odd(5, 2), spin_even(6, 2)}) {
    int psi_count = 0;
    for (const auto& b : enumerate_basis(sp)) {
      // Canonical naming is idempotent: re-requesting a basis class by its
      // own index data returns it unchanged.
      CHECK(require_class(sp, b.tag, b.i, b.S) == b);
      if (b.tag == Tag::Psi) ++psi_count;
      if (sp.kind == SpaceKind::ModuliCurves) {
        CHECK(b.tag != Tag::AlphaIrr);
        CHECK(b.tag != Tag::BetaIrr);
        CHECK(b.tag != Tag::Alpha);
        CHECK(b.tag != Tag::Beta);
      } else {
        CHECK(b.tag != Tag::DeltaIrr);
        CHECK(b.tag != Tag::Delta);
      }
    }
    CHECK(psi_count == sp.n);
  }
}

TEST_CASE("spaces and names round-trip; invalid spaces are refused") {
  for (SpaceKind k : {SpaceKind::ModuliCurves, SpaceKind::SpinOdd, SpaceKind::SpinEven})
    CHECK(kind_from_name(kind_name(k)) == k);
  CHECK_THROWS_AS(kind_from_name("nonsense"), UsageError);
  for (Tag t : {Tag::Lambda, Tag::Psi, Tag::DeltaIrr, Tag::AlphaIrr, Tag::BetaIrr,
                Tag::Delta, Tag::Alpha, Tag::Beta})
    CHECK(tag_from_name(tag_name(t)) == t);
  CHECK_THROWS_AS(validate_space(Space{SpaceKind::SpinOdd, 1, 0, false}), UsageError);
  CHECK_THROWS_AS(validate_space(Space{SpaceKind::ModuliCurves, 4, -1, false}), UsageError);
}

TEST_CASE("canonical class of a spin space: frozen coefficients at genus 4") {
  Space so = spin_odd(4, 1);
  DivisorClass K = canonical_class(so);
  CHECK(K.get(require_class(so, Tag::Lambda, 0, 0)) == 13);
  CHECK(K.get(require_class(so, Tag::Psi, 1, 0)) == 1);
  CHECK(K.get(require_class(so, Tag::AlphaIrr, 0, 0)) == -2);
  CHECK(K.get(require_class(so, Tag::BetaIrr, 0, 0)) == -3);
  CHECK(K.get(require_class(so, Tag::Alpha, 1, 0)) == -3);
  CHECK(K.get(require_class(so, Tag::Alpha, 1, 1)) == -2);
  CHECK(K.get(require_class(so, Tag::Alpha, 2, 0)) == -2);
  CHECK(K.get(require_class(so, Tag::Alpha, 2, 1)) == -2);
  CHECK(K.get(require_class(so, Tag::Alpha, 3, 0)) == -2);
  // On the odd space the beta-side of the (1, empty) family lands on the
  // complementary alpha slot, deepening it to -3.
  CHECK(K.get(require_class(so, Tag::Alpha, 3, 1)) == -3);
  CHECK(K.coeffs.size() == 10);

  Space se = spin_even(4, 1);
  DivisorClass Ke = canonical_class(se);
  CHECK(Ke.get(require_class(se, Tag::Alpha, 1, 0)) == -3);
  CHECK(Ke.get(require_class(se, Tag::Beta, 1, 0)) == -3);
  CHECK(Ke.get(require_class(se, Tag::Beta, 1, 1)) == -2);
  CHECK(Ke.coeffs.size() == 10);

  CHECK_THROWS_AS(canonical_class(moduli(4, 1)), UsageError);
}

TEST_CASE("spin canonical class equals cover pullback of the curves canonical class plus beta_0") {
  for (int g : {2, 4, 5, 8}) {
    for (int n : {0, 1, 2}) {
      for (SpaceKind kind : {SpaceKind::SpinOdd, SpaceKind::SpinEven}) {
        Space sp{kind, g, n, false};
        DivisorClass lhs = canonical_class(sp);
        DivisorClass rhs = pullback_pi(moduli_canonical(moduli(g, n)), kind);
        rhs.add(require_class(sp, Tag::BetaIrr, 0, 0), Rat(1));
        CHECK(lhs.coeffs == rhs.coeffs);
      }
    }
  }
}

TEST_CASE("cover pullback of delta_irr is alpha_0 + 2 beta_0 for every genus up to 12") {
  for (int g = 2; g <= 12; ++g) {
    Space src = moduli(g, 0);
    DivisorClass d{src};
    d.add(require_class(src, Tag::DeltaIrr, 0, 0), Rat(1));
    for (SpaceKind kind : {SpaceKind::SpinOdd, SpaceKind::SpinEven}) {
      DivisorClass pb = pullback_pi(d, kind);
      Space tgt{kind, g, 0, false};
      CHECK(pb.coeffs.size() == 2);
      CHECK(pb.get(require_class(tgt, Tag::AlphaIrr, 0, 0)) == 1);
      CHECK(pb.get(require_class(tgt, Tag::BetaIrr, 0, 0)) == 2);
    }
  }
}

TEST_CASE("cover pushforward coefficients and the symbolic degree identity") {
  for (int g = 2; g <= 12; ++g) {
    Space sp = spin_even(g, 0);
    DivisorClass a{sp};
    a.add(require_class(sp, Tag::AlphaIrr, 0, 0), Rat(1));
    DivisorClass pa = pushforward_pi(a);
    Space tgt = moduli(g, 0);
    Rat expect_a = Rat(Int(1) << (2 * g - 2));
    CHECK(pa.get(require_class(tgt, Tag::DeltaIrr, 0, 0)) == expect_a);

    DivisorClass b{sp};
    b.add(require_class(sp, Tag::BetaIrr, 0, 0), Rat(1));
    DivisorClass pb = pushforward_pi(b);
    Rat expect_b = Rat(Int(1) << (g - 2)) * (Rat(Int(1) << (g - 1)) - 1);
    CHECK(pb.get(require_class(tgt, Tag::DeltaIrr, 0, 0)) == expect_b);

    // 2^(2g-2)/16 == 2^(2g-6), exactly, as rationals.
    Rat lhs = expect_a / 16;
    Rat rhs = g >= 3 ? Rat(Int(1) << (2 * g - 6)) : Rat(1, Int(1) << (6 - 2 * g));
    CHECK(lhs == rhs);
  }

  // Refusals: psi-supported classes and tail-bounded classes cannot be pushed.
  Space sp = spin_odd(4, 1);
  DivisorClass bad{sp};
  bad.add(require_class(sp, Tag::Psi, 1, 0), Rat(1));
  CHECK_THROWS_AS(pushforward_pi(bad), UsageError);
  DivisorClass tailed{sp};
  tailed.add(require_class(sp, Tag::AlphaIrr, 0, 0), Rat(1));
  tailed.add_tail(require_class(sp, Tag::Alpha, 1, 0), Rat(1));
  CHECK_THROWS_AS(pushforward_pi(tailed), UsageError);
}

TEST_CASE("symmetrized forgetful pullback of the marked-point class: printed coefficients") {
  for (auto [g, n] : {std::pair{4, 9}, {4, 10}, {5, 11}}) {
    Space src = moduli(g, n);
    DivisorClass logan = named_class("logan", moduli(g, g));
    uint32_t forgotten = ((1u << n) - 1) & ~((1u << g) - 1);
    DivisorClass sym = symmetrize(pullback_forgetful(logan, src, forgotten));
    CHECK(sym.get(require_class(src, Tag::Lambda, 0, 0)) == -1);
    for (int i = 1; i <= n; ++i)
      CHECK(sym.get(require_class(src, Tag::Psi, i, 0)) == Rat(g, n));
    Rat pair_expect = Rat(-g) * (g - 3 + 2 * n) / (Rat(n) * (n - 1));
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j)
        CHECK(sym.get(require_class(src, Tag::Delta, 0, (1u << (i - 1)) | (1u << (j - 1)))) ==
              pair_expect);

    // The choice of forgotten labels is irrelevant after symmetrization.
    uint32_t first = (1u << (n - g)) - 1;
    DivisorClass sym2 = symmetrize(pullback_forgetful(logan, src, first));
    CHECK(sym2.coeffs == sym.coeffs);
    CHECK(sym2.tail_bounds == sym.tail_bounds);
  }
}

TEST_CASE("symmetrize averages orbits, is idempotent, and keeps orbit-wide tail bounds") {
  Space sp = moduli(4, 3);
  DivisorClass d{sp};
  d.add(require_class(sp, Tag::Psi, 1, 0), Rat(6));
  DivisorClass s = symmetrize(d);
  for (int i = 1; i <= 3; ++i) CHECK(s.get(require_class(sp, Tag::Psi, i, 0)) == 2);
  DivisorClass ss = symmetrize(s);
  CHECK(ss.coeffs == s.coeffs);

  // A bound recorded on one orbit member spreads to the whole orbit, even
  // when the bound is zero (recording "nothing may be added" is information).
  DivisorClass t{sp};
  t.add(require_class(sp, Tag::Lambda, 0, 0), Rat(1));
  t.add_tail(require_class(sp, Tag::Delta, 1, 1), Rat(0));
  DivisorClass st = symmetrize(t);
  CHECK(st.tail_bounds.size() == 3);
  for (int i = 1; i <= 3; ++i) {
    auto it = st.tail_bounds.find(require_class(sp, Tag::Delta, 1, 1u << (i - 1)));
    REQUIRE(it != st.tail_bounds.end());
    CHECK(it->second == Rat(0));
  }
}

TEST_CASE("named classes validate their spaces and slope values follow the case table") {
  CHECK_THROWS_AS(named_class("theta_null", spin_odd(4, 0)), UsageError);
  CHECK_THROWS_AS(named_class("Z_g", spin_even(4, 0)), UsageError);
  CHECK_THROWS_AS(named_class("logan", moduli(4, 3)), UsageError);
  CHECK_THROWS_AS(named_class("weierstrass", moduli(4, 0)), UsageError);
  CHECK_THROWS_AS(named_class("no-such-class", moduli(4, 0)), UsageError);

  CHECK(slope_value(4) == Rat(17, 2));
  CHECK(slope_value(6) == Rat(47, 6));
  CHECK(slope_value(10) == 7);
  CHECK(slope_value(5) == 8);           // 6 + 12/6
  CHECK(slope_value(11) == 7);          // 6 + 12/12
  DivisorClass sd = named_class("slope_divisor", moduli(5, 0));
  CHECK(sd.get(require_class(moduli(5, 0), Tag::Lambda, 0, 0)) == 8);
  CHECK(!sd.tail_bounds.empty());       // b_i >= 1 recorded as bounds

  DivisorClass tn = named_class("theta_null", spin_even(4, 0));
  CHECK(tn.get(require_class(spin_even(4, 0), Tag::Lambda, 0, 0)) == Rat(1, 4));
  DivisorClass z = named_class("Z_g", spin_odd(4, 0));
  CHECK(z.get(require_class(spin_odd(4, 0), Tag::Lambda, 0, 0)) == Rat(12));
  CHECK(z.get(require_class(spin_odd(4, 0), Tag::AlphaIrr, 0, 0)) == Rat(-3, 2));
  CHECK(z.get(require_class(spin_odd(4, 0), Tag::BetaIrr, 0, 0)) == Rat(-2));
  CHECK(z.get(require_class(spin_odd(4, 0), Tag::Alpha, 1, 0)) == Rat(-6));
  CHECK(z.get(require_class(spin_odd(4, 0), Tag::Alpha, 2, 0)) == Rat(-4));
  CHECK(z.get(require_class(spin_odd(4, 0), Tag::Alpha, 3, 0)) == Rat(-2));
}

TEST_CASE("forgetful pullback refuses inconsistent data") {
  Space src = moduli(4, 6);
  DivisorClass logan = named_class("logan", moduli(4, 4));
  CHECK_THROWS_AS(pullback_forgetful(logan, src, 0b111u), UsageError);   // forgets 3, need 2
  CHECK_THROWS_AS(pullback_forgetful(logan, moduli(5, 6), 0b11u), UsageError);  // genus mismatch
}

// Plane-quintic engine: linear systems and their dimensions, the residual
// projection to binary quartics, conic point search, the verified sampler,
// and JSON round-trips of sampled data.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "spincalc/jsonio.hpp"
#include "spincalc/quintic.hpp"

#include <chrono>

using namespace spincalc;

namespace {

template <class K>
std::vector<Pt3<K>> integer_points(const K& f) {
  const long long raw[10][3] = {{1, 1, 1}, {1, 2, 1}, {1, 3, 1}, {2, 1, 1}, {3, 1, 1},
                                {1, 1, 2}, {1, 1, 3}, {2, 3, 1}, {3, 2, 1}, {5, 1, 2}};
  std::vector<Pt3<K>> out;
  for (const auto& P : raw)
    out.push_back({f.from_int(P[0]), f.from_int(P[1]), f.from_int(P[2])});
  return out;
}

const NamedCheck& find_named(const VerifyReport& rep, const std::string& name) {
  for (const auto& c : rep.checks)
    if (c.name == name) return c;
  FAIL("missing check: " << name);
  static NamedCheck dummy;
  return dummy;
}

// x z^2 (x - z)^2 + y (y^2 - z^2)^2: correct contact with both frame lines
// but a degenerate double point at [1:0:0] and stray singularities.
TForm<RatField> degenerate_quintic(const RatField& f) {
  TForm<RatField> g(f, 5);
  g.add_term({3, 0, 2}, Rat(1));
  g.add_term({2, 0, 3}, Rat(-2));
  g.add_term({1, 0, 4}, Rat(1));
  g.add_term({0, 5, 0}, Rat(1));
  g.add_term({0, 3, 2}, Rat(-2));
  g.add_term({0, 1, 4}, Rat(1));
  return g;
}

} // namespace

TEST_CASE("squaring map sends a binary quadratic to its square's coordinates") {
  RatField f;
  // (s^2 + 2t^2 + 3st)^2 = s^4 + 4t^4 + 13 s^2 t^2 + 6 s^3 t + 12 s t^3.
  auto sq = squaring_map(f, {Rat(1), Rat(2), Rat(3)});
  CHECK(sq[0] == Rat(1));
  CHECK(sq[1] == Rat(4));
  CHECK(sq[2] == Rat(13));
  CHECK(sq[3] == Rat(6));
  CHECK(sq[4] == Rat(12));
  CHECK_THROWS_AS(squaring_map(f, {Rat(0), Rat(0), Rat(0)}), UsageError);
}

TEST_CASE("rho divides the restriction to L by the linear form at n") {
  RatField f;
  auto fr = canonical_frame(f);
  // x^5 + y^5 + y z^4 restricts to L (x = 0) as s^5 + s t^4 = s (s^4 + t^4).
  TForm<RatField> g(f, 5);
  g.add_term({5, 0, 0}, Rat(1));
  g.add_term({0, 5, 0}, Rat(1));
  g.add_term({0, 1, 4}, Rat(1));
  BForm<RatField> r = rho(g, fr);
  CHECK(r.degree() == 4);
  CHECK(r.coeff(4) == Rat(1));  // s^4
  CHECK(r.coeff(0) == Rat(1));  // t^4
  CHECK(r.coeff(3) == Rat(0));
  CHECK(r.coeff(2) == Rat(0));
  CHECK(r.coeff(1) == Rat(0));
}

TEST_CASE("linear-system dimensions over a prime field and over the rationals") {
  auto run = [](const auto& f) {
    auto fr = canonical_frame(f);
    auto sys = quintic_system(fr);
    CHECK(sys.basis.size() == 14);

    auto pts = integer_points(f);
    auto rsys = restricted_system(sys, pts);
    CHECK(rsys.basis.size() == 4);

    // rho on the full system: rank 5 (all binary quartics), kernel 9.
    auto M = rho_matrix(fr, sys.basis);
    CHECK(rank(M) == 5);
    auto ker = kernel_basis(M);
    CHECK(ker.size() == 9);
    CHECK(ker.size() + rank(M) == sys.basis.size());
  };
  run(PrimeField(10007));
  run(RatField{});
}

TEST_CASE("degenerate frames are refused") {
  RatField f;
  auto fr = canonical_frame(f);
  fr.nsecond = fr.nprime;
  CHECK_THROWS_AS(quintic_system(fr), UsageError);

  auto fr2 = canonical_frame(f);
  fr2.n = {f.one(), f.one(), f.one()};  // off both lines
  CHECK_THROWS_AS(validate_frame(fr2), UsageError);
}

TEST_CASE("conic point search is deterministic and staged") {
  // a^2 + b^2 + c^2 over F_5: [1 : k : 0] with k^2 = -1, smallest root k = 2.
  PrimeField f5(5);
  Conic<PrimeField> C5{f5, f5.one(), f5.one(), f5.one(), f5.zero(), f5.zero(), f5.zero()};
  auto out5 = conic_point(C5);
  REQUIRE(out5.point.has_value());
  CHECK((*out5.point)[0].v == 1);
  CHECK((*out5.point)[1].v == 2);
  CHECK((*out5.point)[2].v == 0);
  CHECK(C5.eval(*out5.point).v == 0);

  // a^2 + b^2 - c^2 over Q: line [1 : 0 : k] gives k = 1 (positive root first).
  RatField fq;
  Conic<RatField> Cq{fq, Rat(1), Rat(1), Rat(-1), Rat(0), Rat(0), Rat(0)};
  auto outq = conic_point(Cq);
  REQUIRE(outq.point.has_value());
  CHECK((*outq.point)[0] == Rat(1));
  CHECK((*outq.point)[1] == Rat(0));
  CHECK((*outq.point)[2] == Rat(1));

  // a^2 + b^2 + c^2 has no rational point: the search names the extension -1.
  Conic<RatField> Cno{fq, Rat(1), Rat(1), Rat(1), Rat(0), Rat(0), Rat(0)};
  auto outno = conic_point(Cno, 10);
  CHECK_FALSE(outno.point.has_value());
  CHECK(outno.ext_d == -1);

  // Rank < 3 is refused.
  Conic<RatField> Cdeg{fq, Rat(1), Rat(0), Rat(0), Rat(0), Rat(0), Rat(0)};
  CHECK_THROWS_AS(conic_point(Cdeg), UsageError);
}

TEST_CASE("radicand reduction strips small square factors") {
  CHECK(reduce_radicand(Int(-4)) == -1);
  CHECK(reduce_radicand(Int(18)) == 2);
  CHECK(reduce_radicand(Int(360)) == 10);
  CHECK(reduce_radicand(Int(49)) == 1);
  CHECK(reduce_radicand(Int(0)) == 0);
}

TEST_CASE("sampler over F_10007: verified output, deterministic to the byte") {
  PrimeField f(10007);
  SpinDatum<PrimeField> d = sample_spin4(f, 42);
  CHECK(d.report.all_pass);
  CHECK(d.report.genus == 4);
  CHECK(d.report.checks.size() == 5);
  CHECK(d.points.size() == 10);
  CHECK(d.gamma.deg == 5);
  CHECK(d.seed == 42);

  SpinDatum<PrimeField> d2 = sample_spin4(f, 42);
  CHECK(dump_document(datum_to_json(d)) == dump_document(datum_to_json(d2)));

  // A different seed changes the quintic.
  SpinDatum<PrimeField> d3 = sample_spin4(f, 43);
  CHECK(dump_document(datum_to_json(d)) != dump_document(datum_to_json(d3)));
}

TEST_CASE("sampler rejects small characteristic") {
  CHECK_THROWS_AS(sample_spin4(PrimeField(13), 1), UsageError);
  CHECK_THROWS_AS(sample_spin4(PrimeField(7), 1), UsageError);
  // Composite moduli never produce a field in the first place.
  CHECK_THROWS_AS(PrimeField(10008), UsageError);
}

TEST_CASE("tampered data fail exactly the right checks") {
  PrimeField f(10007);
  SpinDatum<PrimeField> d = sample_spin4(f, 42);
  REQUIRE(d.report.all_pass);

  SUBCASE("moving a marked point breaks the marked-point check") {
    SpinDatum<PrimeField> t = d;
    t.points[3][0] = t.points[3][0] + f.one();
    VerifyReport rep = verify_spin_datum(t);
    CHECK_FALSE(rep.all_pass);
    CHECK_FALSE(find_named(rep, "marked-points-on-curve-smooth-distinct").pass);
    CHECK(find_named(rep, "restriction-to-F-matches-assigned-contact").pass);
    CHECK(find_named(rep, "restriction-to-L-is-ln-times-square").pass);
    CHECK(find_named(rep, "assigned-points-are-nodes").pass);
    CHECK(find_named(rep, "no-unassigned-singularities").pass);
  }

  SUBCASE("duplicating a marked point breaks distinctness") {
    SpinDatum<PrimeField> t = d;
    t.points[4] = t.points[5];
    VerifyReport rep = verify_spin_datum(t);
    CHECK_FALSE(find_named(rep, "marked-points-on-curve-smooth-distinct").pass);
  }

  SUBCASE("changing the square root breaks the restriction-to-L check") {
    SpinDatum<PrimeField> t = d;
    t.q[0] = t.q[0] + f.one();
    VerifyReport rep = verify_spin_datum(t);
    CHECK_FALSE(rep.all_pass);
    CHECK_FALSE(find_named(rep, "restriction-to-L-is-ln-times-square").pass);
    CHECK(find_named(rep, "restriction-to-F-matches-assigned-contact").pass);
  }
}

TEST_CASE("degenerate assigned points and stray singularities are caught") {
  RatField f;
  SpinDatum<RatField> d;
  d.field = f;
  d.frame = canonical_frame(f);
  d.gamma = degenerate_quintic(f);
  d.q = {Rat(1), Rat(-1), Rat(0)};
  d.points = integer_points(f);
  VerifyReport rep = verify_spin_datum(d);
  CHECK_FALSE(rep.all_pass);
  // The contact pattern along both frame lines is correct by construction...
  CHECK(find_named(rep, "restriction-to-F-matches-assigned-contact").pass);
  CHECK(find_named(rep, "restriction-to-L-is-ln-times-square").pass);
  // ...but the assigned double point at [1:0:0] is not a node, and the
  // curve carries singular points away from the assigned fiber.
  CHECK_FALSE(find_named(rep, "assigned-points-are-nodes").pass);
  CHECK_FALSE(find_named(rep, "no-unassigned-singularities").pass);
}

TEST_CASE("non-quintic input is refused") {
  RatField f;
  SpinDatum<RatField> d;
  d.field = f;
  d.frame = canonical_frame(f);
  d.gamma = TForm<RatField>(f, 4);
  d.gamma.add_term({4, 0, 0}, Rat(1));
  d.q = {Rat(1), Rat(0), Rat(0)};
  CHECK_THROWS_AS(verify_spin_datum(d), UsageError);
}

TEST_CASE("sampled data round-trip through JSON") {
  PrimeField f(10007);
  SpinDatum<PrimeField> d = sample_spin4(f, 42);
  Json j = datum_to_json(d);
  AnyDatum back = datum_from_json(j);
  REQUIRE(std::holds_alternative<SpinDatum<PrimeField>>(back));
  const auto& b = std::get<SpinDatum<PrimeField>>(back);
  CHECK(b.seed == d.seed);
  CHECK(b.attempts == d.attempts);
  CHECK(verify_spin_datum(b).all_pass);
  CHECK(dump_document(datum_to_json(b)) == dump_document(j));
}

TEST_CASE("rational sampling escalates to a quadratic extension and succeeds") {
  auto t0 = std::chrono::steady_clock::now();
  Int d_found = 0;
  try {
    sample_spin4(RatField{}, 2, 20, 25);
    FAIL("seed 2 was expected to need an extension at this height bound");
  } catch (const ExtensionRequired& ex) {
    d_found = ex.d;
  }
  CHECK(d_found != 0);
  CHECK(d_found != 1);

  QuadExt<RatField> ext(RatField{}, Rat(d_found));
  SpinDatum<QuadExt<RatField>> d = sample_spin4(ext, 2, 20, 25);
  CHECK(d.report.all_pass);
  CHECK(d.seed == 2);

  // Round-trip the extension datum through JSON, re-verify, byte-compare.
  Json j = datum_to_json(d);
  AnyDatum back = datum_from_json(j);
  REQUIRE(std::holds_alternative<SpinDatum<QuadExt<RatField>>>(back));
  const auto& b = std::get<SpinDatum<QuadExt<RatField>>>(back);
  CHECK(verify_spin_datum(b).all_pass);
  CHECK(dump_document(datum_to_json(b)) == dump_document(j));

  auto secs =
      std::chrono::duration_cast<std::chrono::seconds>(std::chrono::steady_clock::now() - t0)
          .count();
  CHECK(secs < 60);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "spincalc/factor.hpp"
#include "spincalc/fields.hpp"
#include "spincalc/forms.hpp"
#include "spincalc/linalg.hpp"
#include "spincalc/numeric.hpp"
#include "spincalc/simplex.hpp"

using namespace spincalc;

TEST_CASE("integer helpers are exact") {
  CHECK(isqrt_floor(Int(0)) == 0);
  CHECK(isqrt_floor(Int(15)) == 3);
  CHECK(isqrt_floor(Int(16)) == 4);
  Int big = Int("123456789123456789");
  CHECK(isqrt_floor(big * big) == big);
  CHECK(isqrt_floor(big * big - 1) == big - 1);

  Int root;
  CHECK(is_perfect_square(Int(144), &root));
  CHECK(root == 12);
  CHECK(!is_perfect_square(Int(145)));
  CHECK(!is_perfect_square(Int(-4)));

  Rat rroot;
  CHECK(is_perfect_square(Rat(9) / 4, &rroot));
  CHECK(rroot == Rat(3) / 2);
  CHECK(!is_perfect_square(Rat(2)));

  CHECK(is_prime(Int(10007)));
  CHECK(is_prime(Int(2)));
  CHECK(!is_prime(Int(1)));
  CHECK(!is_prime(Int(1007)));  // 19 * 53
  CHECK(is_prime(Int("170141183460469231731687303715884105727")));  // 2^127 - 1

  auto f = factor_integer(Int(360));
  CHECK(f[Int(2)] == 3);
  CHECK(f[Int(3)] == 2);
  CHECK(f[Int(5)] == 1);
  CHECK(squarefree_part(Int(360)) == 10);
  CHECK(squarefree_part(Int(-4)) == -1);
  CHECK(squarefree_part(Int(1)) == 1);

  CHECK(detail::powmod(Int(3), Int(100), Int(101)) == 1);  // Fermat
}

TEST_CASE("seeded generator is deterministic and its range draw is unbiased by construction") {
  SplitMix64 a(42), b(42), c(43);
  std::vector<std::uint64_t> va, vb;
  for (int i = 0; i < 32; ++i) {
    va.push_back(a.next());
    vb.push_back(b.next());
  }
  CHECK(va == vb);
  CHECK(c.next() != va[0]);
  SplitMix64 d(7);
  for (int i = 0; i < 1000; ++i) CHECK(d.below(13) < 13);
  CHECK_THROWS_AS(d.below(0), UsageError);
}

TEST_CASE("prime-field arithmetic and square roots") {
  PrimeField f(10007);
  Fp x = f.from_int(-3);
  CHECK(x.v == 10004);
  CHECK((x + f.from_int(3)).v == 0);
  CHECK((f.from_int(5) * inverse(f.from_int(5))).v == 1);
  CHECK_THROWS_AS(inverse(f.zero()), UsageError);
  CHECK_THROWS_AS(PrimeField(1007), UsageError);   // composite
  CHECK_THROWS_AS(PrimeField(2), UsageError);      // even
  PrimeField g(7);
  CHECK_THROWS_AS(f.one() + g.one(), UsageError);  // mismatched moduli

  int squares = 0;
  for (std::uint64_t v = 1; v <= 30; ++v) {
    Fp e = f.elem(v * v);
    CHECK(legendre(e) == 1);
    Fp r = sqrt_mod(e);
    CHECK((r * r) == e);
    ++squares;
  }
  CHECK(squares == 30);
  // 10007 % 4 == 3, so -1 is a non-residue.
  CHECK(legendre(f.from_int(-1)) == -1);
  CHECK_THROWS_AS(sqrt_mod(f.from_int(-1)), UsageError);
}

TEST_CASE("quadratic-extension arithmetic") {
  RatField q;
  QuadExt<RatField> f(q, Rat(2));
  auto s = f.sqrt_d();
  CHECK((s * s) == f.from_int(2));
  auto x = f.make(Rat(1), Rat(1));            // 1 + sqrt(2)
  auto conj = f.make(Rat(1), Rat(-1));        // 1 - sqrt(2)
  CHECK((x * conj) == f.from_int(-1));        // 1 - 2
  CHECK((x / x) == f.one());
  CHECK((x * inverse(x)) == f.one());
  QuadExt<RatField> f3(q, Rat(3));
  CHECK_THROWS_AS(f.sqrt_d() + f3.sqrt_d(), UsageError);  // mismatched radicands
}

TEST_CASE("exact linear algebra: rank, kernel, solve, inverse") {
  RatField q;
  Mat<RatField> A(q, 3, 3);
  // Singular: rows 1,2 sum to row 3.
  int vals[3][3] = {{1, 2, 3}, {4, 5, 6}, {5, 7, 9}};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) A.at(r, c) = Rat(vals[r][c]);
  CHECK(rank(A) == 2);
  auto kb = kernel_basis(A);
  REQUIRE(kb.size() == 1);
  for (int r = 0; r < 3; ++r) {
    Rat acc(0);
    for (int c = 0; c < 3; ++c) acc += Rat(vals[r][c]) * kb[0][c];
    CHECK(acc == 0);
  }
  CHECK_THROWS_AS(mat_inverse(A), UsageError);

  Mat<RatField> B(q, 2, 2);
  B.at(0, 0) = Rat(2);
  B.at(0, 1) = Rat(1);
  B.at(1, 0) = Rat(7);
  B.at(1, 1) = Rat(4);
  Mat<RatField> Binv = mat_inverse(B);
  CHECK(Binv.at(0, 0) == Rat(4));
  CHECK(Binv.at(0, 1) == Rat(-1));
  CHECK(Binv.at(1, 0) == Rat(-7));
  CHECK(Binv.at(1, 1) == Rat(2));

  auto sol = mat_solve(A, {Rat(6), Rat(15), Rat(21)});
  CHECK(sol.kind == SolveKind::Affine);
  auto bad = mat_solve(A, {Rat(6), Rat(15), Rat(22)});
  CHECK(bad.kind == SolveKind::Inconsistent);
  auto uni = mat_solve(B, {Rat(1), Rat(2)});
  REQUIRE(uni.kind == SolveKind::Unique);
  CHECK(uni.particular[0] == Rat(2));
  CHECK(uni.particular[1] == Rat(-3));

  PrimeField p(10007);
  Mat<PrimeField> M(p, 2, 3);
  for (int c = 0; c < 3; ++c) {
    M.at(0, c) = p.from_int(c + 1);
    M.at(1, c) = p.from_int(2 * (c + 1));
  }
  CHECK(rank(M) == 1);
  CHECK(kernel_basis(M).size() == 2);
}

TEST_CASE("binary forms: arithmetic, division, gcd, square detection") {
  RatField q;
  auto s = bform_monomial(q, 1, 0, Rat(1));
  auto t = bform_monomial(q, 0, 1, Rat(1));
  auto st = s + t;
  auto prod = st * st * (s - t);
  CHECK(prod.degree() == 3);
  CHECK(bform_eval(prod, Rat(2), Rat(1)) == Rat(9));
  CHECK(bform_divide_exact(prod, st) == st * (s - t));
  CHECK_THROWS_AS(bform_divide_exact(prod, s + Rat(2) * t), UsageError);

  auto g = bform_gcd(st * st * s, st * (s - t));
  CHECK(bform_divide_exact(st, g).degree() == 0);  // gcd is s+t up to scalar

  auto sq = bform_sqrt_up_to_scalar(Rat(4) * st * st);
  REQUIRE(sq.has_value());
  CHECK(bform_divide_exact(st * st, *sq * *sq).degree() == 0);
  CHECK(!bform_sqrt_up_to_scalar(st * (s - t)).has_value());

  auto ds = bform_derivative_s(prod);  // d/ds (s+t)^2(s-t)
  CHECK(bform_eval(ds, Rat(1), Rat(0)) == Rat(3));
}

TEST_CASE("trivariate forms: evaluation, partials, Euler identity, line restriction") {
  RatField q;
  TForm<RatField> F(q, 5);
  F.add_term({5, 0, 0}, Rat(1));
  F.add_term({0, 5, 0}, Rat(1));
  F.add_term({0, 1, 4}, Rat(1));  // x^5 + y^5 + y z^4
  Pt3<RatField> P{Rat(1), Rat(2), Rat(3)};
  CHECK(tform_eval(F, P) == Rat(1 + 32 + 162));

  // Euler: 5F = x F_x + y F_y + z F_z.
  TForm<RatField> xFx(q, 5);
  for (auto& [e, v] : tform_partial(F, 0).c) xFx.add_term({e[0] + 1, e[1], e[2]}, v);
  TForm<RatField> yFy(q, 5);
  for (auto& [e, v] : tform_partial(F, 1).c) yFy.add_term({e[0], e[1] + 1, e[2]}, v);
  TForm<RatField> zFz(q, 5);
  for (auto& [e, v] : tform_partial(F, 2).c) zFz.add_term({e[0], e[1], e[2] + 1}, v);
  TForm<RatField> five(q, 5);
  for (auto& [e, v] : F.c) five.add_term(e, Rat(5) * v);
  CHECK((xFx + yFy + zFz).c == five.c);

  TForm<RatField> L(q, 1);
  L.add_term({1, 0, 0}, Rat(1));  // x = 0
  Pt3<RatField> L0{Rat(0), Rat(1), Rat(0)}, L1{Rat(0), Rat(0), Rat(1)};
  BForm<RatField> r = restrict_to_line(F, L, L0, L1);  // s^5 + s t^4
  CHECK(bform_eval(r, Rat(1), Rat(2)) == Rat(17));
  CHECK_THROWS_AS(restrict_to_line(F, L, L0, L0), UsageError);
  Pt3<RatField> off{Rat(1), Rat(0), Rat(0)};
  CHECK_THROWS_AS(restrict_to_line(F, L, L0, off), UsageError);

  // Chart expansion at a point: F = x y + z^2 at [0:0:1] reads 1 + u v.
  TForm<RatField> G(q, 2);
  G.add_term({1, 1, 0}, Rat(1));
  G.add_term({0, 0, 2}, Rat(1));
  Pt3<RatField> C{Rat(0), Rat(0), Rat(1)};
  Pt3<RatField> A3{Rat(1), Rat(0), Rat(0)}, B3{Rat(0), Rat(1), Rat(0)};
  UVPoly<RatField> chart = tform_chart_expand(G, C, A3, B3);
  CHECK(chart.coeff(0, 0) == Rat(1));
  CHECK(chart.coeff(1, 1) == Rat(1));
  CHECK(chart.coeff(1, 0) == Rat(0));
  CHECK(chart.coeff(0, 1) == Rat(0));

  CHECK(same_projective_point(q, Pt3<RatField>{Rat(2), Rat(4), Rat(6)},
                              Pt3<RatField>{Rat(1), Rat(2), Rat(3)}));
  CHECK(!same_projective_point(q, Pt3<RatField>{Rat(2), Rat(4), Rat(6)},
                               Pt3<RatField>{Rat(1), Rat(2), Rat(4)}));
}

TEST_CASE("binary-form factorization patterns over both coefficient fields") {
  PrimeField p(10007);
  auto s = bform_monomial(p, 1, 0, p.one());
  auto t = bform_monomial(p, 0, 1, p.one());
  auto st = s + t;
  FactorPattern pat = factor_binary(s * s * t * t * st * st);
  REQUIRE(pat.parts.size() == 3);
  for (auto& [mult, deg] : pat.parts) {
    CHECK(mult == 2);
    CHECK(deg == 1);
  }

  RatField q;
  auto sq = bform_monomial(q, 1, 0, Rat(1));
  auto tq = bform_monomial(q, 0, 1, Rat(1));
  auto irr = sq * sq + tq * tq;  // s^2 + t^2, irreducible over the rationals
  FactorPattern rp = factor_binary(irr * (sq + Rat(2) * tq));
  REQUIRE(rp.parts.size() == 2);
  CHECK(rp.parts[0] == std::pair<int, int>(1, 1));
  CHECK(rp.parts[1] == std::pair<int, int>(1, 2));
}

TEST_CASE("exact simplex: optimal, infeasible, unbounded") {
  // max 3x + 2y  s.t.  x + y == 4, x,y >= 0  ->  12 at (4, 0).
  LPResult r = lp_maximize({{Rat(1), Rat(1)}}, {Rat(4)}, {Rat(3), Rat(2)});
  REQUIRE(r.status == LPStatus::Optimal);
  CHECK(r.value == Rat(12));
  CHECK(r.x[0] == Rat(4));
  CHECK(r.x[1] == Rat(0));

  // x == -1 with x >= 0 is infeasible.
  LPResult inf = lp_maximize({{Rat(1)}}, {Rat(-1)}, {Rat(1)});
  CHECK(inf.status == LPStatus::Infeasible);

  // max x with a vacuous constraint 0 == 0 is unbounded.
  LPResult unb = lp_maximize({{Rat(0)}}, {Rat(0)}, {Rat(1)});
  CHECK(unb.status == LPStatus::Unbounded);

  // Degenerate-looking system still terminates (Bland's rule) and is exact.
  LPResult deg = lp_maximize({{Rat(1), Rat(1), Rat(1)}, {Rat(1), Rat(-1), Rat(0)}},
                             {Rat(1), Rat(0)}, {Rat(1), Rat(1), Rat(0)});
  REQUIRE(deg.status == LPStatus::Optimal);
  CHECK(deg.value == Rat(1));
}

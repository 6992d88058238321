#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "spincalc/certify.hpp"
#include "spincalc/curves.hpp"

using namespace spincalc;

TEST_CASE("theta-coefficient system: exact solution for every genus from 3 to 12") {
  for (int g = 3; g <= 12; ++g) {
    ThetaSolveReport rep = solve_theta_coefficients(g);
    CHECK(rep.g == g);
    CHECK(rep.consistent);
    CHECK(rep.unique);
    CHECK(rep.system_rank == rep.unknown_count);
    CHECK(rep.matches_expected);
    REQUIRE(rep.solution.size() == (size_t)rep.unknown_count);
    CHECK(rep.unknown_count == 4 + 2 * (g - 1));

    // (a, b, abar_0, bbar_0) = (1/4, 1/2, 1/16, 0); every abar_i_empty = 1/2
    // and every abar_j_marked = 0.
    CHECK(rep.solution[0].first == "a");
    CHECK(rep.solution[0].second == Rat(1, 4));
    CHECK(rep.solution[1].first == "b");
    CHECK(rep.solution[1].second == Rat(1, 2));
    CHECK(rep.solution[2].first == "abar_0");
    CHECK(rep.solution[2].second == Rat(1, 16));
    CHECK(rep.solution[3].first == "bbar_0");
    CHECK(rep.solution[3].second == 0);
    for (int i = 1; i <= g - 1; ++i) {
      CHECK(rep.solution[3 + i].first == "abar_" + std::to_string(i) + "_empty");
      CHECK(rep.solution[3 + i].second == Rat(1, 2));
      CHECK(rep.solution[3 + (g - 1) + i].first == "abar_" + std::to_string(i) + "_marked");
      CHECK(rep.solution[3 + (g - 1) + i].second == 0);
    }
  }
}

TEST_CASE("without the cover-pushforward equation the system has a one-parameter family") {
  for (int g : {4, 7, 12}) {
    ThetaSolveReport rep = solve_theta_coefficients(g, false);
    CHECK(rep.consistent);
    CHECK(!rep.unique);
    CHECK(rep.unknown_count - rep.system_rank == 1);
    CHECK(!rep.matches_expected);  // no unique solution to compare
  }
}

TEST_CASE("the solved coefficients reproduce the pointed theta class used downstream") {
  // theta_gn at n = 1 must agree with the catalogued theta_g1.
  for (int g : {3, 4, 8}) {
    DivisorClass a = theta_g1(g);
    DivisorClass b = theta_gn(g, 1);
    CHECK(a.coeffs == b.coeffs);
    CHECK(a.tail_bounds == b.tail_bounds);
  }
}

TEST_CASE("k3-pencil intersections vanish against the pointed theta divisor for 3 <= g <= 20") {
  for (int g = 3; g <= 20; ++g) {
    TestCurve k3 = test_curve("k3_pencil", g);
    CHECK(k3.space.kind == SpaceKind::SpinOdd);
    CHECK(k3.space.n == 1);
    CHECK(intersect(k3, theta_g1(g)) == 0);
  }
}

TEST_CASE("at genus 11 the k3 pencil is orthogonal to the full certifying quadruple") {
  TestCurve k3 = test_curve("k3_pencil", 11);
  const Space& sp = k3.space;
  CHECK(intersect(k3, theta_g1(11)) == 0);
  CHECK(intersect(k3, canonical_class(sp)) == 0);
  CHECK(intersect(k3, term_class("sigma*(slope)", sp)) == 0);
  CHECK(intersect(k3, term_class("mu*(z)", sp)) == 0);
}

TEST_CASE("test-curve catalogue: spaces, index ranges, and pairing rules") {
  TestCurve f3 = test_curve("F_i", 6, 3);
  CHECK(f3.space == Space{SpaceKind::SpinOdd, 6, 1, false});
  CHECK(test_curve("G_i", 6, 3).space == f3.space);
  CHECK(test_curve("F_0", 6).space == f3.space);
  CHECK(test_curve("G_0", 6).space == f3.space);
  CHECK_THROWS_AS(test_curve("F_i", 6, 1), UsageError);   // i ranges over 2..g-1
  CHECK_THROWS_AS(test_curve("F_i", 6, 6), UsageError);
  CHECK_THROWS_AS(test_curve("no_such_curve", 6), UsageError);

  // Pairing a curve with a class on a different space is refused.
  DivisorClass wrong = canonical_class(Space{SpaceKind::SpinOdd, 5, 1, false});
  CHECK_THROWS_AS(intersect(f3, wrong), UsageError);

  // Pairing against a partially known class is refused when the curve meets
  // a coordinate that is only bounded, not known.
  DivisorClass partial{f3.space};
  for (const auto& [b, v] : f3.vector) {
    if (v != 0) {
      partial.add_tail(b, Rat(1));
      break;
    }
  }
  CHECK_THROWS_AS(intersect(f3, partial), UsageError);
}

TEST_CASE("canonical class pairs to zero against the k3 pencil only at genus 11") {
  // The genus-11 vanishing is special; a neighboring genus must not vanish.
  TestCurve k3 = test_curve("k3_pencil", 10);
  CHECK(intersect(k3, canonical_class(k3.space)) != 0);
}

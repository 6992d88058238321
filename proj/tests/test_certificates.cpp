// Bigness certificates: threshold combinations, cone reconstructions,
// bespoke low-genus cases, the threshold scan tables, and certificate
// re-verification (including tamper detection through the JSON layer).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "spincalc/certify.hpp"
#include "spincalc/classes.hpp"
#include "spincalc/jsonio.hpp"

#include <algorithm>
#include <sstream>

using namespace spincalc;

namespace {

Space odd(int g, int n) { return Space{SpaceKind::SpinOdd, g, n, false}; }
Space even(int g, int n) { return Space{SpaceKind::SpinEven, g, n, false}; }

const Inequality& find_check(const Certificate& c, const std::string& name) {
  for (const auto& row : c.checks)
    if (row.name == name) return row;
  FAIL("missing check row: " << name);
  static Inequality dummy;
  return dummy;
}

bool has_check(const Certificate& c, const std::string& name) {
  return std::any_of(c.checks.begin(), c.checks.end(),
                     [&](const Inequality& row) { return row.name == name; });
}

} // namespace

TEST_CASE("threshold values: lambda- and psi-coefficients are exact") {
  CHECK(threshold_lambda(even(4, 9)) == Rat(977, 76));
  CHECK(threshold_psi(even(4, 9)) == Rat(16, 19));
  CHECK(threshold_lambda(odd(4, 12)) == Rat(1299, 100));
  CHECK(threshold_psi(odd(4, 12)) == Rat(23, 25));
  CHECK(threshold_lambda(odd(4, 11)) == Rat(1217, 92));
}

TEST_CASE("even (4,9): threshold certificate passes with full residual coverage") {
  Certificate c = certify_general_type(even(4, 9), true);
  CHECK(c.verdict);
  CHECK(c.claims_general_type);
  CHECK(c.lambda_coeff == Rat(977, 76));
  CHECK(c.psi_coeff == Rat(16, 19));
  CHECK(c.psi_surplus == Rat(3, 19));
  CHECK(c.residual.has_value());

  const Inequality& lam = find_check(c, "lambda-coefficient < 13");
  CHECK(lam.lhs == Rat(977, 76));
  CHECK(lam.rhs == Rat(13));
  CHECK(lam.pass);
  const Inequality& psi = find_check(c, "psi-coefficient < 1");
  CHECK(psi.lhs == Rat(16, 19));
  CHECK(psi.pass);

  // Every boundary coordinate of the residual is certified nonnegative.
  bool saw_full_coverage = false;
  for (const auto& note : c.notes)
    if (note.find("2002 of 2002") != std::string::npos) saw_full_coverage = true;
  CHECK(saw_full_coverage);
}

TEST_CASE("odd (4,12): first passing odd threshold at g = 4") {
  Certificate c = certify_general_type(odd(4, 12), true);
  CHECK(c.verdict);
  CHECK(c.lambda_coeff == Rat(1299, 100));
  CHECK(c.psi_coeff == Rat(23, 25));
  CHECK(find_check(c, "lambda-coefficient < 13").pass);
  CHECK(find_check(c, "psi-coefficient < 1").pass);
}

TEST_CASE("odd (4,11): threshold fails honestly on the lambda-coefficient") {
  Certificate c = certify_general_type(odd(4, 11), true);
  CHECK_FALSE(c.verdict);
  CHECK(c.lambda_coeff == Rat(1217, 92));
  const Inequality& lam = find_check(c, "lambda-coefficient < 13");
  CHECK(lam.lhs == Rat(1217, 92));
  CHECK_FALSE(lam.pass);
  // An honestly failing certificate is still internally consistent.
  CHECK(verify_certificate(c));
}

TEST_CASE("odd (4,9): residual coverage reports the single uncertified slot") {
  Certificate c = certify_general_type(odd(4, 9), true);
  CHECK_FALSE(c.verdict);
  bool saw = false;
  for (const auto& note : c.notes)
    if (note.find("2001 of 2002") != std::string::npos) saw = true;
  CHECK(saw);
}

TEST_CASE("threshold scan tables: first passing marked-point count") {
  // Even spaces, g = 4..7.
  const int even_first[] = {9, 7, 7, 4};
  // Odd spaces, g = 4..7.
  const int odd_first[] = {12, 11, 10, 7};
  for (int g = 4; g <= 7; ++g) {
    ScanResult se = threshold_scan(g, SpaceKind::SpinEven, 14);
    REQUIRE(se.first_pass.has_value());
    CHECK(*se.first_pass == even_first[g - 4]);
    ScanResult so = threshold_scan(g, SpaceKind::SpinOdd, 14);
    REQUIRE(so.first_pass.has_value());
    CHECK(*so.first_pass == odd_first[g - 4]);
    for (const auto& row : se.rows) CHECK(row.mechanism == "formula");
    for (const auto& row : so.rows) CHECK(row.mechanism == "formula");
  }

  // For g = 8..11 small odd n is decided by cone reconstruction instead.
  const int odd_first_high[] = {5, 4, 2, 2};
  const int even_first_high[] = {2, 1, 1, 1};
  for (int g = 8; g <= 11; ++g) {
    ScanResult so = threshold_scan(g, SpaceKind::SpinOdd, 6);
    REQUIRE(so.first_pass.has_value());
    CHECK(*so.first_pass == odd_first_high[g - 8]);
    for (const auto& row : so.rows)
      if (row.n < g) CHECK(row.mechanism == "lp-reconstruction");
    ScanResult se = threshold_scan(g, SpaceKind::SpinEven, 6);
    REQUIRE(se.first_pass.has_value());
    CHECK(*se.first_pass == even_first_high[g - 8]);
  }
}

TEST_CASE("scan rows carry the exact threshold coefficients") {
  ScanResult se = threshold_scan(5, SpaceKind::SpinEven, 8);
  REQUIRE(se.first_pass.has_value());
  CHECK(*se.first_pass == 7);
  for (const auto& row : se.rows) {
    if (row.n == 7) {
      CHECK(row.pass);
      REQUIRE(row.lambda_coeff.has_value());
      CHECK(*row.lambda_coeff == threshold_lambda(even(5, 7)));
      REQUIRE(row.psi_coeff.has_value());
      CHECK(*row.psi_coeff == threshold_psi(even(5, 7)));
    }
    if (row.n == 6) CHECK_FALSE(row.pass);
  }
}

TEST_CASE("even psi-coefficient stays below 1 for all marked-point counts") {
  // The psi-coefficient is the binding constraint that can only degrade as
  // n grows; check it never reaches 1 on even spaces far past the table.
  for (int g = 4; g <= 7; ++g) {
    Rat prev(0);
    for (int n = 2; n <= 100; ++n) {
      Rat pc = threshold_psi(even(g, n));
      CHECK(pc < Rat(1));
      CHECK(pc > prev);
      prev = pc;
    }
  }
}

TEST_CASE("cone reconstruction: exact optima for odd spaces with few points") {
  struct Expect {
    int g, n;
    std::vector<Rat> coeffs;
    Rat share;
  };
  const std::vector<Expect> passing = {
      {8, 5, {Rat(10, 7), Rat(1, 28), Rat(41, 28), Rat(2, 21), Rat(2, 3)}, Rat(2, 3)},
      {9, 4, {Rat(43, 32), Rat(3, 32), Rat(45, 32), Rat(1, 16), Rat(3, 4)}, Rat(3, 4)},
      {10, 2, {Rat(188, 149), Rat(51, 298), Rat(198, 149), Rat(2, 149), Rat(90, 149)}, Rat(90, 149)},
      {11, 2, {Rat(9, 10), Rat(31, 180), Rat(239, 180), Rat(1, 60), Rat(11, 12)}, Rat(11, 12)},
  };
  for (const auto& e : passing) {
    Reconstruction r = reconstruct_odd(e.g, e.n);
    CHECK(r.status == LPStatus::Optimal);
    CHECK(r.pass);
    CHECK(r.psi_share == e.share);
    REQUIRE(r.coefficients.size() == e.coeffs.size());
    for (std::size_t i = 0; i < e.coeffs.size(); ++i)
      CHECK(r.coefficients[i] == e.coeffs[i]);
    REQUIRE(r.generator_names.size() == 5);
    CHECK(r.generator_names[0] == "theta-pointed");
    CHECK(r.generator_names[4] == "psi-average");
  }
}

TEST_CASE("cone reconstruction: feasible but zero psi-share does not certify") {
  const std::vector<std::tuple<int, int, std::vector<Rat>>> degenerate = {
      {8, 4, {Rat(2), Rat(0), Rat(3, 2), Rat(0), Rat(0)}},
      {9, 3, {Rat(2), Rat(1, 14), Rat(10, 7), Rat(0), Rat(0)}},
      {11, 1, {Rat(2), Rat(1, 6), Rat(4, 3), Rat(0)}},
  };
  for (const auto& [g, n, coeffs] : degenerate) {
    Reconstruction r = reconstruct_odd(g, n);
    CHECK(r.status == LPStatus::Optimal);
    CHECK_FALSE(r.pass);
    CHECK(r.psi_share == Rat(0));
    REQUIRE(r.coefficients.size() == coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i)
      CHECK(r.coefficients[i] == coeffs[i]);
  }
}

TEST_CASE("cone reconstruction: infeasible slots") {
  for (auto [g, n] : {std::pair{8, 1}, {8, 2}, {8, 3}, {9, 1}, {9, 2}, {10, 1}}) {
    Reconstruction r = reconstruct_odd(g, n);
    CHECK(r.status == LPStatus::Infeasible);
    CHECK_FALSE(r.pass);
    CHECK(r.coefficients.empty());
  }
}

TEST_CASE("reconstruction certificates verify and re-verify") {
  Certificate c = certify_general_type(odd(8, 5), true);
  CHECK(c.verdict);
  CHECK(find_check(c, "reconstruction-feasible == 1").pass);
  CHECK(find_check(c, "psi-average-share > 0").pass);
  CHECK(verify_certificate(c));
}

TEST_CASE("bespoke low-genus certificates all pass and re-verify") {
  std::vector<std::string> names = bespoke_case_names();
  REQUIRE(names.size() == 4);
  for (const auto& name : names) {
    Certificate c = verify_bespoke(name);
    CHECK(c.verdict);
    CHECK(verify_certificate(c));
    for (const auto& row : c.checks) CHECK(row.pass);
  }
  CHECK(std::find(names.begin(), names.end(), "s73_plus") != names.end());
  CHECK(std::find(names.begin(), names.end(), "s84_minus") != names.end());
  CHECK(std::find(names.begin(), names.end(), "s93_minus") != names.end());
  CHECK(std::find(names.begin(), names.end(), "s111_minus") != names.end());
  CHECK_THROWS_AS(verify_bespoke("s120_plus"), UsageError);
}

TEST_CASE("s73 tangency coefficient 1/12 is the unique workable choice") {
  Certificate good = bespoke_s73_with_coeff(Rat(1, 12));
  CHECK(good.verdict);
  Certificate bad = bespoke_s73_with_coeff(Rat(1, 11));
  CHECK_FALSE(bad.verdict);
  const Inequality& row = find_check(bad, "residual[psi] >= 0");
  CHECK(row.lhs == Rat(-1, 11));
  CHECK_FALSE(row.pass);
  // Both are internally consistent records of their own computation.
  CHECK(verify_certificate(good));
  CHECK(verify_certificate(bad));
}

TEST_CASE("s111 certificate includes the pencil vanishing rows") {
  Certificate c = verify_bespoke("s111_minus");
  CHECK(c.verdict);
  CHECK(has_check(c, "k3-pencil . canonical == 0"));
  CHECK(has_check(c, "k3-pencil . theta-pointed == 0"));
  CHECK(has_check(c, "k3-pencil . sigma*(slope) == 0"));
  CHECK(has_check(c, "k3-pencil . mu*(z) == 0"));
  for (const auto& row : c.checks)
    if (row.name.rfind("k3-pencil", 0) == 0) {
      CHECK(row.lhs == Rat(0));
      CHECK(row.pass);
    }
}

TEST_CASE("tracked coordinates: formula vectors agree with the class machinery") {
  const std::vector<std::string> odd_names = {
      "theta-pointed", "mu*(z)", "sigma*(slope)", "pi*(symmetrized-logan)",
      "psi-average"};
  const std::vector<std::string> even_names = {
      "mu*(theta-null)", "sigma*(slope)", "pi*(symmetrized-logan)",
      "psi-average"};
  for (const Space& sp : {odd(4, 9), odd(5, 11), even(4, 9), even(6, 7)}) {
    const auto& names = sp.kind == SpaceKind::SpinOdd ? odd_names : even_names;
    for (const auto& name : names) {
      if (name == "pi*(symmetrized-logan)" && sp.n < sp.g) continue;
      TrackedVec formula = tracked_vector(name, sp);
      TrackedVec machine = tracked_coords(term_class(name, sp));
      CHECK(formula.lambda == machine.lambda);
      CHECK(formula.psi == machine.psi);
      CHECK(formula.alpha0 == machine.alpha0);
      CHECK(formula.beta0 == machine.beta0);
      CHECK(formula.pair0 == machine.pair0);
    }
  }
  // The weighted tangency class exists only on the even space with g = 7, n = 3.
  {
    TrackedVec f = tracked_vector("weighted-tangency-2-2-3", even(7, 3));
    TrackedVec m = tracked_coords(term_class("weighted-tangency-2-2-3", even(7, 3)));
    CHECK(f.lambda == m.lambda);
    CHECK(f.psi == m.psi);
    CHECK(f.alpha0 == m.alpha0);
    CHECK(f.beta0 == m.beta0);
    CHECK(f.pair0 == m.pair0);
    CHECK_THROWS_AS(term_class("weighted-tangency-2-2-3", even(7, 4)), UsageError);
  }

  // theta-pointed also exists below n = g.
  TrackedVec f = tracked_vector("theta-pointed", odd(8, 4));
  TrackedVec m = tracked_coords(term_class("theta-pointed", odd(8, 4)));
  CHECK(f.lambda == m.lambda);
  CHECK(f.psi == m.psi);
  CHECK(f.alpha0 == m.alpha0);
  CHECK(f.beta0 == m.beta0);
  CHECK(f.pair0 == m.pair0);
}

TEST_CASE("canonical tracked vector matches the canonical class") {
  for (const Space& sp : {odd(4, 9), even(5, 7), odd(11, 2)}) {
    TrackedVec formula = tracked_vector("canonical", sp);
    TrackedVec machine = tracked_coords(canonical_class(sp));
    CHECK(formula.lambda == machine.lambda);
    CHECK(formula.psi == machine.psi);
    CHECK(formula.alpha0 == machine.alpha0);
    CHECK(formula.beta0 == machine.beta0);
    CHECK(formula.pair0 == machine.pair0);
  }
}

TEST_CASE("certificates survive a JSON round-trip and tampering is caught") {
  Certificate c = certify_general_type(odd(4, 12), true);
  Json j = certificate_to_json(c);
  Certificate back = certificate_from_json(j);
  CHECK(back.verdict == c.verdict);
  CHECK(back.lambda_coeff == c.lambda_coeff);
  CHECK(back.checks.size() == c.checks.size());
  CHECK(verify_certificate(back));
  // Byte-stable serialization.
  CHECK(dump_document(certificate_to_json(back)) == dump_document(j));

  // Flip one recorded pass bit: re-verification must reject the document.
  Json tampered = j;
  bool flipped = false;
  for (auto& row : tampered["checks"]) {
    if (row["name"] == "lambda-coefficient < 13") {
      row["pass"] = false;
      flipped = true;
    }
  }
  REQUIRE(flipped);
  CHECK_FALSE(verify_certificate(certificate_from_json(tampered)));

  // Corrupt a stored coefficient: the re-derived combination disagrees.
  Json tampered2 = j;
  tampered2["lambda_coeff"] = rat_to_json(Rat(12));
  CHECK_FALSE(verify_certificate(certificate_from_json(tampered2)));
}

TEST_CASE("certify_general_type refuses out-of-range spaces") {
  CHECK_THROWS_AS(certify_general_type(odd(3, 5), true), UsageError);
  CHECK_THROWS_AS(certify_general_type(odd(12, 5), true), UsageError);
  CHECK_THROWS_AS(certify_general_type(odd(4, 0), true), UsageError);
}

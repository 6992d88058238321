#pragma once

#include "spincalc/classes.hpp"
#include "spincalc/linalg.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace spincalc {

/// A one-parameter test family with its known intersection numbers against
/// the basis.  Unlisted pairings are zero.
struct TestCurve {
  std::string name;
  Space space;
  std::map<BasisClass, Rat> vector;
};

/// Catalogue: F_i / G_i (2 <= i <= g-1), F_0, G_0, k3_pencil; all on the
/// odd spin space with one marked point.
TestCurve test_curve(const std::string& name, int g, int i = 0);

/// Exact pairing.  Pairing a partially known class (nonempty tail bounds)
/// against a curve meeting a bounded coordinate is an error.
Rat intersect(const TestCurve& curve, const DivisorClass& cls);

/// Result of assembling and solving the theta-coefficient linear system.
struct ThetaSolveReport {
  int g = 0;
  int unknown_count = 0;
  int system_rank = 0;
  bool consistent = false;
  bool unique = false;
  bool matches_expected = false;
  /// Solution entries in unknown order: a, b, abar_0, bbar_0,
  /// abar_{1..g-1}_empty, abar_{1..g-1}_marked.
  std::vector<std::pair<std::string, Rat>> solution;
};

/// Assemble the linear system determining the coefficients of the pointed
/// theta divisor from the test-curve pairings, the elliptic-pencil pullback
/// relations, and the cover pushforward relation; solve exactly and compare
/// with the expected closed form.  `include_pushforward = false` drops the
/// pushforward relation (the system then underdetermines β̄₀).
ThetaSolveReport solve_theta_coefficients(int g, bool include_pushforward = true);

/// Solution kind of the assembled system (exposed for rank experiments).
LinSolve<RatField> theta_system_solution(int g, bool include_pushforward);

}  // namespace spincalc

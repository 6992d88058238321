#include "spincalc/curves.hpp"

namespace spincalc {

namespace {

Space odd_pointed(int g) { return Space{SpaceKind::SpinOdd, g, 1, false}; }

}  // namespace

TestCurve test_curve(const std::string& name, int g, int i) {
  if (g < 3) throw UsageError("test curves require genus at least 3");
  Space space = odd_pointed(g);
  TestCurve out;
  out.name = name;
  out.space = space;
  if (name == "F_i") {
    if (i < 2 || i > g - 1) throw UsageError("F_i requires 2 <= i <= g-1");
    out.vector[require_class(space, Tag::Alpha, g - i, 1u)] = Rat(2 - 2 * i);
    return out;
  }
  if (name == "G_i") {
    if (i < 2 || i > g - 1) throw UsageError("G_i requires 2 <= i <= g-1");
    out.vector[require_class(space, Tag::Alpha, i, 0u)] = Rat(2 - 2 * i);
    return out;
  }
  if (name == "F_0") {
    out.vector[BasisClass{Tag::Lambda, 0, 0}] = Rat(1);
    out.vector[require_class(space, Tag::Alpha, 1, 0u)] = Rat(-1);
    out.vector[BasisClass{Tag::AlphaIrr, 0, 0}] = Rat(12);
    return out;  // β₀ pairing is zero
  }
  if (name == "G_0") {
    out.vector[BasisClass{Tag::Lambda, 0, 0}] = Rat(3);
    out.vector[require_class(space, Tag::Beta, 1, 0u)] = Rat(-3);
    out.vector[BasisClass{Tag::AlphaIrr, 0, 0}] = Rat(12);
    out.vector[BasisClass{Tag::BetaIrr, 0, 0}] = Rat(12);
    return out;
  }
  if (name == "k3_pencil") {
    out.vector[BasisClass{Tag::Lambda, 0, 0}] = Rat(g + 1);
    out.vector[BasisClass{Tag::Psi, 1, 0}] = Rat(2);
    out.vector[BasisClass{Tag::AlphaIrr, 0, 0}] = Rat(4 * g + 20);
    out.vector[BasisClass{Tag::BetaIrr, 0, 0}] = Rat(g - 1);
    return out;
  }
  throw UsageError("unknown test curve: " + name);
}

Rat intersect(const TestCurve& curve, const DivisorClass& cls) {
  if (!(curve.space.kind == cls.space.kind && curve.space.g == cls.space.g && curve.space.n == cls.space.n))
    throw UsageError("curve and class live on different spaces");
  for (auto& [b, L] : cls.tail_bounds) {
    auto it = curve.vector.find(b);
    if (it != curve.vector.end() && it->second != 0)
      throw UsageError("partially known class paired against a curve meeting a bounded coordinate");
  }
  Rat total = 0;
  for (auto& [b, v] : curve.vector) total += v * cls.get(b);
  return total;
}

LinSolve<RatField> theta_system_solution(int g, bool include_pushforward) {
  if (g < 3) throw UsageError("the theta system requires genus at least 3");
  // Unknowns: a, b, abar_0, bbar_0, abar_{1..g-1}_empty, abar_{1..g-1}_marked.
  const int m = g - 1;
  const int cols = 4 + 2 * m;
  auto col_a = 0, col_b = 1, col_a0 = 2, col_b0 = 3;
  auto col_empty = [&](int i) { return 4 + (i - 1); };
  auto col_marked = [&](int i) { return 4 + m + (i - 1); };
  std::vector<std::vector<Rat>> rows;
  std::vector<Rat> rhs;
  auto add_row = [&](std::vector<std::pair<int, Rat>> entries, Rat value) {
    std::vector<Rat> row(cols, Rat(0));
    for (auto& [c, v] : entries) row[c] += v;
    rows.push_back(std::move(row));
    rhs.push_back(std::move(value));
  };
  // Axiom inputs for the λ and ψ coefficients.
  add_row({{col_a, Rat(1)}}, Rat(1, 4));
  add_row({{col_b, Rat(1)}}, Rat(1, 2));
  // F_i pairings vanish: (2i-2)·abar_{g-i}_marked = 0.
  for (int i = 2; i <= g - 1; ++i) add_row({{col_marked(g - i), Rat(2 * i - 2)}}, Rat(0));
  // G_i pairings equal i-1: (2i-2)·abar_i_empty = i-1.
  for (int i = 2; i <= g - 1; ++i) add_row({{col_empty(i), Rat(2 * i - 2)}}, Rat(i - 1));
  // F_0 disjointness: a - 12·abar_0 + abar_1_empty = 0.
  add_row({{col_a, Rat(1)}, {col_a0, Rat(-12)}, {col_empty(1), Rat(1)}}, Rat(0));
  // G_0 disjointness: 3a - 12·abar_0 - 12·bbar_0 + 3·abar_{g-1}_marked = 0.
  add_row({{col_a, Rat(3)}, {col_a0, Rat(-12)}, {col_b0, Rat(-12)}, {col_marked(g - 1), Rat(3)}}, Rat(0));
  // Elliptic-pencil pullback vanishing, coefficient of ψ_y then of δ_{0:yq}:
  // a + b - 12·abar_0 + abar_1_marked = 0;  -a + 12·abar_0 - abar_1_empty = 0.
  add_row({{col_a, Rat(1)}, {col_b, Rat(1)}, {col_a0, Rat(-12)}, {col_marked(1), Rat(1)}}, Rat(0));
  add_row({{col_a, Rat(-1)}, {col_a0, Rat(12)}, {col_empty(1), Rat(-1)}}, Rat(0));
  // Cover pushforward: 2^(2g-2)·abar_0 + 2^(g-2)(2^(g-1)-1)·bbar_0 = 2^(2g-6).
  if (include_pushforward) {
    Rat ca = Rat(boost::multiprecision::pow(Int(2), 2 * g - 2));
    Rat cb = Rat(boost::multiprecision::pow(Int(2), g - 2) * (boost::multiprecision::pow(Int(2), g - 1) - 1));
    add_row({{col_a0, ca}, {col_b0, cb}}, Rat(boost::multiprecision::pow(Int(2), 2 * g - 6)));
  }
  RatField F;
  Mat<RatField> A(F, (int)rows.size(), cols);
  for (int r = 0; r < (int)rows.size(); ++r)
    for (int c = 0; c < cols; ++c) A.at(r, c) = rows[r][c];
  return mat_solve(A, rhs);
}

ThetaSolveReport solve_theta_coefficients(int g, bool include_pushforward) {
  auto sol = theta_system_solution(g, include_pushforward);
  ThetaSolveReport rep;
  rep.g = g;
  const int m = g - 1;
  rep.unknown_count = 4 + 2 * m;
  rep.system_rank = sol.rank;
  rep.consistent = sol.kind != SolveKind::Inconsistent;
  rep.unique = sol.kind == SolveKind::Unique;
  if (rep.consistent) {
    auto& x = sol.particular;
    rep.solution.emplace_back("a", x[0]);
    rep.solution.emplace_back("b", x[1]);
    rep.solution.emplace_back("abar_0", x[2]);
    rep.solution.emplace_back("bbar_0", x[3]);
    for (int i = 1; i <= m; ++i) rep.solution.emplace_back("abar_" + std::to_string(i) + "_empty", x[4 + i - 1]);
    for (int i = 1; i <= m; ++i) rep.solution.emplace_back("abar_" + std::to_string(i) + "_marked", x[4 + m + i - 1]);
    if (rep.unique) {
      bool ok = x[0] == Rat(1, 4) && x[1] == Rat(1, 2) && x[2] == Rat(1, 16) && x[3] == 0;
      for (int i = 1; i <= m; ++i) ok = ok && x[4 + i - 1] == Rat(1, 2) && x[4 + m + i - 1] == 0;
      rep.matches_expected = ok;
    }
  }
  return rep;
}

}  // namespace spincalc

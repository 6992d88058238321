#pragma once

#include "spincalc/numeric.hpp"

#include <vector>

namespace spincalc {

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPResult {
  LPStatus status = LPStatus::Infeasible;
  Rat value;            // optimal objective value (valid when status == Optimal)
  std::vector<Rat> x;   // an optimal point (valid when status == Optimal)
};

// Maximize c.x subject to A x == b and x >= 0, over exact rationals.
//
// Two-phase tableau simplex with Bland's entering/leaving rule, so the
// iteration provably terminates; every pivot is exact, so the reported
// optimum and optimizer are exact.  A has one inner vector per constraint
// row; rows of any sign are accepted (they are normalized internally).
LPResult lp_maximize(const std::vector<std::vector<Rat>>& A,
                     const std::vector<Rat>& b,
                     const std::vector<Rat>& c);

}  // namespace spincalc

#include "spincalc/simplex.hpp"

#include <cstddef>
#include <stdexcept>

namespace spincalc {

namespace {

// Tableau layout: rows 0..m-1 hold the constraints (last column is the
// right-hand side), basis[i] is the variable index basic in row i.  The
// objective row is kept separately as reduced costs `z` plus offset.

struct Tableau {
  std::size_t m = 0, n = 0;            // constraint rows, variable columns
  std::vector<std::vector<Rat>> row;   // m rows, each n+1 wide (rhs last)
  std::vector<std::size_t> basis;      // size m

  Rat& at(std::size_t i, std::size_t j) { return row[i][j]; }
  Rat& rhs(std::size_t i) { return row[i][n]; }

  void pivot(std::size_t r, std::size_t col, std::vector<Rat>& z) {
    const Rat piv = row[r][col];
    if (piv == 0) throw std::logic_error("simplex: zero pivot");
    for (auto& v : row[r]) v /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r) continue;
      const Rat f = row[i][col];
      if (f == 0) continue;
      for (std::size_t j = 0; j <= n; ++j) row[i][j] -= f * row[r][j];
    }
    const Rat f = z[col];
    if (f != 0) {
      for (std::size_t j = 0; j <= n; ++j) z[j] -= f * row[r][j];
    }
    basis[r] = col;
  }
};

// Runs simplex iterations on the tableau until the reduced-cost row z has
// no positive entry (optimal) or an improving column has no blocking row
// (unbounded).  z has n+1 entries; z[n] is minus the current objective.
LPStatus iterate(Tableau& t, std::vector<Rat>& z) {
  for (;;) {
    // Bland: entering = smallest-index column with positive reduced cost.
    std::size_t enter = t.n;
    for (std::size_t j = 0; j < t.n; ++j) {
      if (z[j] > 0) { enter = j; break; }
    }
    if (enter == t.n) return LPStatus::Optimal;

    // Ratio test; ties broken by smallest basic variable index (Bland).
    std::size_t leave = t.m;
    Rat best;
    for (std::size_t i = 0; i < t.m; ++i) {
      if (t.at(i, enter) <= 0) continue;
      Rat ratio = t.rhs(i) / t.at(i, enter);
      if (leave == t.m || ratio < best ||
          (ratio == best && t.basis[i] < t.basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == t.m) return LPStatus::Unbounded;
    t.pivot(leave, enter, z);
  }
}

}  // namespace

LPResult lp_maximize(const std::vector<std::vector<Rat>>& A,
                     const std::vector<Rat>& b,
                     const std::vector<Rat>& c) {
  const std::size_t m = A.size();
  const std::size_t n = c.size();
  if (b.size() != m) throw std::invalid_argument("lp_maximize: |b| != rows(A)");
  for (const auto& r : A) {
    if (r.size() != n) throw std::invalid_argument("lp_maximize: ragged A");
  }

  if (m == 0) {
    // No constraints: x = 0 is optimal unless some objective entry is
    // positive, in which case that coordinate can grow without bound.
    for (const auto& cj : c) {
      if (cj > 0) return {LPStatus::Unbounded, Rat(0), {}};
    }
    return {LPStatus::Optimal, Rat(0), std::vector<Rat>(n, Rat(0))};
  }

  // Phase 1: variables 0..n-1 original, n..n+m-1 artificial.
  Tableau t;
  t.m = m;
  t.n = n + m;
  t.row.assign(m, std::vector<Rat>(t.n + 1, Rat(0)));
  t.basis.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const bool flip = b[i] < 0;
    for (std::size_t j = 0; j < n; ++j) t.at(i, j) = flip ? -A[i][j] : A[i][j];
    t.rhs(i) = flip ? -b[i] : b[i];
    t.at(i, n + i) = 1;
    t.basis[i] = n + i;
  }

  // Maximize -(sum of artificials): reduced costs start as the column sums
  // of the constraint rows over the original variables.
  std::vector<Rat> z(t.n + 1, Rat(0));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) z[j] += t.at(i, j);
  }
  for (std::size_t i = 0; i < m; ++i) z[t.n] += t.rhs(i);

  if (iterate(t, z) != LPStatus::Optimal) {
    throw std::logic_error("simplex: phase 1 cannot be unbounded");
  }
  // Phase-1 objective = -(sum artificials) = z[t.n] - (initial offset)...
  // simpler: feasible iff every artificial has value 0.
  for (std::size_t i = 0; i < m; ++i) {
    if (t.basis[i] >= n && t.rhs(i) != 0) {
      return {LPStatus::Infeasible, Rat(0), {}};
    }
  }

  // Drive remaining zero-valued artificials out of the basis; a row with no
  // original-variable entry is a redundant constraint and is dropped.
  for (std::size_t i = 0; i < t.m;) {
    if (t.basis[i] < n) { ++i; continue; }
    std::size_t col = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (t.at(i, j) != 0) { col = j; break; }
    }
    if (col < n) {
      t.pivot(i, col, z);
      ++i;
    } else {
      t.row.erase(t.row.begin() + static_cast<std::ptrdiff_t>(i));
      t.basis.erase(t.basis.begin() + static_cast<std::ptrdiff_t>(i));
      --t.m;
    }
  }

  // Phase 2: drop artificial columns, install the real objective.
  for (auto& r : t.row) {
    r.erase(r.begin() + static_cast<std::ptrdiff_t>(n), r.end() - 1);
  }
  t.n = n;
  z.assign(n + 1, Rat(0));
  for (std::size_t j = 0; j < n; ++j) z[j] = c[j];
  for (std::size_t i = 0; i < t.m; ++i) {
    const Rat f = z[t.basis[i]];
    if (f == 0) continue;
    for (std::size_t j = 0; j <= n; ++j) z[j] -= f * t.row[i][j];
  }

  const LPStatus st = iterate(t, z);
  if (st == LPStatus::Unbounded) return {LPStatus::Unbounded, Rat(0), {}};

  LPResult res;
  res.status = LPStatus::Optimal;
  res.x.assign(n, Rat(0));
  for (std::size_t i = 0; i < t.m; ++i) res.x[t.basis[i]] = t.rhs(i);
  res.value = Rat(0);
  for (std::size_t j = 0; j < n; ++j) res.value += c[j] * res.x[j];
  return res;
}

}  // namespace spincalc

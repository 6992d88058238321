#pragma once

#include "spincalc/fields.hpp"

#include <optional>
#include <vector>

namespace spincalc {

template <class K>
struct Mat {
  using E = typename K::Elem;
  K field;
  int rows = 0, cols = 0;
  std::vector<E> a;

  Mat() = default;
  Mat(K f, int r, int c) : field(f), rows(r), cols(c), a((size_t)r * c, f.zero()) {}

  E& at(int r, int c) { return a[(size_t)r * cols + c]; }
  const E& at(int r, int c) const { return a[(size_t)r * cols + c]; }
};

enum class SolveKind { Unique, Affine, Inconsistent };

template <class K>
struct LinSolve {
  using E = typename K::Elem;
  SolveKind kind = SolveKind::Inconsistent;
  int rank = 0;
  std::vector<E> particular;        // one solution (empty when inconsistent)
  std::vector<std::vector<E>> kernel;  // basis of the homogeneous solutions
};

namespace detail {

/// In-place reduced row echelon form.  Pivot choice is pinned for
/// reproducibility: for each column, the first row (top to bottom) with a
/// nonzero entry becomes the pivot.  Returns pivot column per pivot row.
template <class K>
std::vector<int> rref(Mat<K>& m, std::vector<typename K::Elem>* rhs) {
  const K& f = m.field;
  std::vector<int> pivot_cols;
  int row = 0;
  for (int col = 0; col < m.cols && row < m.rows; ++col) {
    int pr = -1;
    for (int r = row; r < m.rows; ++r)
      if (!f.is_zero(m.at(r, col))) {
        pr = r;
        break;
      }
    if (pr < 0) continue;
    if (pr != row) {
      for (int c = 0; c < m.cols; ++c) std::swap(m.at(pr, c), m.at(row, c));
      if (rhs) std::swap((*rhs)[pr], (*rhs)[row]);
    }
    auto inv = f.one() / m.at(row, col);
    for (int c = col; c < m.cols; ++c) m.at(row, c) *= inv;
    if (rhs) (*rhs)[row] *= inv;
    for (int r = 0; r < m.rows; ++r) {
      if (r == row || f.is_zero(m.at(r, col))) continue;
      auto factor = m.at(r, col);
      for (int c = col; c < m.cols; ++c) m.at(r, c) -= factor * m.at(row, c);
      if (rhs) (*rhs)[r] -= factor * (*rhs)[row];
    }
    pivot_cols.push_back(col);
    ++row;
  }
  return pivot_cols;
}

}  // namespace detail

template <class K>
int rank(Mat<K> m) {
  return (int)detail::rref(m, nullptr).size();
}

/// Kernel basis in the standard free-variable order: one vector per non-pivot
/// column, that column's coordinate set to one.
template <class K>
std::vector<std::vector<typename K::Elem>> kernel_basis(Mat<K> m) {
  const K& f = m.field;
  auto pivots = detail::rref(m, nullptr);
  std::vector<bool> is_pivot(m.cols, false);
  for (int c : pivots) is_pivot[c] = true;
  std::vector<std::vector<typename K::Elem>> basis;
  for (int fc = 0; fc < m.cols; ++fc) {
    if (is_pivot[fc]) continue;
    std::vector<typename K::Elem> v(m.cols, f.zero());
    v[fc] = f.one();
    for (size_t pr = 0; pr < pivots.size(); ++pr) v[pivots[pr]] = -m.at((int)pr, fc);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Solve A x = b exactly.  Every produced solution is re-verified by
/// substitution before returning; with exact arithmetic this is cheap and
/// turns any internal slip into a loud failure.
template <class K>
LinSolve<K> mat_solve(const Mat<K>& A, const std::vector<typename K::Elem>& b) {
  if ((int)b.size() != A.rows) throw UsageError("mat_solve: rhs size mismatch");
  const K& f = A.field;
  Mat<K> m = A;
  auto rhs = b;
  auto pivots = detail::rref(m, &rhs);

  LinSolve<K> out;
  out.rank = (int)pivots.size();
  for (int r = out.rank; r < m.rows; ++r)
    if (!f.is_zero(rhs[r])) {
      out.kind = SolveKind::Inconsistent;
      return out;
    }

  out.particular.assign(m.cols, f.zero());
  for (size_t pr = 0; pr < pivots.size(); ++pr) out.particular[pivots[pr]] = rhs[pr];
  std::vector<bool> is_pivot(m.cols, false);
  for (int c : pivots) is_pivot[c] = true;
  for (int fc = 0; fc < m.cols; ++fc) {
    if (is_pivot[fc]) continue;
    std::vector<typename K::Elem> v(m.cols, f.zero());
    v[fc] = f.one();
    for (size_t pr = 0; pr < pivots.size(); ++pr) v[pivots[pr]] = -m.at((int)pr, fc);
    out.kernel.push_back(std::move(v));
  }
  out.kind = out.kernel.empty() ? SolveKind::Unique : SolveKind::Affine;

  auto check = [&](const std::vector<typename K::Elem>& x, const std::vector<typename K::Elem>& want) {
    for (int r = 0; r < A.rows; ++r) {
      auto acc = f.zero();
      for (int c = 0; c < A.cols; ++c) acc += A.at(r, c) * x[c];
      if (!(acc == want[r])) throw std::logic_error("mat_solve: solution failed re-verification");
    }
  };
  check(out.particular, b);
  std::vector<typename K::Elem> zero(A.rows, f.zero());
  for (auto& v : out.kernel) check(v, zero);
  return out;
}

template <class K>
Mat<K> mat_inverse(const Mat<K>& A) {
  if (A.rows != A.cols) throw UsageError("mat_inverse: matrix not square");
  const K& f = A.field;
  Mat<K> m(f, A.rows, 2 * A.cols);
  for (int r = 0; r < A.rows; ++r) {
    for (int c = 0; c < A.cols; ++c) m.at(r, c) = A.at(r, c);
    m.at(r, A.cols + r) = f.one();
  }
  auto pivots = detail::rref(m, nullptr);
  // The augmented block [A | I] always has full row rank; A is invertible
  // exactly when every pivot lands in the left block.
  if ((int)pivots.size() != A.rows || pivots.back() >= A.cols)
    throw UsageError("mat_inverse: matrix is singular");
  Mat<K> inv(f, A.rows, A.cols);
  for (int r = 0; r < A.rows; ++r)
    for (int c = 0; c < A.cols; ++c) inv.at(r, c) = m.at(r, A.cols + c);
  return inv;
}

}  // namespace spincalc

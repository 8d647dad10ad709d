#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "intrank/approx.hpp"
#include "intrank/matrix.hpp"

namespace intrank {

// ---------------------------------------------------------------------------
// Generic exact field elimination (works for Rational and QuadExt entries).
// Pivot choice is the first nonzero entry in row-major order, which keeps
// every run reproducible.
// ---------------------------------------------------------------------------

template <class F>
struct Echelon {
  Mat<F> reduced;                      // reduced row echelon form
  std::vector<std::size_t> pivot_cols; // one per pivot row, ascending
  std::vector<std::size_t> pivot_rows; // original row carrying each pivot
  std::size_t rank = 0;
};

template <class F>
Echelon<F> field_echelon(Mat<F> A) {
  Echelon<F> out;
  const std::size_t m = A.rows(), n = A.cols();
  std::vector<std::size_t> origin(m);
  for (std::size_t i = 0; i < m; ++i) origin[i] = i;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    std::size_t piv = m;
    for (std::size_t i = r; i < m; ++i) {
      if (!(A(i, c) == F(0))) {
        piv = i;
        break;
      }
    }
    if (piv == m) continue;
    if (piv != r) {
      for (std::size_t j = 0; j < n; ++j) std::swap(A(piv, j), A(r, j));
      std::swap(origin[piv], origin[r]);
    }
    F inv = F(1) / A(r, c);
    for (std::size_t j = c; j < n; ++j) A(r, j) = A(r, j) * inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || A(i, c) == F(0)) continue;
      F f = A(i, c);
      for (std::size_t j = c; j < n; ++j) A(i, j) = A(i, j) - f * A(r, j);
    }
    out.pivot_cols.push_back(c);
    out.pivot_rows.push_back(origin[r]);
    ++r;
  }
  out.rank = r;
  out.reduced = std::move(A);
  return out;
}

template <class F>
std::size_t rank_field(const Mat<F>& A) {
  return field_echelon(A).rank;
}

template <class F>
F det_field(const Mat<F>& A) {
  if (A.rows() != A.cols()) fail(ErrorKind::NotSquare, "det of non-square matrix");
  Mat<F> M = A;
  const std::size_t n = M.rows();
  F det = F(1);
  int swaps = 0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = n;
    for (std::size_t i = c; i < n; ++i) {
      if (!(M(i, c) == F(0))) {
        piv = i;
        break;
      }
    }
    if (piv == n) return F(0);
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(M(piv, j), M(c, j));
      ++swaps;
    }
    det = det * M(c, c);
    F inv = F(1) / M(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (M(i, c) == F(0)) continue;
      F f = M(i, c) * inv;
      for (std::size_t j = c; j < n; ++j) M(i, j) = M(i, j) - f * M(c, j);
    }
  }
  return (swaps % 2) ? -det : det;
}

// Kernel basis from the reduced echelon form (free-variable parametrization).
template <class F>
std::vector<std::vector<F>> elimination_kernel(const Mat<F>& A) {
  Echelon<F> e = field_echelon(A);
  const std::size_t n = A.cols();
  std::vector<bool> is_pivot(n, false);
  for (std::size_t c : e.pivot_cols) is_pivot[c] = true;
  std::vector<std::vector<F>> basis;
  for (std::size_t fc = 0; fc < n; ++fc) {
    if (is_pivot[fc]) continue;
    std::vector<F> v(n, F(0));
    v[fc] = F(1);
    for (std::size_t r = 0; r < e.pivot_cols.size(); ++r)
      v[e.pivot_cols[r]] = -e.reduced(r, fc);
    basis.push_back(std::move(v));
  }
  return basis;
}

template <class F>
bool in_span(const std::vector<std::vector<F>>& span_vecs, const std::vector<F>& v) {
  if (span_vecs.empty()) {
    for (const F& x : v)
      if (!(x == F(0))) return false;
    return true;
  }
  const std::size_t n = v.size();
  Mat<F> A(span_vecs.size(), n), B(span_vecs.size() + 1, n);
  for (std::size_t i = 0; i < span_vecs.size(); ++i)
    for (std::size_t j = 0; j < n; ++j) A(i, j) = B(i, j) = span_vecs[i][j];
  for (std::size_t j = 0; j < n; ++j) B(span_vecs.size(), j) = v[j];
  return rank_field(A) == rank_field(B);
}

template <class F>
bool spans_equal(const std::vector<std::vector<F>>& a,
                 const std::vector<std::vector<F>>& b) {
  for (const auto& v : b)
    if (!in_span(a, v)) return false;
  for (const auto& v : a)
    if (!in_span(b, v)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Fraction-free (Bareiss) rank and determinant over Q.  Rows are scaled to
// integers first; the elimination itself stays in Z.
// ---------------------------------------------------------------------------

std::size_t rank_bareiss(const RationalMatrix& A);
Rational det_bareiss(const RationalMatrix& A);

// Default entry points: Bareiss over Q, field elimination over Q(sqrt d).
inline std::size_t rank(const RationalMatrix& A) { return rank_bareiss(A); }
inline std::size_t rank(const QuadMatrix& A) { return rank_field(A); }
inline Rational det(const RationalMatrix& A) { return det_bareiss(A); }
inline QuadExt det(const QuadMatrix& A) { return det_field(A); }

// ---------------------------------------------------------------------------
// Kernel generators through maximal minors.
// ---------------------------------------------------------------------------

// Signed-minor kernel vector: rows I (|I| = s), columns J (|J| = s + 1,
// strictly increasing); entry at J[l-1] is (-1)^l det(A with columns J minus
// J[l-1], rows I).  Lies in ker(A) whenever rank(A) <= s.
template <class F>
std::vector<F> minor_kernel_vector(const Mat<F>& A, const std::vector<std::size_t>& I,
                                   const std::vector<std::size_t>& J) {
  internal_check(J.size() == I.size() + 1, "minor vector shape");
  std::vector<F> v(A.cols(), F(0));
  for (std::size_t l = 0; l < J.size(); ++l) {
    std::vector<std::size_t> cols;
    cols.reserve(I.size());
    for (std::size_t t = 0; t < J.size(); ++t)
      if (t != l) cols.push_back(J[t]);
    F d = det_field(A.submatrix(I, cols));
    v[J[l]] = ((l + 1) % 2 == 0) ? d : -d;  // (-1)^l with l starting at 1
  }
  return v;
}

// The maximal-minor generating family of ker(A) at level s = max(k, rank(A)):
// for k == rows(A): all column (k+1)-subsets (rows fixed);
// otherwise: all (row s-subset, column (s+1)-subset) pairs.
// Requires cols > rank(A) >= k (or rank == k == rows for the first form).
template <class F>
std::vector<std::vector<F>> kernel_generators(const Mat<F>& A, std::size_t k);

// enumerate strictly increasing index subsets, lexicographic
std::vector<std::vector<std::size_t>> index_subsets(std::size_t n, std::size_t k);

// ---------------------------------------------------------------------------
// Linear systems over Q.
// ---------------------------------------------------------------------------

struct LinearSystem {
  RationalMatrix A;           // may have zero rows (no constraints)
  std::vector<Rational> rhs;  // size == A.rows()

  std::size_t vars() const { return A.cols(); }
  static LinearSystem empty(std::size_t nvars) {
    return LinearSystem{RationalMatrix(0, nvars), {}};
  }
  void add_equation(const std::vector<Rational>& coeffs, const Rational& b);
};

struct SolveResult {
  bool feasible = false;
  std::vector<Rational> particular;           // one solution, when feasible
  std::vector<std::vector<Rational>> kernel;  // basis of the homogeneous part
};

SolveResult solve(const LinearSystem& sys);

bool satisfies(const LinearSystem& sys, const std::vector<Rational>& x);
bool satisfies(const LinearSystem& sys, const std::vector<QuadExt>& x);

// Rational solution of a rational system close to a (possibly irrational)
// exact solution, constrained to a box.  Degenerate box components become
// extra equations.  Throws BoxTooTight when the denominator schedule runs
// out, WitnessInvalid when `point` does not actually solve the system.
std::vector<Rational> rational_solution_near(
    const LinearSystem& sys, const std::vector<QuadExt>& point,
    const std::vector<RatInterval>& box,
    int budget_exponent = default_precision_budget());

// ---------------------------------------------------------------------------

template <class F>
std::vector<std::vector<F>> kernel_generators(const Mat<F>& A, std::size_t k) {
  const std::size_t m = A.rows(), n = A.cols();
  if (k == 0) fail(ErrorKind::RankPreconditionViolated, "k must be positive");
  const std::size_t r = rank_field(A);
  if (k == m) {
    if (!(n > m && r == k))
      fail(ErrorKind::RankPreconditionViolated,
           "need rank == rows < cols for the row-complete form");
  } else if (!(n > r && r >= k)) {
    fail(ErrorKind::RankPreconditionViolated, "need cols > rank >= k");
  }
  const std::size_t s = std::max(k, r);
  std::vector<std::vector<F>> out;
  std::vector<std::size_t> all_rows(m);
  for (std::size_t i = 0; i < m; ++i) all_rows[i] = i;
  auto row_sets = (k == m) ? std::vector<std::vector<std::size_t>>{all_rows}
                           : index_subsets(m, s);
  auto col_sets = index_subsets(n, s + 1);
  for (const auto& I : row_sets) {
    for (const auto& J : col_sets) {
      auto v = minor_kernel_vector(A, I, J);
      bool zero = true;
      for (const F& x : v)
        if (!(x == F(0))) {
          zero = false;
          break;
        }
      if (!zero) out.push_back(std::move(v));
    }
  }
  return out;
}

}  // namespace intrank

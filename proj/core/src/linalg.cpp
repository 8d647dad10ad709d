#include "intrank/linalg.hpp"

#include <algorithm>

namespace intrank {

std::vector<std::vector<std::size_t>> index_subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  if (k > n) return out;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    out.push_back(idx);
    // next combination
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (idx[i] != i + n - k) {
        ++idx[i];
        for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
        break;
      }
      if (i == 0) return out;
    }
    if (k == 0) return out;
  }
}

namespace {

// Row-scaled integer copy of A; scales[i] is the positive factor applied to
// row i (the lcm of its denominators).
Mat<Integer> to_integer_rows(const RationalMatrix& A, std::vector<Integer>& scales) {
  Mat<Integer> Z(A.rows(), A.cols(), Integer(0));
  scales.assign(A.rows(), Integer(1));
  for (std::size_t i = 0; i < A.rows(); ++i) {
    Integer l(1);
    for (std::size_t j = 0; j < A.cols(); ++j)
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), denom(A(i, j)).get_mpz_t());
    scales[i] = l;
    for (std::size_t j = 0; j < A.cols(); ++j) {
      Integer t = numer(A(i, j)) * (l / denom(A(i, j)));
      Z(i, j) = t;
    }
  }
  return Z;
}

// Bareiss fraction-free elimination on an integer matrix.  Returns rank;
// when `det_out` is nonnull the matrix must be square and the determinant of
// the scaled matrix is written there (sign of row swaps included).
std::size_t bareiss(Mat<Integer> M, Integer* det_out) {
  const std::size_t m = M.rows(), n = M.cols();
  Integer prev(1);
  std::size_t r = 0;
  int swaps = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    std::size_t piv = m;
    for (std::size_t i = r; i < m; ++i) {
      if (M(i, c) != 0) {
        piv = i;
        break;
      }
    }
    if (piv == m) {
      if (det_out) {
        *det_out = 0;
        return r;
      }
      continue;
    }
    if (piv != r) {
      for (std::size_t j = 0; j < n; ++j) std::swap(M(piv, j), M(r, j));
      ++swaps;
    }
    for (std::size_t i = r + 1; i < m; ++i) {
      for (std::size_t j = c + 1; j < n; ++j) {
        Integer t = M(i, j) * M(r, c) - M(i, c) * M(r, j);
        mpz_divexact(M(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      M(i, c) = 0;
    }
    prev = M(r, c);
    ++r;
  }
  if (det_out) {
    if (r < m) {
      *det_out = 0;
    } else {
      *det_out = (swaps % 2) ? Integer(-prev) : prev;
    }
  }
  return r;
}

}  // namespace

std::size_t rank_bareiss(const RationalMatrix& A) {
  if (A.rows() == 0 || A.cols() == 0) return 0;
  std::vector<Integer> scales;
  Mat<Integer> Z = to_integer_rows(A, scales);
  return bareiss(std::move(Z), nullptr);
}

Rational det_bareiss(const RationalMatrix& A) {
  if (A.rows() != A.cols()) fail(ErrorKind::NotSquare, "det of non-square matrix");
  if (A.rows() == 0) return Rational(1);
  std::vector<Integer> scales;
  Mat<Integer> Z = to_integer_rows(A, scales);
  Integer d;
  bareiss(std::move(Z), &d);
  Integer denom_all(1);
  for (const Integer& s : scales) denom_all *= s;
  Rational out{d, denom_all};
  out.canonicalize();
  return out;
}

void LinearSystem::add_equation(const std::vector<Rational>& coeffs, const Rational& b) {
  if (coeffs.size() != A.cols()) fail(ErrorKind::DimensionMismatch, "add_equation");
  RationalMatrix next(A.rows() + 1, A.cols());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) next(i, j) = A(i, j);
  for (std::size_t j = 0; j < A.cols(); ++j) next(A.rows(), j) = coeffs[j];
  A = std::move(next);
  rhs.push_back(b);
}

SolveResult solve(const LinearSystem& sys) {
  SolveResult out;
  const std::size_t m = sys.A.rows(), n = sys.A.cols();
  if (m == 0) {
    out.feasible = true;
    out.particular.assign(n, Rational(0));
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<Rational> e(n, Rational(0));
      e[j] = 1;
      out.kernel.push_back(std::move(e));
    }
    return out;
  }
  RationalMatrix aug(m, n + 1);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = sys.A(i, j);
    aug(i, n) = sys.rhs[i];
  }
  Echelon<Rational> e = field_echelon(aug);
  for (std::size_t c : e.pivot_cols) {
    if (c == n) return out;  // pivot in the rhs column: inconsistent
  }
  out.feasible = true;
  out.particular.assign(n, Rational(0));
  std::vector<bool> is_pivot(n, false);
  for (std::size_t r = 0; r < e.pivot_cols.size(); ++r) {
    is_pivot[e.pivot_cols[r]] = true;
    out.particular[e.pivot_cols[r]] = e.reduced(r, n);
  }
  for (std::size_t fc = 0; fc < n; ++fc) {
    if (is_pivot[fc]) continue;
    std::vector<Rational> v(n, Rational(0));
    v[fc] = 1;
    for (std::size_t r = 0; r < e.pivot_cols.size(); ++r)
      v[e.pivot_cols[r]] = -e.reduced(r, fc);
    out.kernel.push_back(std::move(v));
  }
  return out;
}

bool satisfies(const LinearSystem& sys, const std::vector<Rational>& x) {
  if (x.size() != sys.A.cols()) fail(ErrorKind::DimensionMismatch, "satisfies");
  for (std::size_t i = 0; i < sys.A.rows(); ++i) {
    Rational acc(0);
    for (std::size_t j = 0; j < sys.A.cols(); ++j) acc += sys.A(i, j) * x[j];
    if (acc != sys.rhs[i]) return false;
  }
  return true;
}

bool satisfies(const LinearSystem& sys, const std::vector<QuadExt>& x) {
  if (x.size() != sys.A.cols()) fail(ErrorKind::DimensionMismatch, "satisfies");
  for (std::size_t i = 0; i < sys.A.rows(); ++i) {
    QuadExt acc{Rational(0)};
    for (std::size_t j = 0; j < sys.A.cols(); ++j)
      acc += QuadExt(sys.A(i, j)) * x[j];
    if (!(acc == QuadExt(sys.rhs[i]))) return false;
  }
  return true;
}

std::vector<Rational> rational_solution_near(const LinearSystem& sys,
                                             const std::vector<QuadExt>& point,
                                             const std::vector<RatInterval>& box,
                                             int budget_exponent) {
  const std::size_t n = sys.vars();
  if (point.size() != n || box.size() != n)
    fail(ErrorKind::DimensionMismatch, "rational_solution_near shapes");
  if (!satisfies(sys, point))
    fail(ErrorKind::WitnessInvalid, "point does not solve the system");
  for (std::size_t j = 0; j < n; ++j)
    if (!box[j].contains(point[j]))
      fail(ErrorKind::WitnessInvalid, "point leaves the box");

  // Degenerate box components pin coordinates exactly.
  LinearSystem work = sys;
  for (std::size_t j = 0; j < n; ++j) {
    if (box[j].degenerate()) {
      std::vector<Rational> coeffs(n, Rational(0));
      coeffs[j] = 1;
      work.add_equation(coeffs, box[j].lo());
    }
  }

  SolveResult sol = solve(work);
  if (!sol.feasible)
    fail(ErrorKind::WitnessInvalid,
         "system infeasible though the point solves it (degenerate box conflict)");

  // Coordinates of `point` in the affine parametrization particular + K mu.
  const std::size_t g = sol.kernel.size();
  std::vector<QuadExt> mu(g, QuadExt(Rational(0)));
  if (g > 0) {
    // Solve K mu = point - particular exactly over Q(sqrt d).
    Mat<QuadExt> K(n, g);
    for (std::size_t j = 0; j < g; ++j)
      for (std::size_t i = 0; i < n; ++i) K(i, j) = QuadExt(sol.kernel[j][i]);
    Mat<QuadExt> aug(n, g + 1);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < g; ++j) aug(i, j) = K(i, j);
      aug(i, g) = point[i] - QuadExt(sol.particular[i]);
    }
    Echelon<QuadExt> e = field_echelon(aug);
    for (std::size_t c : e.pivot_cols)
      internal_check(c != g, "point not in the affine solution set");
    for (std::size_t r = 0; r < e.pivot_cols.size(); ++r)
      mu[e.pivot_cols[r]] = e.reduced(r, g);
  }

  for (int exp : denominator_schedule(budget_exponent)) {
    std::vector<Rational> x = sol.particular;
    for (std::size_t f = 0; f < g; ++f) {
      Rational mf = cf_approx(mu[f], exp);
      for (std::size_t i = 0; i < n; ++i) x[i] += mf * sol.kernel[f][i];
    }
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) ok = box[i].contains(x[i]);
    if (ok) return x;
  }
  fail(ErrorKind::BoxTooTight, "no rational solution inside the box at this budget");
}

}  // namespace intrank

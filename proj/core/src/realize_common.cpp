#include <algorithm>

#include "intrank/approx.hpp"
#include "intrank/realize.hpp"
#include "intrank/realize_detail.hpp"

namespace intrank {

QuadMatrix Rank2Witness::matrix() const {
  QuadMatrix R(a.size(), c.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) R(i, j) = a[i] * c[j] + b[i] * d[j];
  return R;
}

QuadMatrix Rank1Witness::matrix() const {
  QuadMatrix R(a.size(), c.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) R(i, j) = a[i] * c[j];
  return R;
}

namespace detail {

void verify_realization(const IntervalMatrix& alpha, const RationalMatrix& M,
                        std::size_t target, RankMode mode) {
  internal_check(contains(alpha, M), "realized matrix leaves the interval matrix");
  std::size_t r = rank(M);
  if (mode == RankMode::Exact)
    internal_check(r == target, "realized rank differs from the target");
  else
    internal_check(r <= target, "realized rank exceeds the bound");
}

Rational half_min_slack(const QuadExt& v, const RatInterval& box) {
  QuadExt lo_slack = v - QuadExt(box.lo());
  QuadExt hi_slack = QuadExt(box.hi()) - v;
  QuadExt s = lo_slack < hi_slack ? lo_slack : hi_slack;
  internal_check(s.sign() > 0, "half_min_slack at the boundary");
  return positive_rational_lb(s) / 2;
}

}  // namespace detail

IntervalMatrix pin_boundary_entries(const IntervalMatrix& alpha, const QuadMatrix& A) {
  IntervalMatrix out = alpha;
  for (std::size_t i = 0; i < alpha.rows(); ++i) {
    for (std::size_t j = 0; j < alpha.cols(); ++j) {
      const RatInterval& e = alpha(i, j);
      if (e.degenerate() || !A(i, j).is_rational()) continue;
      const Rational& v = A(i, j).as_rational();
      if (v == e.lo() || v == e.hi()) out(i, j) = RatInterval::point(v);
    }
  }
  return out;
}

RatInterval interval_det(const Mat<RatInterval>& box) {
  if (box.rows() != box.cols()) fail(ErrorKind::NotSquare, "interval_det");
  const std::size_t n = box.rows();
  if (n == 0) return RatInterval::point(1);
  // Laplace expansion over column subsets: dp[S] is the determinant range of
  // the last |S| rows against columns S.
  std::vector<RatInterval> dp(std::size_t(1) << n);
  dp[0] = RatInterval::point(1);
  for (std::size_t S = 1; S < dp.size(); ++S) {
    int k = __builtin_popcountll(S);
    std::size_t row = n - std::size_t(k);
    RatInterval acc = RatInterval::point(0);
    int pos = 0;
    for (std::size_t c = 0; c < n; ++c) {
      if (!(S >> c & 1)) continue;
      RatInterval term = interval_mul(box(row, c), dp[S & ~(std::size_t(1) << c)]);
      acc = (pos % 2 == 0) ? interval_add(acc, term) : interval_sub(acc, term);
      ++pos;
    }
    dp[S] = acc;
  }
  return dp.back();
}

IntervalMatrix shrink_to_sign_definite(const IntervalMatrix& alpha, const QuadMatrix& A,
                                       const std::vector<std::size_t>& rows,
                                       const std::vector<std::size_t>& cols) {
  internal_check(rows.size() == cols.size(), "square selection required");
  for (int t = 0; t <= 80; ++t) {
    Rational r = pow2(-t);
    IntervalMatrix sub(alpha.rows(), alpha.cols());
    for (std::size_t i = 0; i < alpha.rows(); ++i) {
      for (std::size_t j = 0; j < alpha.cols(); ++j) {
        const RatInterval& cell = alpha(i, j);
        if (cell.degenerate()) {
          sub(i, j) = cell;
          continue;
        }
        const QuadExt& v = A(i, j);
        if (v.is_rational()) {
          Rational lo = rat_max(cell.lo(), v.as_rational() - r);
          Rational hi = rat_min(cell.hi(), v.as_rational() + r);
          sub(i, j) = RatInterval(lo, hi);
        } else {
          sub(i, j) = box_around_clipped(v, r, cell);
        }
      }
    }
    Mat<RatInterval> sel(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols.size(); ++j) sel(i, j) = sub(rows[i], cols[j]);
    RatInterval dr = interval_det(sel);
    if (sign(dr.lo()) > 0 || sign(dr.hi()) < 0) {
      internal_check(contains(sub, A), "shrunken box lost the witness");
      internal_check(sub.subset_of(alpha), "shrunken box escapes alpha");
      return sub;
    }
  }
  fail(ErrorKind::ConstructionFailed,
       "could not make the selected minor sign-definite (singular witness minor?)");
}

Realized realize_rank0(const IntervalMatrix& alpha) {
  for (std::size_t i = 0; i < alpha.rows(); ++i)
    for (std::size_t j = 0; j < alpha.cols(); ++j)
      if (!alpha(i, j).contains(Rational(0)))
        return NoWitness{"entry (" + std::to_string(i + 1) + "," +
                         std::to_string(j + 1) + ") excludes zero"};
  RealizationResult res;
  res.matrix = RationalMatrix(alpha.rows(), alpha.cols(), Rational(0));
  res.target_rank = 0;
  res.mode = RankMode::Exact;
  detail::verify_realization(alpha, res.matrix, 0, RankMode::Exact);
  return res;
}

RealizationResult realize_full_rank(const IntervalMatrix& alpha, const FullRankWitness& w) {
  const std::size_t p = alpha.rows(), q = alpha.cols();
  if (w.A.rows() != p || w.A.cols() != q)
    fail(ErrorKind::WitnessInvalid, "witness shape differs from alpha");
  if (p < q) fail(ErrorKind::WitnessInvalid, "full column rank needs p >= q");
  if (!contains(alpha, w.A)) fail(ErrorKind::WitnessInvalid, "witness not contained");
  if (rank(w.A) != q) fail(ErrorKind::WitnessInvalid, "witness rank is below q");

  RealizationResult res;
  res.target_rank = q;
  res.mode = RankMode::Exact;

  bool rational = true;
  for (std::size_t i = 0; i < p && rational; ++i)
    for (std::size_t j = 0; j < q && rational; ++j) rational = w.A(i, j).is_rational();
  if (rational) {
    res.matrix = RationalMatrix(p, q);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < q; ++j) res.matrix(i, j) = w.A(i, j).as_rational();
    detail::verify_realization(alpha, res.matrix, q, RankMode::Exact);
    return res;
  }

  Echelon<QuadExt> e = field_echelon(w.A);
  std::vector<std::size_t> rows = e.pivot_rows;
  std::sort(rows.begin(), rows.end());
  std::vector<std::size_t> cols(q);
  for (std::size_t j = 0; j < q; ++j) cols[j] = j;
  IntervalMatrix sub = shrink_to_sign_definite(alpha, w.A, rows, cols);

  // free rounding of every entry inside the sign-definite sub-box
  LinearSystem none = LinearSystem::empty(p * q);
  std::vector<QuadExt> point;
  std::vector<RatInterval> box;
  point.reserve(p * q);
  box.reserve(p * q);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < q; ++j) {
      point.push_back(w.A(i, j));
      box.push_back(sub(i, j));
    }
  std::vector<Rational> flat = rational_solution_near(none, point, box);
  res.matrix = RationalMatrix(p, q);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < q; ++j) res.matrix(i, j) = flat[i * q + j];
  detail::verify_realization(alpha, res.matrix, q, RankMode::Exact);
  return res;
}

std::string unsupported_rank_note(std::size_t r, std::size_t q) {
  return "rank " + std::to_string(r) + " realization over the rationals is not "
         "guaranteed for a " + std::to_string(q) + "-column interval matrix: only "
         "r in {0, 1, 2, q-2, q-1, q} is supported; for intermediate ranks there "
         "are counterexamples (a 12x12 sign pattern realizable by a rank-3 real "
         "matrix but by no rank-3 rational matrix).";
}

Realized realize(const IntervalMatrix& alpha, const Witness& w, std::size_t r,
                 RankMode mode) {
  const std::size_t q = alpha.cols();
  bool supported = r == 0 || r == 1 || r == 2 || r + 2 == q || r + 1 == q || r == q;
  if (!supported) fail(ErrorKind::UnsupportedRank, unsupported_rank_note(r, q));

  if (std::holds_alternative<std::monostate>(w)) {
    if (r != 0) fail(ErrorKind::WitnessInvalid, "rank > 0 needs a witness");
    return realize_rank0(alpha);
  }
  if (r == 0) return realize_rank0(alpha);
  if (auto* d1 = std::get_if<Rank1Witness>(&w)) {
    if (r != 1) fail(ErrorKind::WitnessInvalid, "dyad1 witness certifies rank 1");
    return realize_rank1(alpha, *d1);
  }
  if (auto* d2 = std::get_if<Rank2Witness>(&w)) {
    if (r != 2) fail(ErrorKind::WitnessInvalid, "dyad2 witness certifies rank 2");
    return realize_rank2(alpha, *d2);
  }
  if (auto* c1 = std::get_if<ColumnDep1Witness>(&w)) {
    if (r + 1 != q)
      fail(ErrorKind::WitnessInvalid, "coldep1 witness certifies rank <= q-1");
    if (mode == RankMode::AtMost) return realize_rank_le_qm1(alpha, *c1);
    return realize_rank_exact(alpha, w, r);
  }
  if (auto* c2 = std::get_if<ColumnDep2Witness>(&w)) {
    if (r + 2 != q)
      fail(ErrorKind::WitnessInvalid, "coldep2 witness certifies rank <= q-2");
    if (mode == RankMode::AtMost) return realize_rank_le_qm2(alpha, *c2);
    return realize_rank_exact(alpha, w, r);
  }
  const auto& f = std::get<FullRankWitness>(w);
  if (r != q) fail(ErrorKind::WitnessInvalid, "matrix witness certifies rank q");
  return realize_full_rank(alpha, f);
}

}  // namespace intrank

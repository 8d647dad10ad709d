#include <doctest.h>

#include <vector>

#include "intrank/fourier_motzkin.hpp"
#include "intrank/instance.hpp"
#include "intrank/linalg.hpp"

using namespace intrank;

namespace {

Rational q(long n, long d = 1) { return rat(n, d); }

RationalMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  RationalMatrix A(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) A(i, j) = rng.rational();
  return A;
}

template <class F>
bool is_zero_vec(const std::vector<F>& v) {
  for (const F& x : v)
    if (!(x == F(0))) return false;
  return true;
}

}  // namespace

TEST_CASE("determinants") {
  RationalMatrix A{{q(3), q(1)}, {q(1), q(3)}};
  // cofactor oracle: 3*3 - 1*1
  CHECK(det(A) == q(3) * q(3) - q(1) * q(1));
  CHECK(det(A) == q(8));
  CHECK(det(RationalMatrix::identity(4)) == q(1));
  RationalMatrix eq{{q(1), q(2)}, {q(1), q(2)}};
  CHECK(det(eq) == q(0));
  CHECK_THROWS_AS(det(RationalMatrix(2, 3)), Error);
}

TEST_CASE("rank over both fields") {
  CHECK(rank(RationalMatrix::identity(3)) == 3);
  RationalMatrix two{{q(1), q(0), q(2)}, {q(0), q(1), q(3)}};
  CHECK(rank(two) == 2);

  QuadExt r2 = QuadExt::sqrt_of(2);
  QuadMatrix Q{{QuadExt(q(1)), r2}, {r2, QuadExt(q(2))}};
  CHECK(rank(Q) == 1);  // second row is sqrt(2) times the first
}

TEST_CASE("fraction-free and field elimination agree") {
  Rng rng(5);
  for (int iter = 0; iter < 120; ++iter) {
    std::size_t rows = 1 + rng.below(5), cols = 1 + rng.below(5);
    RationalMatrix A = random_matrix(rng, rows, cols);
    CHECK(rank_bareiss(A) == rank_field(A));
    if (rows == cols) {
      CHECK(det_bareiss(A) == det_field(A));
    }
  }
  // quadratic entries
  for (int iter = 0; iter < 40; ++iter) {
    std::size_t n = 2 + rng.below(3);
    QuadMatrix A(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) A(i, j) = rng.mixed(3);
    std::size_t r = rank_field(A);
    CHECK(r <= n);
    if (!(det_field(A) == QuadExt(q(0)))) CHECK(r == n);
  }
}

TEST_CASE("submatrix extraction") {
  RationalMatrix A{{q(1), q(2)}, {q(3), q(4)}};
  CHECK(A.submatrix({0, 1}, {0, 1}) == A);
  RationalMatrix cell = A.submatrix({0}, {1});
  CHECK(cell.rows() == 1);
  CHECK(cell(0, 0) == q(2));
  RationalMatrix B{{q(1), q(2), q(3)}, {q(4), q(5), q(6)}};
  RationalMatrix right = B.submatrix({0, 1}, {1, 2});
  CHECK(right(0, 0) == q(2));
  CHECK(right(1, 1) == q(6));
  CHECK_THROWS_AS(A.submatrix({2}, {0}), Error);
}

TEST_CASE("kernel generators: worked example and signs") {
  RationalMatrix A{{q(1), q(0), q(2)}, {q(0), q(1), q(3)}};
  auto gens = kernel_generators(A, 2);
  REQUIRE(gens.size() == 1);
  CHECK(gens[0] == std::vector<Rational>{q(2), q(3), q(-1)});
  CHECK(is_zero_vec(mat_vec(A, gens[0])));

  RationalMatrix row{{q(1), q(1)}};
  auto g2 = kernel_generators(row, 1);
  REQUIRE(g2.size() == 1);
  CHECK(g2[0] == std::vector<Rational>{q(-1), q(1)});

  CHECK_THROWS_AS(kernel_generators(RationalMatrix::identity(2), 2), Error);
}

TEST_CASE("kernel generators span the elimination kernel") {
  Rng rng(11);
  int done = 0;
  while (done < 100) {
    std::size_t rows = 1 + rng.below(5);
    std::size_t cols = rows + 1 + rng.below(7 - rows);  // cols in rows+1..7
    RationalMatrix A = random_matrix(rng, rows, cols);
    std::size_t r = rank_field(A);
    if (r == 0) continue;
    auto gens = kernel_generators(A, r == rows ? rows : r);
    for (const auto& v : gens) CHECK(is_zero_vec(mat_vec(A, v)));
    auto elim = elimination_kernel(A);
    CHECK(spans_equal(gens, elim));
    ++done;
  }
}

TEST_CASE("linear system solving") {
  LinearSystem s1 = LinearSystem::empty(2);
  s1.add_equation({q(1), q(1)}, q(2));
  s1.add_equation({q(1), q(-1)}, q(0));
  SolveResult r1 = solve(s1);
  REQUIRE(r1.feasible);
  CHECK(r1.particular == std::vector<Rational>{q(1), q(1)});
  CHECK(r1.kernel.empty());

  LinearSystem s2 = LinearSystem::empty(1);
  s2.add_equation({q(0)}, q(1));
  CHECK(!solve(s2).feasible);

  LinearSystem s3 = LinearSystem::empty(2);
  s3.add_equation({q(1), q(1)}, q(1));
  SolveResult r3 = solve(s3);
  REQUIRE(r3.feasible);
  CHECK(satisfies(s3, r3.particular));
  REQUIRE(r3.kernel.size() == 1);
  CHECK(is_zero_vec(mat_vec(s3.A, r3.kernel[0])));
}

TEST_CASE("rational solutions near an irrational point") {
  QuadExt r2 = QuadExt::sqrt_of(2);

  LinearSystem diag = LinearSystem::empty(2);
  diag.add_equation({q(1), q(-1)}, q(0));
  std::vector<RatInterval> box{RatInterval(q(1), q(2)), RatInterval(q(1), q(2))};
  auto x = rational_solution_near(diag, {r2, r2}, box);
  CHECK(satisfies(diag, x));
  CHECK(box[0].contains(x[0]));
  CHECK(box[1].contains(x[1]));

  LinearSystem none = LinearSystem::empty(1);
  auto y = rational_solution_near(none, {r2}, {RatInterval(q(1), q(2))});
  CHECK(y[0] >= q(1));
  CHECK(y[0] <= q(2));

  LinearSystem pin = LinearSystem::empty(1);
  pin.add_equation({q(1)}, q(1));
  auto z = rational_solution_near(pin, {QuadExt(q(1))}, {RatInterval(q(0), q(2))});
  CHECK(z[0] == q(1));

  // the point must solve the system
  CHECK_THROWS_AS(rational_solution_near(pin, {QuadExt(q(2))},
                                         {RatInterval(q(0), q(3))}),
                  Error);
}

TEST_CASE("rational_solution_near postconditions on random systems") {
  Rng rng(1234);
  QuadExt r3 = QuadExt::sqrt_of(3);
  for (int iter = 0; iter < 60; ++iter) {
    // build a system solved by a known half-rational point
    std::size_t n = 2 + rng.below(3);
    std::vector<QuadExt> point;
    for (std::size_t j = 0; j < n; ++j)
      point.push_back(rng.coin() ? QuadExt(rng.rational())
                                 : QuadExt(rng.rational()) + QuadExt(rng.rational_nonzero()) * r3);
    LinearSystem sys = LinearSystem::empty(n);
    // one or two equations with rational coefficients annihilating the
    // irrational parts: pair up coordinates with proportional irr parts
    std::vector<Rational> coeffs(n, q(0));
    QuadExt acc{q(0)};
    for (std::size_t j = 0; j < n; ++j) {
      Rational cj = rng.rational(2, 2);
      coeffs[j] = cj;
      acc += QuadExt(cj) * point[j];
    }
    if (acc.is_rational()) {
      sys.add_equation(coeffs, acc.as_rational());
    } else {
      continue;  // only rational-rhs systems are valid inputs here
    }
    std::vector<RatInterval> box;
    for (std::size_t j = 0; j < n; ++j) box.push_back(enclose(point[j], q(1, 4)));
    auto x = rational_solution_near(sys, point, box);
    CHECK(satisfies(sys, x));
    for (std::size_t j = 0; j < n; ++j) CHECK(box[j].contains(x[j]));
  }
}

TEST_CASE("exact LP feasibility by hand") {
  // x >= 1 and x <= 0
  std::vector<LinIneq> bad{{{q(1)}, Rel::GE, q(1)}, {{q(1)}, Rel::LE, q(0)}};
  CHECK(!lp_feasible(bad, 1));

  // x >= 0, y >= 0, x + y = 1
  std::vector<LinIneq> tri{{{q(1), q(0)}, Rel::GE, q(0)},
                           {{q(0), q(1)}, Rel::GE, q(0)},
                           {{q(1), q(1)}, Rel::EQ, q(1)}};
  auto w = lp_feasible(tri, 2);
  REQUIRE(w);
  CHECK((*w)[0] >= q(0));
  CHECK((*w)[1] >= q(0));
  CHECK((*w)[0] + (*w)[1] == q(1));

  // x >= 1, 2x <= 3 : witness in [1, 3/2]
  std::vector<LinIneq> band{{{q(1)}, Rel::GE, q(1)}, {{q(2)}, Rel::LE, q(3)}};
  auto v = lp_feasible(band, 1);
  REQUIRE(v);
  CHECK((*v)[0] >= q(1));
  CHECK((*v)[0] <= q(3, 2));
}

TEST_CASE("LP feasibility agrees with vertex enumeration") {
  Rng rng(777);
  for (int iter = 0; iter < 80; ++iter) {
    std::size_t n = 1 + rng.below(3);  // up to 3 free variables
    std::size_t m = 1 + rng.below(5);
    std::vector<LinIneq> sys;
    for (std::size_t i = 0; i < m; ++i) {
      LinIneq c;
      for (std::size_t j = 0; j < n; ++j) c.coeffs.push_back(rng.rational(2, 2));
      c.rel = rng.coin() ? Rel::LE : Rel::GE;
      c.rhs = rng.rational(2, 2);
      sys.push_back(std::move(c));
    }
    // bounding box makes the region a polytope so vertices decide feasibility
    for (std::size_t j = 0; j < n; ++j) {
      LinIneq lo, hi;
      lo.coeffs.assign(n, q(0));
      hi.coeffs.assign(n, q(0));
      lo.coeffs[j] = q(1);
      lo.rel = Rel::GE;
      lo.rhs = q(-10);
      hi.coeffs[j] = q(1);
      hi.rel = Rel::LE;
      hi.rhs = q(10);
      sys.push_back(std::move(lo));
      sys.push_back(std::move(hi));
    }

    auto fm = lp_feasible(sys, n);

    // oracle: normalize to <=, try every n-subset of tight constraints
    std::vector<std::vector<Rational>> rows;
    std::vector<Rational> rhs;
    for (const LinIneq& c : sys) {
      std::vector<Rational> r = c.coeffs;
      Rational b = c.rhs;
      if (c.rel == Rel::GE) {
        for (Rational& x : r) x = -x;
        b = -b;
      }
      rows.push_back(r);
      rhs.push_back(b);
      if (c.rel == Rel::EQ) {
        std::vector<Rational> r2 = c.coeffs;
        for (Rational& x : r2) x = -x;
        rows.push_back(r2);
        rhs.push_back(Rational(-c.rhs));
      }
    }
    bool vertex_feasible = false;
    auto subsets = index_subsets(rows.size(), n);
    for (const auto& S : subsets) {
      LinearSystem cand = LinearSystem::empty(n);
      for (std::size_t idx : S) cand.add_equation(rows[idx], rhs[idx]);
      SolveResult sol = solve(cand);
      if (!sol.feasible || !sol.kernel.empty()) continue;
      bool inside = true;
      for (std::size_t i = 0; i < rows.size() && inside; ++i) {
        Rational acc(0);
        for (std::size_t j = 0; j < n; ++j) acc += rows[i][j] * sol.particular[j];
        inside = acc <= rhs[i];
      }
      if (inside) {
        vertex_feasible = true;
        break;
      }
    }
    CHECK(bool(fm) == vertex_feasible);
    if (fm) {
      for (std::size_t i = 0; i < rows.size(); ++i) {
        Rational acc(0);
        for (std::size_t j = 0; j < n; ++j) acc += rows[i][j] * (*fm)[j];
        CHECK(acc <= rhs[i]);
      }
    }
  }
}

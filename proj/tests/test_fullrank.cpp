#include <doctest.h>

#include <map>

#include "intrank/fullrank.hpp"
#include "intrank/instance.hpp"
#include "intrank/linalg.hpp"

using namespace intrank;

namespace {

Rational q(long n, long d = 1) { return rat(n, d); }

IntervalMatrix rohn_example() {
  // [[2,4],[1,1]] / [[1,1],[2,4]]
  IntervalMatrix m(2, 2);
  m(0, 0) = RatInterval(q(2), q(4));
  m(0, 1) = RatInterval(q(1), q(1));
  m(1, 0) = RatInterval(q(1), q(1));
  m(1, 1) = RatInterval(q(2), q(4));
  return m;
}

IntervalMatrix random_square(Rng& rng, std::size_t p) {
  IntervalMatrix m(p, p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) {
      long a = rng.range(-2, 2), b = rng.range(-2, 2);
      m(i, j) = RatInterval(q(std::min(a, b)), q(std::max(a, b)));
    }
  return m;
}

}  // namespace

TEST_CASE("square test on the worked example") {
  IntervalMatrix m = rohn_example();
  MidRadMod r = mid_rad_mod(m);
  CHECK(det(r.mid) == q(8));

  // the sign-combination determinants collapse to (3 -+ 1)(3 -+ 1) - 1:
  // multiset {3, 7, 7, 15} over the distinct (x_i y_i) sign patterns
  std::map<std::string, Rational> dets;
  for (int s1 : {-1, 1})
    for (int s2 : {-1, 1}) {
      RationalMatrix D(2, 2);
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
          int s = (i == 0 ? s1 : s2);
          D(i, j) = r.mid(i, j) - q(i == j ? s : 0) * r.rad(i, j);
        }
      dets[std::to_string(s1) + "," + std::to_string(s2)] = det(D);
    }
  CHECK(dets["1,1"] == q(3));
  CHECK(dets["1,-1"] == q(7));
  CHECK(dets["-1,1"] == q(7));
  CHECK(dets["-1,-1"] == q(15));

  CHECK(square_full_rank(m).full_rank);
}

TEST_CASE("square test trivia") {
  IntervalMatrix z(1, 1);
  z(0, 0) = RatInterval(q(-1), q(1));
  FullRankVerdict v = square_full_rank(z);
  CHECK(!v.full_rank);
  REQUIRE(v.square_violation);

  IntervalMatrix id = IntervalMatrix::degenerate_at(RationalMatrix::identity(3));
  CHECK(square_full_rank(id).full_rank);
  CHECK_THROWS_AS(square_full_rank(IntervalMatrix(2, 3)), Error);
}

TEST_CASE("rectangular test") {
  IntervalMatrix m = rohn_example();
  CHECK(rect_full_rank(m).full_rank);

  IntervalMatrix col(2, 1);
  col(0, 0) = RatInterval(q(-1), q(1));
  col(1, 0) = RatInterval(q(-1), q(1));
  FullRankVerdict v = rect_full_rank(col);
  CHECK(!v.full_rank);
  REQUIRE(v.orthant_violation);
  // the witness satisfies |mid x| <= rad |x| nontrivially
  const auto& x = v.orthant_violation->witness;
  CHECK(x.size() == 1);
  CHECK(sgn(x[0]) != 0);

  IntervalMatrix wide(3, 2);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 2; ++j) wide(i, j) = RatInterval(q(-1), q(1));
  CHECK(!rect_full_rank(wide).full_rank);  // contains the zero matrix
}

TEST_CASE("vertex oracle") {
  CHECK(regularity_oracle(IntervalMatrix::degenerate_at(RationalMatrix::identity(2))));
  IntervalMatrix z(1, 1);
  z(0, 0) = RatInterval(q(-1), q(1));
  CHECK(!regularity_oracle(z));
  CHECK(regularity_oracle(rohn_example()));
  IntervalMatrix big(5, 5);
  CHECK_THROWS_AS(regularity_oracle(big), Error);
}

TEST_CASE("square test agrees with the vertex oracle") {
  Rng rng(31337);
  for (int iter = 0; iter < 200; ++iter) {
    std::size_t p = 1 + rng.below(3);
    IntervalMatrix m = random_square(rng, p);
    CHECK(square_full_rank(m).full_rank == regularity_oracle(m));
  }
}

TEST_CASE("square and rectangular tests agree on square input") {
  Rng rng(4242);
  for (int iter = 0; iter < 200; ++iter) {
    std::size_t p = 1 + rng.below(4);
    IntervalMatrix m = random_square(rng, p);
    CHECK(square_full_rank(m).full_rank == rect_full_rank(m).full_rank);
  }
}

TEST_CASE("full rank forces full rank of every contained sample") {
  Rng rng(2718);
  int found = 0;
  while (found < 10) {
    std::size_t p = 2 + rng.below(2);
    IntervalMatrix m = random_square(rng, p);
    if (!square_full_rank(m).full_rank) continue;
    ++found;
    for (int s = 0; s < 100; ++s) {
      RationalMatrix B(p, p);
      for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) {
          Rational t(rng.range(0, 4), 4);
          t.canonicalize();
          B(i, j) = m(i, j).lo() + t * (m(i, j).hi() - m(i, j).lo());
        }
      CHECK(rank(B) == p);
    }
  }
}

TEST_CASE("full rank is monotone under interval containment") {
  Rng rng(555);
  int found = 0;
  while (found < 20) {
    std::size_t p = 1 + rng.below(3);
    IntervalMatrix m = random_square(rng, p);
    if (!square_full_rank(m).full_rank) continue;
    ++found;
    // shrink every entry toward its midpoint: still full rank
    IntervalMatrix inner(p, p);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j) {
        const RatInterval& e = m(i, j);
        Rational quarter = e.width() / 4;
        inner(i, j) = RatInterval(e.lo() + quarter, e.hi() - quarter);
      }
    CHECK(inner.subset_of(m));
    CHECK(square_full_rank(inner).full_rank);
  }
}

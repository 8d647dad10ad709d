#include <doctest.h>

#include <gmpxx.h>

#include <vector>

#include "intrank/approx.hpp"
#include "intrank/instance.hpp"
#include "intrank/interval.hpp"
#include "intrank/matrix.hpp"
#include "intrank/quadext.hpp"

using namespace intrank;

namespace {

Rational q(long n, long d = 1) { return rat(n, d); }

// brute-force oracle: range of {x op y} sampled on an endpoint-refined grid
RatInterval range_oracle(const RatInterval& a, const RatInterval& b, char op) {
  std::vector<Rational> xs, ys;
  for (int t = 0; t <= 6; ++t) {
    Rational f(t, 6);
    f.canonicalize();
    xs.push_back(a.lo() + f * (a.hi() - a.lo()));
    ys.push_back(b.lo() + f * (b.hi() - b.lo()));
  }
  bool first = true;
  Rational lo(0), hi(0);
  for (const Rational& x : xs)
    for (const Rational& y : ys) {
      Rational v = op == '+' ? Rational(x + y) : op == '*' ? Rational(x * y) : Rational(x / y);
      if (first || v < lo) lo = v;
      if (first || v > hi) hi = v;
      first = false;
    }
  return RatInterval(lo, hi);
}

}  // namespace

TEST_CASE("interval addition") {
  CHECK(interval_add(RatInterval(q(0), q(1)), RatInterval(q(0), q(0))) ==
        RatInterval(q(0), q(1)));
  CHECK(interval_add(RatInterval(q(1), q(3)), RatInterval(q(-2), q(-1))) ==
        RatInterval(q(-1), q(2)));
  // derived by exhaustive endpoint check
  RatInterval a(q(1, 2), q(1, 2)), b(q(1, 3), q(2, 3));
  CHECK(interval_add(a, b) == RatInterval(q(5, 6), q(7, 6)));
  CHECK(interval_add(a, b) == range_oracle(a, b, '+'));
}

TEST_CASE("interval multiplication") {
  CHECK(interval_mul(RatInterval(q(2), q(3)), RatInterval(q(0), q(0))) ==
        RatInterval(q(0), q(0)));
  RatInterval m(q(-1), q(2));
  CHECK(interval_mul(m, m) == RatInterval(q(-2), q(4)));
  CHECK(interval_mul(m, m) == range_oracle(m, m, '*'));
  RatInterval any(q(-5, 3), q(7, 2));
  CHECK(interval_mul(RatInterval(q(1), q(1)), any) == any);
}

TEST_CASE("interval division") {
  CHECK(interval_div(RatInterval(q(2), q(4)), RatInterval(q(2), q(2))) ==
        RatInterval(q(1), q(2)));
  RatInterval one(q(1), q(1)), b(q(1), q(2));
  CHECK(interval_div(one, b) == RatInterval(q(1, 2), q(1)));
  CHECK(interval_div(one, b) == range_oracle(one, b, '/'));
  CHECK_THROWS_AS(interval_div(RatInterval(q(0), q(1)), RatInterval(q(-1), q(1))),
                  Error);
}

TEST_CASE("interval inclusion property on sampled points") {
  Rng rng(42);
  for (int iter = 0; iter < 200; ++iter) {
    Rational a1 = rng.rational(), a2 = rng.rational();
    Rational b1 = rng.rational(), b2 = rng.rational();
    RatInterval a(rat_min(a1, a2), rat_max(a1, a2));
    RatInterval b(rat_min(b1, b2), rat_max(b1, b2));
    RatInterval sum = interval_add(a, b), prod = interval_mul(a, b);
    for (int t = 0; t <= 4; ++t) {
      Rational f(t, 4);
      f.canonicalize();
      Rational x = a.lo() + f * (a.hi() - a.lo());
      Rational y = b.lo() + f * (b.hi() - b.lo());
      CHECK(sum.contains(Rational(x + y)));
      CHECK(prod.contains(Rational(x * y)));
    }
    // both result endpoints come from endpoint combinations
    bool lo_hit = false, hi_hit = false;
    for (const Rational& x : {a.lo(), a.hi()})
      for (const Rational& y : {b.lo(), b.hi()}) {
        if (x * y == prod.lo()) lo_hit = true;
        if (x * y == prod.hi()) hi_hit = true;
      }
    CHECK(lo_hit);
    CHECK(hi_hit);
  }
}

TEST_CASE("mid rad mod") {
  IntervalMatrix m(1, 3);
  m(0, 0) = RatInterval(q(1), q(3));
  m(0, 1) = RatInterval(q(-2), q(-2));
  m(0, 2) = RatInterval(q(-1), q(5));
  MidRadMod r = mid_rad_mod(m);
  CHECK(r.mid(0, 0) == q(2));
  CHECK(r.rad(0, 0) == q(1));
  CHECK(r.mod(0, 0) == q(3));
  CHECK(r.mid(0, 1) == q(-2));
  CHECK(r.rad(0, 1) == q(0));
  CHECK(r.mod(0, 1) == q(2));
  CHECK(r.mid(0, 2) == q(2));
  CHECK(r.rad(0, 2) == q(3));
  CHECK(r.mod(0, 2) == q(5));
}

TEST_CASE("mid and rad reconstruct the endpoints") {
  Rng rng(7);
  for (int iter = 0; iter < 100; ++iter) {
    Rational a = rng.rational(), b = rng.rational();
    IntervalMatrix m(1, 1);
    m(0, 0) = RatInterval(rat_min(a, b), rat_max(a, b));
    MidRadMod r = mid_rad_mod(m);
    CHECK(r.mid(0, 0) - r.rad(0, 0) == m(0, 0).lo());
    CHECK(r.mid(0, 0) + r.rad(0, 0) == m(0, 0).hi());
  }
}

TEST_CASE("containment of matrices with quadratic entries") {
  IntervalMatrix m(2, 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) m(i, j) = RatInterval(q(-1), q(1));
  CHECK(contains(m, RationalMatrix(2, 2, q(0))));

  // sqrt(2) against [1, 3/2]: 2 < 9/4, so sqrt(2) < 3/2 and the entry fits
  IntervalMatrix s(1, 1);
  s(0, 0) = RatInterval(q(1), q(3, 2));
  QuadMatrix A(1, 1);
  A(0, 0) = QuadExt::sqrt_of(2);
  CHECK(contains(s, A));
  s(0, 0) = RatInterval(q(1), q(7, 5));  // 2 > 49/25, so sqrt(2) > 7/5
  CHECK(!contains(s, A));

  IntervalMatrix degen(1, 1);
  degen(0, 0) = RatInterval(q(2), q(2));
  QuadMatrix B(1, 1);
  B(0, 0) = QuadExt(q(2));
  CHECK(contains(degen, B));
}

TEST_CASE("quadratic field arithmetic is exact") {
  QuadExt r2 = QuadExt::sqrt_of(2);
  CHECK((r2 * r2) == QuadExt(q(2)));
  QuadExt x(q(1, 2), q(3, 4), 5);
  QuadExt y(q(-2), q(1, 3), 5);
  CHECK((x + y) - y == x);
  CHECK((x * y) / y == x);
  CHECK((QuadExt(q(1)) / x) * x == QuadExt(q(1)));
  // rational iff the irrational part vanishes, decided structurally
  CHECK(!x.is_rational());
  CHECK((x - x).is_rational());
  CHECK_THROWS_AS(QuadExt::sqrt_of(2) + QuadExt::sqrt_of(3), Error);
}

TEST_CASE("quadratic sign agrees with high-precision floating evaluation") {
  Rng rng(2024);
  for (int iter = 0; iter < 1000; ++iter) {
    std::int64_t d = (iter % 3 == 0) ? 2 : (iter % 3 == 1) ? 3 : 5;
    QuadExt x(rng.rational(20, 20), rng.rational(20, 20), d);
    // 400-bit floating evaluation is far beyond 100 decimal digits
    mpf_class rf(x.rat_part(), 400), sf(x.irr_part(), 400);
    mpf_class root(d, 400);
    mpf_sqrt(root.get_mpf_t(), root.get_mpf_t());
    mpf_class val = rf + sf * root;
    int float_sign = sgn(val);
    if (x.is_zero())
      CHECK(float_sign == 0);
    else
      CHECK(x.sign() == float_sign);
  }
}

TEST_CASE("quadratic floor and continued-fraction approximation") {
  QuadExt r2 = QuadExt::sqrt_of(2);
  CHECK(r2.floor() == 1);
  CHECK((-r2).floor() == -2);
  CHECK(QuadExt(q(7, 2)).floor() == 3);

  // convergents of sqrt(2): 1, 3/2, 7/5, 17/12, 41/29, 99/70, ...
  CHECK(cf_approx(r2, 0) == q(1));
  CHECK(cf_approx(r2, 3) == q(7, 5));    // best with denominator <= 8
  CHECK(cf_approx(r2, 4) == q(17, 12));  // best with denominator <= 16
  CHECK(cf_approx(r2, 7) == q(99, 70));  // best with denominator <= 128

  Rational eps(1, 1000000);
  Rational a = approx_within(r2, eps);
  CHECK((r2 - QuadExt(a)).abs() < QuadExt(eps));
}

TEST_CASE("rounding into boxes") {
  QuadExt r2 = QuadExt::sqrt_of(2);
  RatInterval box(q(7, 5), q(3, 2));
  Rational r = round_in_box(r2, box);
  CHECK(box.contains(r));
  // rational values pass through once the box admits them
  CHECK(round_in_box(QuadExt(q(1, 3)), RatInterval(q(0), q(1))) == q(1, 3));
  CHECK_THROWS_AS(round_in_box(QuadExt(q(5)), RatInterval(q(0), q(1))), Error);
}

TEST_CASE("outward enclosure keeps irrational values strictly interior") {
  Rng rng(99);
  for (int iter = 0; iter < 100; ++iter) {
    QuadExt x = rng.irrational(2);
    RatInterval e = enclose(x, q(1, 10));
    CHECK(e.interior(x));
    CHECK(e.width() <= q(1, 5));
  }
}

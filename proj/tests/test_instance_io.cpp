#include <doctest.h>

#include "intrank/instance.hpp"
#include "intrank/io.hpp"

using namespace intrank;

namespace {

Rational q(long n, long d = 1) { return rat(n, d); }

InstanceSpec basic_spec(const std::string& cls, std::uint64_t seed) {
  InstanceSpec s;
  s.p = 4;
  s.q = cls == "q-2" ? 4 : 3;
  s.rank_class = cls;
  s.seed = seed;
  s.degenerate_fraction = q(1, 5);
  return s;
}

}  // namespace

TEST_CASE("plant is deterministic in the seed") {
  for (const char* cls : {"0", "1", "2", "q-2", "q-1", "q"}) {
    InstanceSpec s = basic_spec(cls, 99);
    PlantedInstance a = plant(s), b = plant(s);
    CHECK(format_interval_matrix(a.alpha) == format_interval_matrix(b.alpha));
    if (!std::holds_alternative<std::monostate>(a.witness))
      CHECK(format_witness(a.witness, s.p, s.q) == format_witness(b.witness, s.p, s.q));
    InstanceSpec other = s;
    other.seed = 100;
    PlantedInstance c = plant(other);
    CHECK(format_interval_matrix(a.alpha) != format_interval_matrix(c.alpha));
  }
}

TEST_CASE("planted witnesses satisfy the realization preconditions") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    for (const char* cls : {"1", "2", "q-2", "q-1", "q"}) {
      InstanceSpec s = basic_spec(cls, seed);
      PlantedInstance inst = plant(s);
      Realized r = realize(inst.alpha, inst.witness, inst.target_rank);
      auto* res = std::get_if<RealizationResult>(&r);
      REQUIRE(res);
      CHECK(check_certificate(inst.alpha, *res).pass());
    }
  }
}

TEST_CASE("spec validation") {
  InstanceSpec s = basic_spec("2", 1);
  s.d = 8;  // 8 = 2 * 4 is not square-free
  CHECK_THROWS_AS(plant(s), Error);
  s = basic_spec("2", 1);
  s.degenerate_fraction = q(3, 2);
  CHECK_THROWS_AS(plant(s), Error);
  s = basic_spec("q-2", 1);
  s.q = 2;
  CHECK_THROWS_AS(plant(s), Error);
}

TEST_CASE("minimum-rank sampling oracle") {
  IntervalMatrix id = IntervalMatrix::degenerate_at(RationalMatrix::identity(2));
  CHECK(minrank_upper_oracle(id, 10) == 2);

  IntervalMatrix box(2, 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) box(i, j) = RatInterval(q(-1), q(1));
  CHECK(minrank_upper_oracle(box, 1) == 0);  // the zero matrix is the midpoint

  IntervalMatrix rohn(2, 2);
  rohn(0, 0) = RatInterval(q(2), q(4));
  rohn(0, 1) = RatInterval(q(1), q(1));
  rohn(1, 0) = RatInterval(q(1), q(1));
  rohn(1, 1) = RatInterval(q(2), q(4));
  CHECK(minrank_upper_oracle(rohn, 100) == 2);
}

TEST_CASE("certificate checker flags forged results") {
  InstanceSpec s = basic_spec("2", 3);
  PlantedInstance inst = plant(s);
  auto* w = std::get_if<Rank2Witness>(&inst.witness);
  REQUIRE(w);
  RealizationResult res = realize_rank2(inst.alpha, *w);
  CHECK(check_certificate(inst.alpha, res).pass());

  RealizationResult nudged = res;
  nudged.matrix(0, 0) = inst.alpha(0, 0).hi() + 1;
  CertReport bad = check_certificate(inst.alpha, nudged);
  CHECK(!bad.contained);
  CHECK(!bad.pass());

  RealizationResult lied = res;
  lied.target_rank = 1;  // claims rank 1 while the matrix has rank 2
  CertReport r2 = check_certificate(inst.alpha, lied);
  CHECK(!r2.rank_ok);
  CHECK(!r2.pass());
}

TEST_CASE("scalar round trips") {
  CHECK(parse_rational("3/2") == q(3, 2));
  CHECK(parse_rational("-7") == q(-7));
  CHECK(to_string(q(5, 1)) == "5");
  CHECK(to_string(q(-2, 4)) == "-1/2");
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("a"), ParseError);

  RatInterval iv = parse_interval("-1/2:3");
  CHECK(iv.lo() == q(-1, 2));
  CHECK(iv.hi() == q(3));
  CHECK(parse_interval(iv.str()) == iv);
  CHECK_THROWS_AS(parse_interval("2:1"), ParseError);

  QuadExt x(q(1, 2), q(-3, 4), 5);
  CHECK(parse_quadext(x.str()) == x);
  CHECK_THROWS_AS(parse_quadext("sqrtless"), ParseError);
  CHECK_THROWS_AS(parse_quadext("1+2*sqrt(-3)"), ParseError);
}

TEST_CASE("fuzzed round trips stay bit-exact") {
  Rng rng(0xfeed);
  int payloads = 0;
  while (payloads < 1000) {
    switch (rng.below(4)) {
      case 0: {
        Rational r = rng.rational(50, 50);
        CHECK(parse_rational(to_string(r)) == r);
        break;
      }
      case 1: {
        Rational a = rng.rational(20, 20), b = rng.rational(20, 20);
        RatInterval iv(rat_min(a, b), rat_max(a, b));
        CHECK(parse_interval(iv.str()) == iv);
        break;
      }
      case 2: {
        QuadExt x = rng.coin() ? QuadExt(rng.rational(30, 30)) : rng.irrational(7, 30, 30);
        CHECK(parse_quadext(x.str()) == x);
        break;
      }
      case 3: {
        std::size_t p = 1 + rng.below(4), q2 = 1 + rng.below(4);
        IntervalMatrix m(p, q2);
        for (std::size_t i = 0; i < p; ++i)
          for (std::size_t j = 0; j < q2; ++j) {
            Rational a = rng.rational(), b = rng.rational();
            m(i, j) = RatInterval(rat_min(a, b), rat_max(a, b));
          }
        CHECK(parse_interval_matrix(format_interval_matrix(m)) == m);
        break;
      }
    }
    ++payloads;
  }
}

TEST_CASE("witness files round trip") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    for (const char* cls : {"1", "2", "q-2", "q-1", "q"}) {
      InstanceSpec s = basic_spec(cls, seed);
      PlantedInstance inst = plant(s);
      std::string text = format_witness(inst.witness, s.p, s.q);
      Witness again = parse_witness(text);
      CHECK(format_witness(again, s.p, s.q) == text);
    }
  }
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_interval_matrix("2 2\n0:1 0:1\n0:1 banana\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 5);
  }
  CHECK_THROWS_AS(parse_interval_matrix("not-a-header\n"), ParseError);
  CHECK_THROWS_AS(parse_witness("field sqrt 2\nwhat\n2 2\n"), ParseError);
}

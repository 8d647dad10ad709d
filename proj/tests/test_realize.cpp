#include <doctest.h>

#include <set>

#include "intrank/instance.hpp"
#include "intrank/realize.hpp"

using namespace intrank;

namespace {

Rational q(long n, long d = 1) { return rat(n, d); }

void check_sound(const IntervalMatrix& alpha, const RealizationResult& res) {
  CertReport rep = check_certificate(alpha, res);
  CAPTURE(rep.violations.empty() ? "" : rep.violations.front());
  CHECK(rep.pass());
}

}  // namespace

TEST_CASE("rank 0") {
  IntervalMatrix m(2, 3);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j) m(i, j) = RatInterval(q(-1), q(1));
  Realized r = realize_rank0(m);
  auto* res = std::get_if<RealizationResult>(&r);
  REQUIRE(res);
  CHECK(rank(res->matrix) == 0);
  check_sound(m, *res);

  m(0, 1) = RatInterval(q(1), q(2));
  CHECK(std::holds_alternative<NoWitness>(realize_rank0(m)));

  IntervalMatrix z = IntervalMatrix::degenerate_at(RationalMatrix(2, 2, q(0)));
  CHECK(std::holds_alternative<RealizationResult>(realize_rank0(z)));
}

TEST_CASE("full rank realization") {
  // alpha = all [0,1], witness with an irrational entry
  IntervalMatrix m(2, 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) m(i, j) = RatInterval(q(0), q(1));
  QuadMatrix A(2, 2);
  A(0, 0) = QuadExt(q(1));
  A(0, 1) = QuadExt(q(0), q(1, 2), 2);  // 1/sqrt(2) = sqrt(2)/2
  A(1, 0) = QuadExt(q(0));
  A(1, 1) = QuadExt(q(1));
  RealizationResult res = realize_full_rank(m, FullRankWitness{A});
  CHECK(rank(res.matrix) == 2);
  check_sound(m, res);

  // rational witness comes back unchanged
  RationalMatrix R{{q(1), q(0)}, {q(0), q(1)}};
  RealizationResult res2 = realize_full_rank(m, FullRankWitness{to_quad(R)});
  CHECK(res2.matrix == R);

  // fully degenerate rational box of rank q
  IntervalMatrix degen = IntervalMatrix::degenerate_at(R);
  RealizationResult res3 = realize_full_rank(degen, FullRankWitness{to_quad(R)});
  CHECK(res3.matrix == R);

  QuadMatrix low(2, 2);
  low(0, 0) = QuadExt(q(1));
  CHECK_THROWS_AS(realize_full_rank(m, FullRankWitness{low}), Error);
}

TEST_CASE("rank 1 realization") {
  // rational dyad with a degenerate box
  Rank1Witness wr{{QuadExt(q(1)), QuadExt(q(2))}, {QuadExt(q(3)), QuadExt(q(1))}};
  IntervalMatrix degen = IntervalMatrix::degenerate_at(
      RationalMatrix{{q(3), q(1)}, {q(6), q(2)}});
  RealizationResult r0 = realize_rank1(degen, wr);
  CHECK(r0.matrix == RationalMatrix{{q(3), q(1)}, {q(6), q(2)}});

  // irrational dyad: a = (1, sqrt2), c = (sqrt2, 1)
  QuadExt r2 = QuadExt::sqrt_of(2);
  Rank1Witness w{{QuadExt(q(1)), r2}, {r2, QuadExt(q(1))}};
  QuadMatrix R = w.matrix();
  IntervalMatrix alpha(2, 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) alpha(i, j) = enclose(R(i, j), q(1, 10));
  RealizationResult res = realize_rank1(alpha, w);
  CHECK(rank(res.matrix) == 1);
  check_sound(alpha, res);

  // degenerate zero row: the row of a vanishes and stays exactly zero
  Rank1Witness wz{{QuadExt(q(0)), r2}, {r2, QuadExt(q(1))}};
  QuadMatrix Rz = wz.matrix();
  IntervalMatrix az(2, 2);
  az(0, 0) = RatInterval(q(0), q(0));
  az(0, 1) = RatInterval(q(0), q(0));
  az(1, 0) = enclose(Rz(1, 0), q(1, 10));
  az(1, 1) = enclose(Rz(1, 1), q(1, 10));
  RealizationResult rz = realize_rank1(az, wz);
  CHECK(rz.matrix(0, 0) == q(0));
  CHECK(rz.matrix(0, 1) == q(0));
  CHECK(rank(rz.matrix) == 1);
  check_sound(az, rz);
}

TEST_CASE("rank 2: fully rational witness with a fully degenerate box") {
  Rank2Witness w;
  w.a = {QuadExt(q(1)), QuadExt(q(0)), QuadExt(q(1))};
  w.b = {QuadExt(q(0)), QuadExt(q(1)), QuadExt(q(1))};
  w.c = {QuadExt(q(1)), QuadExt(q(1)), QuadExt(q(1))};
  w.d = {QuadExt(q(1)), QuadExt(q(-1)), QuadExt(q(0))};
  QuadMatrix R = w.matrix();
  RationalMatrix Rq(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) Rq(i, j) = R(i, j).as_rational();
  IntervalMatrix alpha = IntervalMatrix::degenerate_at(Rq);
  RealizationResult res = realize_rank2(alpha, w);
  CHECK(res.matrix == Rq);
  check_sound(alpha, res);
}

TEST_CASE("rank 2: planted irrational witness") {
  QuadExt r2 = QuadExt::sqrt_of(2);
  Rank2Witness w;
  w.a = {QuadExt(q(1)), r2, QuadExt(q(0))};
  w.b = {QuadExt(q(0)), QuadExt(q(1)), QuadExt(q(1))};
  w.c = {QuadExt(q(1)), QuadExt(q(1)), QuadExt(q(1))};
  w.d = {r2, QuadExt(q(0)), QuadExt(q(1))};
  QuadMatrix R = w.matrix();
  REQUIRE(rank(R) == 2);
  IntervalMatrix alpha(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) alpha(i, j) = enclose(R(i, j), q(1, 10));
  RealizationResult res = realize_rank2(alpha, w);
  CHECK(rank(res.matrix) == 2);
  check_sound(alpha, res);

  // pin the rational cells (1,1) and (2,2): r_11 = 1*1 + 0*0... entries
  // (0,0) and (1,1) of R are 1 and sqrt2+0 -> use (0,0) and (2,2)
  REQUIRE(R(0, 0).is_rational());
  REQUIRE(R(2, 2).is_rational());
  alpha(0, 0) = RatInterval::point(R(0, 0).as_rational());
  alpha(2, 2) = RatInterval::point(R(2, 2).as_rational());
  Rank2Trace trace;
  RealizationResult res2 = realize_rank2(alpha, w, &trace);
  CHECK(res2.matrix(0, 0) == R(0, 0).as_rational());
  CHECK(res2.matrix(2, 2) == R(2, 2).as_rational());
  CHECK(rank(res2.matrix) == 2);
  check_sound(alpha, res2);
}

TEST_CASE("rank 2 proof branches via planted targets") {
  std::set<std::string> seen;
  auto drive = [&](const std::string& tag, std::uint64_t seed) {
    InstanceSpec spec;
    spec.p = 4;
    spec.q = 3;
    spec.rank_class = "2";
    spec.seed = seed;
    spec.case_targets = {tag};
    PlantedInstance inst = plant(spec);
    auto* w = std::get_if<Rank2Witness>(&inst.witness);
    REQUIRE(w);
    Rank2Trace trace;
    RealizationResult res = realize_rank2(inst.alpha, *w, &trace);
    check_sound(inst.alpha, res);
    return trace;
  };

  Rank2Trace t1 = drive("thm8-rkG-ge1", 3);
  CHECK(t1.system_rank_positive);

  Rank2Trace t2 = drive("thm8-rkG0", 5);
  CHECK(!t2.system_rank_positive);

  Rank2Trace t3 = drive("thm8-Ti1", 7);
  bool single = false;
  for (auto& [row, tag] : t3.row_cases) single = single || tag == "single";
  CHECK(single);

  Rank2Trace t4 = drive("thm8-case1", 11);
  bool case1 = false;
  for (auto& [row, tag] : t4.row_cases) case1 = case1 || tag == "case1";
  CHECK(case1);

  Rank2Trace t5 = drive("thm8-case2.1", 13);
  bool case21 = false;
  for (auto& [row, tag] : t5.row_cases) case21 = case21 || tag == "case2.1";
  CHECK(case21);

  Rank2Trace t6 = drive("thm8-case2.2", 17);
  bool case22 = false;
  for (auto& [row, tag] : t6.row_cases) case22 = case22 || tag == "case2.2";
  CHECK(case22);

  Rank2Trace t7 = drive("thm8-rank1-fixup", 19);
  CHECK(t7.fixup_used);
}

TEST_CASE("rank <= q-1 realization") {
  QuadExt r2 = QuadExt::sqrt_of(2);

  // degenerate at a rational singular matrix
  RationalMatrix S{{q(1), q(2), q(3)}, {q(0), q(1), q(1)}, {q(2), q(0), q(2)}};
  // third column = first + second? 3 = 1+2, 1 = 0+1, 2 = 2+0: yes
  ColumnDep1Witness wr{to_quad(S), {QuadExt(q(1)), QuadExt(q(1))}};
  IntervalMatrix degen = IntervalMatrix::degenerate_at(S);
  RealizationResult r0 = realize_rank_le_qm1(degen, wr);
  CHECK(r0.matrix == S);

  // planted: third column = sqrt2 * first
  QuadMatrix A(3, 3);
  A(0, 0) = QuadExt(q(1));
  A(1, 0) = QuadExt(q(2));
  A(2, 0) = r2;
  A(0, 1) = QuadExt(q(0));
  A(1, 1) = QuadExt(q(1));
  A(2, 1) = QuadExt(q(1));
  for (std::size_t i = 0; i < 3; ++i) A(i, 2) = r2 * A(i, 0);
  ColumnDep1Witness w{A, {r2, QuadExt(q(0))}};
  IntervalMatrix alpha(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) alpha(i, j) = enclose(A(i, j), q(1, 10));
  RealizationResult res = realize_rank_le_qm1(alpha, w);
  CHECK(rank(res.matrix) <= 2);
  check_sound(alpha, res);

  // pin a rational cell in the dependent column
  REQUIRE(A(2, 2).is_rational());  // sqrt2 * sqrt2 = 2
  alpha(2, 2) = RatInterval::point(A(2, 2).as_rational());
  RealizationResult res2 = realize_rank_le_qm1(alpha, w);
  CHECK(res2.matrix(2, 2) == q(2));
  check_sound(alpha, res2);
}

TEST_CASE("rank <= q-2 realization") {
  // trivial: columns 3, 4 equal column 1, fully pinned
  RationalMatrix S(4, 4);
  RationalMatrix base{{q(1), q(0)}, {q(0), q(1)}, {q(1), q(1)}, {q(2), q(-1)}};
  for (std::size_t i = 0; i < 4; ++i) {
    S(i, 0) = base(i, 0);
    S(i, 1) = base(i, 1);
    S(i, 2) = base(i, 0);
    S(i, 3) = base(i, 0);
  }
  ColumnDep2Witness wr{to_quad(S),
                       {QuadExt(q(1)), QuadExt(q(0))},
                       {QuadExt(q(1)), QuadExt(q(0))}};
  IntervalMatrix degen = IntervalMatrix::degenerate_at(S);
  RealizationResult r0 = realize_rank_le_qm2(degen, wr);
  CHECK(r0.matrix == S);

  // planted with irrational coefficients
  QuadExt r2 = QuadExt::sqrt_of(2);
  InstanceSpec spec;
  spec.p = 5;
  spec.q = 4;
  spec.rank_class = "q-2";
  spec.seed = 23;
  spec.degenerate_fraction = q(1, 5);
  PlantedInstance inst = plant(spec);
  auto* w = std::get_if<ColumnDep2Witness>(&inst.witness);
  REQUIRE(w);
  ColSpanTrace trace;
  RealizationResult res = realize_rank_le_qm2(inst.alpha, *w, &trace);
  CHECK(rank(res.matrix) <= 2);
  check_sound(inst.alpha, res);
  (void)r2;
}

TEST_CASE("qm2 proof branches via planted targets") {
  auto drive = [&](const std::string& tag, std::uint64_t seed) {
    InstanceSpec spec;
    spec.rank_class = "q-2";
    spec.seed = seed;
    spec.case_targets = {tag};
    PlantedInstance inst = plant(spec);
    auto* w = std::get_if<ColumnDep2Witness>(&inst.witness);
    REQUIRE(w);
    ColSpanTrace trace;
    RealizationResult res = realize_rank_le_qm2(inst.alpha, *w, &trace);
    check_sound(inst.alpha, res);
    return trace;
  };
  auto has_case = [](const ColSpanTrace& t, const std::string& tag) {
    for (auto& [row, c] : t.row_cases)
      if (c == tag) return true;
    return false;
  };

  CHECK(has_case(drive("thm9-case0", 1), "case0"));
  CHECK(has_case(drive("thm9-case1.1", 2), "case1.1"));
  CHECK(has_case(drive("thm9-case1.2", 3), "case1.2"));
  CHECK(has_case(drive("thm9-case1.3", 4), "case1.3"));
  CHECK(has_case(drive("thm9-case2.1", 5), "case2.1"));
  CHECK(has_case(drive("thm9-case2.2", 6), "case2.2"));
  CHECK(has_case(drive("thm9-case3.1", 7), "case3.1"));
  ColSpanTrace t32 = drive("thm9-case3.2", 8);
  CHECK(has_case(t32, "case3.2"));
  CHECK(t32.coupled_rows_generic >= 1);
  ColSpanTrace t32d = drive("thm9-case3.2-coupled-degenerate", 9);
  CHECK(has_case(t32d, "case3.2"));
  CHECK(t32d.coupled_rows >= 1);
  CHECK(t32d.coupled_rows_generic == 0);
  CHECK(has_case(drive("thm9-case3.3", 10), "case3.3"));
  CHECK(has_case(drive("thm9-case3.4", 11), "case3.4"));
  CHECK(has_case(drive("thm9-ybyc", 12), "ybyc"));
}

TEST_CASE("exact rank realization") {
  // rational witness with a degenerate box comes back unchanged
  RationalMatrix S{{q(1), q(0), q(1)}, {q(0), q(1), q(1)}, {q(1), q(1), q(2)}};
  ColumnDep1Witness wr{to_quad(S), {QuadExt(q(1)), QuadExt(q(1))}};
  IntervalMatrix degen = IntervalMatrix::degenerate_at(S);
  RealizationResult r0 = realize_rank_exact(degen, wr, 2);
  CHECK(r0.matrix == S);
  CHECK(rank(r0.matrix) == 2);

  // planted rank q-1 with an irrational relation
  InstanceSpec s1;
  s1.p = 4;
  s1.q = 4;
  s1.rank_class = "q-1";
  s1.seed = 77;
  PlantedInstance i1 = plant(s1);
  RealizationResult res1 = realize_rank_exact(i1.alpha, i1.witness, 3);
  CHECK(rank(res1.matrix) == 3);
  check_sound(i1.alpha, res1);

  // planted rank q-2 = 2 at p=5, q=4
  InstanceSpec s2;
  s2.p = 5;
  s2.q = 4;
  s2.rank_class = "q-2";
  s2.seed = 78;
  PlantedInstance i2 = plant(s2);
  RealizationResult res2 = realize_rank_exact(i2.alpha, i2.witness, 2);
  CHECK(rank(res2.matrix) == 2);
  check_sound(i2.alpha, res2);
}

TEST_CASE("dispatcher honors the supported rank set") {
  IntervalMatrix m(12, 12);
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t j = 0; j < 12; ++j) m(i, j) = RatInterval(q(-1), q(1));
  try {
    realize(m, std::monostate{}, 3);
    FAIL("expected UnsupportedRank");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnsupportedRank);
    std::string msg = e.what();
    CHECK(msg.find("12x12") != std::string::npos);
    CHECK(msg.find("sign pattern") != std::string::npos);
  }

  // r = 0 dispatch
  Realized r0 = realize(m, std::monostate{}, 0);
  CHECK(std::holds_alternative<RealizationResult>(r0));

  // r = q dispatch through a witness
  InstanceSpec spec;
  spec.p = 3;
  spec.q = 3;
  spec.rank_class = "q";
  spec.seed = 5;
  PlantedInstance inst = plant(spec);
  Realized rq = realize(inst.alpha, inst.witness, 3);
  auto* res = std::get_if<RealizationResult>(&rq);
  REQUIRE(res);
  CHECK(rank(res->matrix) == 3);
  check_sound(inst.alpha, *res);
}

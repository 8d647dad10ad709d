#include <benchmark/benchmark.h>

#include "intrank/fullrank.hpp"
#include "intrank/instance.hpp"
#include "intrank/linalg.hpp"
#include "intrank/realize.hpp"

using namespace intrank;

namespace {

RationalMatrix random_rational(Rng& rng, std::size_t n) {
  RationalMatrix A(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) A(i, j) = rng.rational(9, 9);
  return A;
}

void BM_rank_bareiss(benchmark::State& state) {
  Rng rng(1);
  RationalMatrix A = random_rational(rng, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rank_bareiss(A));
}
BENCHMARK(BM_rank_bareiss)->Arg(4)->Arg(6)->Arg(8);

void BM_rank_field(benchmark::State& state) {
  Rng rng(1);
  RationalMatrix A = random_rational(rng, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rank_field(A));
}
BENCHMARK(BM_rank_field)->Arg(4)->Arg(6)->Arg(8);

void BM_square_full_rank(benchmark::State& state) {
  Rng rng(2);
  std::size_t p = state.range(0);
  IntervalMatrix m(p, p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) {
      Rational c = rng.rational(3, 2);
      m(i, j) = RatInterval(c - rat(1, 8), c + rat(1, 8));
    }
  for (auto _ : state) benchmark::DoNotOptimize(square_full_rank(m).full_rank);
}
BENCHMARK(BM_square_full_rank)->Arg(3)->Arg(4)->Arg(5);

void BM_rect_full_rank(benchmark::State& state) {
  Rng rng(3);
  std::size_t p = state.range(0) + 1, q = state.range(0);
  IntervalMatrix m(p, q);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < q; ++j) {
      Rational c = rng.rational(3, 2);
      m(i, j) = RatInterval(c - rat(1, 8), c + rat(1, 8));
    }
  for (auto _ : state) benchmark::DoNotOptimize(rect_full_rank(m).full_rank);
}
BENCHMARK(BM_rect_full_rank)->Arg(3)->Arg(4);

void BM_realize_rank2(benchmark::State& state) {
  InstanceSpec spec;
  spec.p = 4;
  spec.q = 4;
  spec.rank_class = "2";
  spec.seed = 11;
  spec.degenerate_fraction = rat(1, 5);
  PlantedInstance inst = plant(spec);
  const auto& w = std::get<Rank2Witness>(inst.witness);
  for (auto _ : state) {
    RealizationResult res = realize_rank2(inst.alpha, w);
    benchmark::DoNotOptimize(res.matrix.rows());
  }
}
BENCHMARK(BM_realize_rank2);

void BM_realize_qm2(benchmark::State& state) {
  InstanceSpec spec;
  spec.p = 5;
  spec.q = 4;
  spec.rank_class = "q-2";
  spec.seed = 11;
  PlantedInstance inst = plant(spec);
  const auto& w = std::get<ColumnDep2Witness>(inst.witness);
  for (auto _ : state) {
    RealizationResult res = realize_rank_le_qm2(inst.alpha, w);
    benchmark::DoNotOptimize(res.matrix.rows());
  }
}
BENCHMARK(BM_realize_qm2);

}  // namespace

BENCHMARK_MAIN();

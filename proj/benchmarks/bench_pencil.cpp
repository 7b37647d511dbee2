#include <benchmark/benchmark.h>

#include "finsub/pencil.hpp"
#include "finsub/sampling.hpp"

namespace {

finsub::SymPencil random_pencil(int N) {
  finsub::Rng rng(42);
  return {rng.symmetric(N), rng.symmetric(N)};
}

void BM_TypeSampled(benchmark::State& state) {
  const auto P = random_pencil(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(finsub::type_sampled(P, 1000));
}
BENCHMARK(BM_TypeSampled)->Arg(4)->Arg(8);

void BM_TypeExact(benchmark::State& state) {
  const auto P = random_pencil(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(finsub::type_exact(finsub::spectral_split(P)));
}
BENCHMARK(BM_TypeExact)->Arg(4)->Arg(8);

void BM_CommonZero(benchmark::State& state) {
  const auto P = finsub::build_canonical({0, {}, 3});
  finsub::Rng rng(7);
  finsub::Sym3 a(6), b(6);
  for (int i = 0; i < 6; ++i)
    for (int j = i; j < 6; ++j)
      for (int k = j; k < 6; ++k) {
        a.set(i, j, k, rng.uniform(-1, 1));
        b.set(i, j, k, rng.uniform(-1, 1));
      }
  for (auto _ : state) benchmark::DoNotOptimize(finsub::common_zero_search(P.A1, P.A2, a, b));
}
BENCHMARK(BM_CommonZero);

}  // namespace

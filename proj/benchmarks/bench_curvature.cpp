#include <benchmark/benchmark.h>

#include "finsub/curvature.hpp"
#include "finsub/example.hpp"

namespace {

void BM_RicciExample(benchmark::State& state) {
  const auto [norm, germ] = finsub::build_example(finsub::ExampleParams{});
  const Eigen::VectorXd u = Eigen::Vector2d(0.6, 0.8);
  for (auto _ : state) benchmark::DoNotOptimize(finsub::ricci_expanded(norm, germ, u).Ric);
}
BENCHMARK(BM_RicciExample);

void BM_RicciEuclidean(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int p = static_cast<int>(state.range(1));
  const auto norm = finsub::NormModel::euclidean(n + p);
  std::vector<Eigen::MatrixXd> d2;
  std::vector<finsub::Sym3> d3;
  for (int a = 0; a < p; ++a) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n) * (a + 1);
    m(0, n - 1) = m(n - 1, 0) = 0.5;
    d2.push_back(m);
    finsub::Sym3 t(n);
    t.set(0, 0, n - 1, 1.0);
    d3.push_back(t);
  }
  const auto germ = finsub::Germ::from_arrays(n, p, d2, d3);
  const Eigen::VectorXd u = Eigen::VectorXd::LinSpaced(n, 1.0, 2.0).normalized();
  for (auto _ : state) benchmark::DoNotOptimize(finsub::ricci_expanded(norm, germ, u).Ric);
}
BENCHMARK(BM_RicciEuclidean)->Args({2, 1})->Args({3, 2})->Args({4, 2});

void BM_RicciOracleJet(benchmark::State& state) {
  const auto [norm, germ] = finsub::build_example(finsub::ExampleParams{});
  const Eigen::VectorXd u = Eigen::Vector2d(0.6, 0.8);
  for (auto _ : state)
    benchmark::DoNotOptimize(finsub::ricci_oracle(norm, germ, u, finsub::OracleScheme::Jet));
}
BENCHMARK(BM_RicciOracleJet);

}  // namespace

#include <benchmark/benchmark.h>

#include <vector>

#include "finsub/jets.hpp"
#include "finsub/minkowski.hpp"

namespace {

void BM_JetProduct(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  finsub::Jet4 a = finsub::Jet4::variable(dim, 0, 0.7, 4);
  finsub::Jet4 b = finsub::Jet4::variable(dim, dim - 1, -0.3, 4);
  a = a * a + b;
  b = b * a + 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_JetProduct)->Arg(2)->Arg(3)->Arg(6);

void BM_RandersJet(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(dim, dim);
  Eigen::VectorXd b = Eigen::VectorXd::Constant(dim, 0.1);
  const auto norm = finsub::NormModel::randers(a, b);
  const Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(dim, 1.0, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(finsub::norm_jet(norm, y, 4));
}
BENCHMARK(BM_RandersJet)->Arg(3)->Arg(4)->Arg(6);

}  // namespace

#pragma once

// Deterministic sampling helpers and a small fork-join loop. Every random
// stream in the library is derived from a single 64-bit seed.

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace finsub {

/// splitmix64 finalizer; used to derive independent per-task seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0);
  double normal();
  int uniform_int(int lo, int hi);  // inclusive
  Eigen::VectorXd unit_vector(int dim);
  Eigen::MatrixXd symmetric(int dim, double scale = 1.0);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// `count` well-spread unit vectors in R^dim from a Halton sequence pushed
/// through Box-Muller. For dim == 2 this is the uniform angular grid.
std::vector<Eigen::VectorXd> sphere_grid(int dim, int count);

/// Runs body(i) for i in [0, count) on up to hardware_concurrency threads.
/// Results must be written to per-index slots; reductions happen afterwards
/// in index order so output does not depend on scheduling.
void parallel_for(int count, const std::function<void(int)>& body);

}  // namespace finsub

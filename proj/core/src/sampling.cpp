#include "finsub/sampling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace finsub {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Rng::uniform(double lo, double hi) {
  // 53 random mantissa bits; avoids implementation-defined distributions so
  // streams are identical across standard libraries.
  const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

int Rng::uniform_int(int lo, int hi) {
  if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(engine_() % span);
}

Eigen::VectorXd Rng::unit_vector(int dim) {
  Eigen::VectorXd v(dim);
  double n = 0.0;
  while (n < 1e-8) {
    for (int i = 0; i < dim; ++i) v[i] = normal();
    n = v.norm();
  }
  return v / n;
}

Eigen::MatrixXd Rng::symmetric(int dim, double scale) {
  Eigen::MatrixXd m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = uniform(-scale, scale);
  return m;
}

namespace {

double radical_inverse(int base, std::uint64_t i) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
                           41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89};

}  // namespace

std::vector<Eigen::VectorXd> sphere_grid(int dim, int count) {
  if (dim < 1 || count < 1) throw std::invalid_argument("sphere_grid: bad size");
  std::vector<Eigen::VectorXd> out;
  out.reserve(count);
  if (dim == 1) {
    for (int k = 0; k < count; ++k)
      out.push_back(Eigen::VectorXd::Constant(1, k % 2 == 0 ? 1.0 : -1.0));
    return out;
  }
  if (dim == 2) {
    for (int k = 0; k < count; ++k) {
      const double t = 2.0 * std::numbers::pi * k / count;
      Eigen::VectorXd v(2);
      v << std::cos(t), std::sin(t);
      out.push_back(v);
    }
    return out;
  }
  const int pairs = (dim + 1) / 2;
  if (2 * pairs > static_cast<int>(std::size(kPrimes)))
    throw std::invalid_argument("sphere_grid: dimension too large");
  for (std::uint64_t k = 1; static_cast<int>(out.size()) < count; ++k) {
    Eigen::VectorXd v(dim);
    for (int p = 0; p < pairs; ++p) {
      const double u1 = radical_inverse(kPrimes[2 * p], k);
      const double u2 = radical_inverse(kPrimes[2 * p + 1], k);
      if (u1 <= 0.0) continue;
      const double rad = std::sqrt(-2.0 * std::log(u1));
      v[2 * p] = rad * std::cos(2.0 * std::numbers::pi * u2);
      if (2 * p + 1 < dim) v[2 * p + 1] = rad * std::sin(2.0 * std::numbers::pi * u2);
    }
    const double n = v.norm();
    if (!(n > 1e-6)) continue;
    out.push_back(v / n);
  }
  return out;
}

void parallel_for(int count, const std::function<void(int)>& body) {
  if (count <= 0) return;
  const int workers = std::max(
      1, std::min<int>(count, static_cast<int>(std::thread::hardware_concurrency())));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  int error_index = count;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          // Keep the failure with the lowest index so the error is deterministic.
          std::lock_guard<std::mutex> lock(error_mu);
          if (i < error_index) {
            error = std::current_exception();
            error_index = i;
          }
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace finsub

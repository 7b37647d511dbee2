#pragma once

// Submanifold germs y^alpha = f^alpha(x), x in R^n, stored through their
// second and third derivatives at the origin.

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace finsub {

/// Fully symmetric n x n x n array.
class Sym3 {
 public:
  Sym3() = default;
  explicit Sym3(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n, 0.0) {}

  int n() const noexcept { return n_; }
  double operator()(int i, int j, int k) const { return data_[(i * n_ + j) * n_ + k]; }
  /// Writes all permutations of (i, j, k).
  void set(int i, int j, int k, double v);
  /// Raw entry access; the caller must keep the array symmetric.
  double& raw(int i, int j, int k) { return data_[(i * n_ + j) * n_ + k]; }

  /// T_ijk u^i u^j u^k
  double cubic(const Eigen::VectorXd& u) const;
  /// (T_ijk u^k)_ij
  Eigen::MatrixXd contract(const Eigen::VectorXd& u) const;

  /// Averages over the six index permutations and returns the largest
  /// deviation of the input from its symmetrization.
  double symmetrize();

  friend bool operator==(const Sym3& a, const Sym3& b) {
    return a.n_ == b.n_ && a.data_ == b.data_;
  }

 private:
  int n_ = 0;
  std::vector<double> data_;
};

struct Germ {
  int n = 0;
  int p = 0;
  std::vector<Eigen::MatrixXd> d2;  // p symmetric n x n, f^alpha_ij
  std::vector<Sym3> d3;             // p symmetric, f^alpha_ijk
  /// Largest asymmetry removed from the input when it was built.
  double input_asymmetry = 0.0;

  /// Symmetrizes the inputs; throws std::invalid_argument on shape errors.
  static Germ from_arrays(int n, int p, std::vector<Eigen::MatrixXd> d2,
                          std::vector<Sym3> d3);
  static Germ flat(int n, int p);

  /// kappa^alpha(u) = f^alpha_kl u^k u^l
  Eigen::VectorXd kappa(const Eigen::VectorXd& u) const;
  /// f^alpha_jls u^j u^l u^s
  Eigen::VectorXd cubic(const Eigen::VectorXd& u) const;
  /// Value of the cubic Taylor polynomial f^alpha(x).
  Eigen::VectorXd graph(const Eigen::VectorXd& x) const;

  friend bool operator==(const Germ& a, const Germ& b);
};

/// Largest asymmetry tolerated silently in germ input.
inline constexpr double kGermAsymmetryWarning = 1e-10;

struct AmbientFrame {
  Eigen::VectorXd origin;
  Eigen::MatrixXd basis;  // columns: ambient images of the coordinate axes

  static AmbientFrame identity(int dim);
};

/// Graph jets with a possibly nonzero gradient.
struct RawGraph {
  int n = 0;
  int p = 0;
  Eigen::MatrixXd d1;  // p x n
  std::vector<Eigen::MatrixXd> d2;
  std::vector<Sym3> d3;
};

/// Passes to coordinates y~^alpha = y^alpha - d1^alpha_i x^i, in which the
/// gradient vanishes. Second and third jets are unchanged; the frame absorbs
/// the shear. Throws NonInvertibleFrame for a singular frame.
std::pair<Germ, AmbientFrame> adapt_germ(const Eigen::MatrixXd& raw_d1,
                                         const std::vector<Eigen::MatrixXd>& raw_d2,
                                         const std::vector<Sym3>& raw_d3,
                                         const AmbientFrame& frame);
std::pair<Germ, AmbientFrame> adapt_germ(const RawGraph& raw, const AmbientFrame& frame);

/// Re-expresses the germ in ambient coordinates z = L y and rewrites it as a
/// graph over the first n of them. Throws NonInvertibleFrame when L or its
/// leading n x n block is singular.
std::pair<RawGraph, AmbientFrame> apply_linear_map(const Germ& germ,
                                                   const AmbientFrame& frame,
                                                   const Eigen::MatrixXd& L);

}  // namespace finsub

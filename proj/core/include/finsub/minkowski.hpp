#pragma once

// Minkowski norms, represented through H = F^2 / 2.

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "finsub/expr.hpp"
#include "finsub/jets.hpp"

namespace finsub {

struct EuclideanNorm {};

/// F(y) = sqrt(y^T a y) + b . y
struct RandersNorm {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
};

/// The cylindrical three-dimensional family
///   H = A r^2 + eps1 z r sin(3 theta) + z^2 (B + eps2 cos(6 theta)),
/// evaluated in Cartesian form. Undefined on the y3 axis.
struct Example4Norm {
  double A = 0.0;
  double B = 0.0;
  double eps1 = 0.0;
  double eps2 = 0.0;
};

/// H given directly as an expression in y1..y<dim>.
struct ExpressionNorm {
  std::string text;
  ExprTree tree;
};

class NormModel {
 public:
  using Source = std::variant<EuclideanNorm, RandersNorm, Example4Norm, ExpressionNorm>;

  static NormModel euclidean(int dim);
  /// Throws std::invalid_argument unless a is SPD and b^T a^{-1} b < 1.
  static NormModel randers(Eigen::MatrixXd a, Eigen::VectorXd b);
  /// Throws std::invalid_argument unless all parameters are positive.
  static NormModel example4(double A, double B, double eps1, double eps2);
  static NormModel expression(std::string text, int dim);

  int dim() const noexcept { return dim_; }
  const Source& source() const noexcept { return source_; }
  /// "euclidean", "randers", "example4" or "expression".
  std::string kind() const;

  /// Zero vector, or a direction on which the model is not defined.
  bool excluded(std::span<const double> y) const;
  bool excluded(const Eigen::VectorXd& y) const {
    return excluded(std::span<const double>(y.data(), y.size()));
  }

  /// H(y) by direct evaluation. Throws SingularDirection off the domain.
  double value(std::span<const double> y) const;
  double value(const Eigen::VectorXd& y) const {
    return value(std::span<const double>(y.data(), y.size()));
  }

  /// H applied to jets of the ambient coordinates (any jet dimension).
  /// Propagates the jet arithmetic errors.
  Jet4 evaluate(std::span<const Jet4> y) const;

 private:
  NormModel(int dim, Source source) : dim_(dim), source_(std::move(source)) {}

  int dim_ = 0;
  Source source_;
};

/// Jet of H centred at `base` in the dim() ambient variables.
/// Throws SingularDirection for excluded directions or when the jet cannot be
/// formed there.
Jet4 norm_jet(const NormModel& model, const Eigen::VectorXd& base,
              int order = kMaxJetOrder);

/// Example4 as expression text, parameters printed with full precision.
std::string example4_expression(double A, double B, double eps1, double eps2);

struct ValidationOptions {
  /// Extra probes near excluded rays (only for models that have them).
  int near_ray_samples = 200;
  /// Half-angle (radians) of a cone around excluded rays that is skipped.
  double axis_cone = 0.0;
  std::uint64_t seed = 0;
  double tolerance = 1e-9;
};

struct ValidationReport {
  int samples = 0;   // directions actually evaluated
  int skipped = 0;   // excluded or inside the axis cone
  /// max over samples of |y.grad H - 2H| / (1 + |H|)
  double euler_residual = 0.0;
  /// max over samples of |Hess H y - grad H| / (1 + |H|)
  double hessian_euler_residual = 0.0;
  double min_eigenvalue = 0.0;
  Eigen::VectorXd argmin;
  bool valid = false;
  std::vector<std::string> notes;
};

/// Sampled homogeneity and convexity check on random unit directions.
ValidationReport validate_norm(const NormModel& model, int samples,
                               const ValidationOptions& options = {});

}  // namespace finsub

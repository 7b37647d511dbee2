#pragma once

// A surface in a three-dimensional Minkowski space whose flag curvature at
// the origin is positive while its Gauss curvature there is negative.

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "finsub/germ.hpp"
#include "finsub/minkowski.hpp"

namespace finsub {

struct ExampleParams {
  double A = 10.0;
  double B = 10.0;
  double eps1 = 0.1;
  double eps2 = 0.1;
  double eps3 = 0.001;
  double C = 100.0;

  /// A, B, eps1, eps2 > 0 (the norm needs them); eps3, C >= 0.
  void validate() const;
  friend bool operator==(const ExampleParams&, const ExampleParams&) = default;
};

/// Norm with the given constants and the germ with f11 = f22 = 1,
/// f12 = sqrt(1 + eps3), f112 = C, f222 = -C, other third derivatives 0.
std::pair<NormModel, Germ> build_example(const ExampleParams& params);

struct ClosedFormRic {
  double ric = 0.0;
  double term1 = 0.0;  // cubic term
  double term2 = 0.0;  // P(u) (f11 f22 - f12^2) term
  double term3 = 0.0;  // Q(u) term
  double P = 0.0;
  double Q11 = 0.0;
  double Q12 = 0.0;
  double Q22 = 0.0;
};

ClosedFormRic ric_closed_form(const ExampleParams& params, const Eigen::Vector2d& u);

struct ExampleConstants {
  double a1 = 0.0;  // 4AB + 4A eps2 - 9 eps1^2
  double a2 = 0.0;  // A eps2 - eps1^2
  double T_10 = 0.0;
  /// T at (1, sqrt 3) and (1, -sqrt 3): (2 a1 det + 9 a2 (f11 + 3 f22 + 2 s sqrt3 f12)^2)
  /// / (2 A^2) with s = +1 and s = -1.
  double T_1p = 0.0;
  double T_1m = 0.0;
};

ExampleConstants example_constants(const ExampleParams& params);

struct ExampleRow {
  double angle = 0.0;
  double ric_closed = 0.0;
  double ric_pipeline = 0.0;
};

struct ExampleReport {
  ExampleParams params;
  double gauss_determinant = 0.0;  // f11 f22 - f12^2 from the germ entries
  double induced_gauss_curvature = 0.0;  // Euclidean ambient metric
  double min_ric = 0.0;
  double argmin_angle = 0.0;
  double max_discrepancy = 0.0;  // relative, closed form vs pipeline
  bool norm_valid = false;
  double norm_axis_cone = 0.0;
  ExampleConstants constants;
  bool success = false;
  std::vector<std::string> notes;
  std::vector<ExampleRow> rows;
};

struct ExampleOptions {
  int grid = 720;            // uniform angles; >= 360
  int refine = 50;           // extra angles within +-0.01 rad of each cubic zero line
  double discrepancy_tol = 1e-6;
  int norm_samples = 2000;
  std::uint64_t seed = 0;
};

ExampleReport verify_example(const ExampleParams& params, const ExampleOptions& options = {});

/// Directions used by verify_example, as angles in [0, 2 pi), sorted.
std::vector<double> example_angles(int grid, int refine);

using ExampleAcceptance = std::function<bool(const ExampleReport&)>;

/// Scans A, B in {10, 100, 1000}, eps1, eps2, eps3 in {0.1, 0.01, 0.001} and
/// C in {100, 1000, 10000} (nested in that order) and returns the first
/// candidate accepted (default: verify_example success). At most `budget`
/// candidates are verified; throws NoParamsFound otherwise.
std::pair<ExampleParams, ExampleReport> find_example_params(
    int budget, const ExampleOptions& options = {}, const ExampleAcceptance& accept = {});

}  // namespace finsub

#pragma once

// Curvature of the induced Finsler metric at the origin of an adapted germ.
// All derivatives in the direction variable u are jets of H at (u, 0).

#include <Eigen/Dense>

#include <array>
#include <iosfwd>
#include <vector>

#include "finsub/germ.hpp"
#include "finsub/minkowski.hpp"

namespace finsub {

struct CurvatureReport {
  Eigen::VectorXd u;
  double S = 0.0;         // F(u, 0)
  Eigen::MatrixXd g;      // n x n
  Eigen::MatrixXd h;      // n x p, h(i, alpha)
  Eigen::VectorXd kappa;  // p
  Eigen::VectorXd G;      // n
  Eigen::VectorXd xi;     // p
  Eigen::MatrixXd zeta;   // p x p
  Eigen::MatrixXd eta;    // p x p
  std::vector<Eigen::MatrixXd> rho;  // n entries of p x p, rho[i](alpha, beta)
  Eigen::MatrixXd Rik;    // n x n, Rik(i, k)
  double Ric = 0.0;
  /// Ric split into xi.cubic, the zeta trace term, -eta kappa kappa and
  /// -rho kappa f u, in that order.
  std::array<double, 4> ric_terms{};
};

/// g_ij(0, u) = H_ij(u, 0). Throws SingularDirection or NonPDTensor.
Eigen::MatrixXd fundamental_tensor(const NormModel& norm, const Germ& germ,
                                   const Eigen::VectorXd& u);

/// G^i(0, u) = h^i_alpha kappa^alpha / 2.
Eigen::VectorXd spray_at_origin(const NormModel& norm, const Germ& germ,
                                const Eigen::VectorXd& u);

CurvatureReport ricci_expanded(const NormModel& norm, const Germ& germ,
                               const Eigen::VectorXd& u);

enum class OracleScheme { Jet, FiniteDifference };

struct OracleOptions {
  double u_step = 1e-4;  // scaled by (1 + |u|)
  double x_step = 1e-4;
};

/// Ric from the spray definition of the Ricci tensor, independent of
/// ricci_expanded. The jet scheme differentiates the definition of G^i;
/// the finite-difference scheme differences the closed spray formula with
/// one Richardson level. Throws StepUnderflow for unusable steps.
double ricci_oracle(const NormModel& norm, const Germ& germ, const Eigen::VectorXd& u,
                    OracleScheme scheme, const OracleOptions& options = {});

struct ZetaCheck {
  Eigen::MatrixXd zeta;
  /// max over alpha of |zeta_aa - det H[n + alpha] / det H[n]|, where H[n+alpha]
  /// is the top-left n x n block bordered by row and column alpha.
  double residual = 0.0;
};

/// Throws NonPDZeta when zeta is not positive definite.
ZetaCheck zeta_check(const NormModel& norm, const Germ& germ, const Eigen::VectorXd& u);

/// One header row, then one row per report; numbers printed with %.17g.
void write_curvature_csv(std::ostream& out, const std::vector<CurvatureReport>& rows);

}  // namespace finsub

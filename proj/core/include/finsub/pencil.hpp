#pragma once

// Two-parameter families lambda1 A1 + lambda2 A2 of real symmetric forms.

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "finsub/germ.hpp"

namespace finsub {

struct SymPencil {
  Eigen::MatrixXd A1;
  Eigen::MatrixXd A2;

  /// Checks shape and symmetry (1e-12, relative) and symmetrizes.
  static SymPencil make(Eigen::MatrixXd A1, Eigen::MatrixXd A2);

  int dim() const noexcept { return static_cast<int>(A1.rows()); }
  /// cos(theta) A1 + sin(theta) A2
  Eigen::MatrixXd at_angle(double theta) const;
};

struct Inertia {
  int pos = 0;
  int neg = 0;
  int zero = 0;

  int rank() const noexcept { return pos + neg; }
  friend bool operator==(const Inertia&, const Inertia&) = default;
};

/// 1e-9 * (1 + spectral radius of M)
double default_tolerance(const Eigen::MatrixXd& M);

/// Eigenvalue counts above tol, below -tol and in between. A negative tol
/// selects default_tolerance(M).
Inertia inertia(const Eigen::MatrixXd& M, double tol = -1.0);

/// Minimum positive inertia over maximal-rank members, scanning
/// theta_k = pi (k + 1/2) / samples and the antipodal members by sign
/// symmetry. Throws ZeroPencil when A1 = A2 = 0.
int type_sampled(const SymPencil& P, int samples);

/// Simultaneous normal form of a semisimple pencil.
///
/// real_pairs hold (phi1(v), phi2(v)) for a basis of real eigenvectors
/// v, scaled to |beta| = 1 when A2 is invertible and to unit length
/// otherwise. complex_pairs hold (rho, nu), nu > 0, for the eigenvalues
/// rho +- i nu of M^{-1} K, where M = cos(t) A1 + sin(t) A2 is the invertible
/// member used for the split (t = basis_angle, pi/2 when A2 is usable) and
/// K = sin(t) A1 - cos(t) A2.
struct SpectralData {
  std::vector<Eigen::Vector2d> real_pairs;
  std::vector<Eigen::Vector2d> complex_pairs;
  double basis_angle = 1.5707963267948966;

  int r() const noexcept { return static_cast<int>(real_pairs.size()); }
  int s() const noexcept { return static_cast<int>(complex_pairs.size()); }
  int dim() const noexcept { return r() + 2 * s(); }
};

/// Throws SingularA2 when no member of the pencil is invertible, and
/// NotSemisimple when an eigenvalue lacks a full eigenspace.
SpectralData spectral_split(const SymPencil& P);

/// A block-diagonal pencil congruent to the one described by S.
SymPencil to_pencil(const SpectralData& S);

/// s + min over maximal-rank members of #{i : lambda . (alpha_i, beta_i) > 0}.
int type_exact(const SpectralData& S);

struct GenericityReport {
  bool det_not_identically_zero = false;
  bool semisimple = false;
  bool smooth_intersection = false;
  /// smooth_intersection came from sampled minimization, not spectral data.
  bool smooth_sampled = false;
  std::optional<SpectralData> spectral;
  std::vector<std::string> notes;
};

GenericityReport genericity_check(const SymPencil& P, std::uint64_t seed = 0);

/// Data of the standard pencil: 2l - 1 direction blocks of sizes n_j at angles
/// 2 pi j / (2l - 1), plus s hyperbolic pairs.
struct CanonicalData {
  int l = 0;
  std::vector<int> n;
  int s = 0;

  int r() const;
  int dim() const { return r() + 2 * s; }
  /// Throws std::invalid_argument when the data violate the shape rules.
  void validate() const;
  /// d_j = n_j + ... + n_{j+l-2} (indices mod 2l - 1), for l >= 2.
  std::vector<int> d() const;
  /// s + min d_j for l >= 2, s otherwise.
  int type_formula() const;

  friend bool operator==(const CanonicalData&, const CanonicalData&) = default;
};

SymPencil build_canonical(const CanonicalData& C);

/// Reads canonical data off spectral data whose real directions already sit
/// at canonical angles (within 1e-6). Returns nullopt otherwise.
std::optional<CanonicalData> to_canonical(const SpectralData& S, double tol = 1e-6);

struct TopologyLabel {
  enum class Case {
    Empty,
    UnitTangentBundleOfSphere,  // spheres = {s - 1}
    ProductTwoSpheres,          // spheres = {s - 1, r + s - 2}
    ProductThreeSpheres,        // spheres = {n1 - 1, n2 - 1, n3 - 1}
    ConnectedSum,               // summands = (d_j + s - 1, r - d_j + s - 2)
  };
  Case kind = Case::Empty;
  std::vector<int> spheres;
  std::vector<std::pair<int, int>> summands;

  /// Manifold dimension; -1 for Empty.
  int dimension() const;
  std::string describe() const;
};

/// Diffeomorphism type of the common zero set of the canonical forms on the
/// unit sphere.
TopologyLabel classify_topology(const CanonicalData& C);

/// Adds eps * S to A1, S symmetric with entries uniform in [-1, 1] drawn from
/// `seed`; A2 is unchanged.
SymPencil perturb(const SymPencil& P, double eps, std::uint64_t seed);

struct CommonZeroResult {
  bool found = false;
  Eigen::VectorXd point;  // unit vector when found, best point otherwise
  double residual = 0.0;  // sqrt(phi1^2 + phi2^2 + psi1^2 + psi2^2) at point
  int descents = 0;
};

struct CommonZeroOptions {
  int budget = 64;  // number of multistart descents
  std::uint64_t seed = 0;
  double objective_tol = 1e-16;
};

/// Multistart search for a unit vector on which two quadratic and two cubic
/// forms vanish. Projected gradient descent on the sphere followed by a damped
/// Gauss-Newton polish.
CommonZeroResult common_zero_search(const Eigen::MatrixXd& phi1, const Eigen::MatrixXd& phi2,
                                    const Sym3& psi1, const Sym3& psi2,
                                    const CommonZeroOptions& options = {});

/// Minimizes |r(x)|^2 over the unit sphere from x0. `residual` fills r and its
/// Jacobian J (rows: residual components, columns: coordinates).
struct SphereResidual {
  virtual ~SphereResidual() = default;
  virtual int size() const = 0;
  virtual void eval(const Eigen::VectorXd& x, Eigen::VectorXd& r, Eigen::MatrixXd& J) const = 0;
};

struct SphereDescent {
  Eigen::VectorXd x;
  double objective = 0.0;
};

SphereDescent sphere_least_squares(const SphereResidual& f, const Eigen::VectorXd& x0,
                                   double objective_tol);

}  // namespace finsub

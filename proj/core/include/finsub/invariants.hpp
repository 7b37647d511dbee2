#pragma once

// Pointwise invariants of a germ (relative nullity, type) and auditors for
// the local curvature propositions.

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "finsub/germ.hpp"
#include "finsub/minkowski.hpp"

namespace finsub {

/// Type of a point. exact is false when the value comes from sampling; for
/// codimension >= 3 lower == upper is the sampled minimum.
struct TypeValue {
  int lower = 0;
  int upper = 0;
  bool exact = true;

  friend bool operator==(const TypeValue&, const TypeValue&) = default;
};

struct NullSpace {
  int mu = 0;
  Eigen::MatrixXd basis;  // n x mu, orthonormal columns
};

/// Common kernel of the second jet blocks. Singular values of the stacked
/// (p n) x n matrix at or below tol * sigma_max count as zero.
NullSpace nullity(const Germ& germ, double tol = 1e-9);

/// Orthonormal basis (n x (n - mu)) of the complement of the null space.
Eigen::MatrixXd null_complement(const NullSpace& L);

struct TypeOptions {
  int normal_samples = 10000;  // codimension >= 3, and the fallback for p = 2
  std::uint64_t seed = 0;
};

TypeValue point_type(const Germ& germ, const TypeOptions& options = {});

struct PointInvariants {
  int mu = 0;
  TypeValue type;
  Eigen::MatrixXd null_basis;
};

PointInvariants point_invariants(const Germ& germ, double tol = 1e-9,
                                 const TypeOptions& options = {});

enum class Verdict { Consistent, Violation };

std::string to_string(Verdict v);

struct AuditOptions {
  int grid = 0;              // 0: 720 angles for n = 2, 4096 sphere points otherwise
  double ric_tol = 1e-8;     // Ric >= -ric_tol counts as nonnegative
  double tol = 1e-9;         // rank and kernel decisions
  std::uint64_t seed = 0;
  int witness_budget = 64;   // common-zero starts used to probe the isotropic cone
};

struct AuditReport {
  double min_ric = 0.0;
  Eigen::VectorXd argmin;
  TypeValue type;
  int mu = 0;
  Verdict verdict = Verdict::Consistent;
  std::vector<std::string> notes;
  double ric_tol = 0.0;
  int grid = 0;
};

/// Hypersurface case: Ric >= 0 at the point and type != 1 imply the second
/// fundamental form is semidefinite.
AuditReport audit_hypersurface(const NormModel& norm, const Germ& germ,
                               const AuditOptions& options = {});

/// Codimension 2: Ric >= 0 at the point implies type <= 2.
AuditReport audit_codim2(const NormModel& norm, const Germ& germ,
                         const AuditOptions& options = {});

struct RuledAuditReport : AuditReport {
  Eigen::VectorXd direction;  // normalized ruling direction
  double ric_direction = 0.0;
  double ric_reduced = 0.0;   // -zeta_ab (A_b u)^T g^{-1} (A_a u)
  double kernel_defect = 0.0; // sum_a |A_a u|^2
};

/// Along a ruling direction (kappa and the cubic vanish to 1e-10) compares Ric
/// with the reduced formula and checks that Ric >= 0 forces u into the null
/// space. Throws NotRuledDirection when the direction is not ruled.
RuledAuditReport audit_ruled(const NormModel& norm, const Germ& germ,
                             const Eigen::VectorXd& ruling_direction,
                             const AuditOptions& options = {});

/// Directions used by the audits.
std::vector<Eigen::VectorXd> audit_directions(int n, int grid);

}  // namespace finsub

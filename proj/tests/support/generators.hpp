#pragma once

// Random inputs and independent reference values shared by the tests.

#include <Eigen/Dense>

#include "finsub/germ.hpp"
#include "finsub/minkowski.hpp"
#include "finsub/pencil.hpp"
#include "finsub/sampling.hpp"

namespace finsub::testing {

Sym3 random_cubic(Rng& rng, int n, double scale = 1.0);
Germ random_germ(Rng& rng, int n, int p, double scale = 1.0);

/// a = I + 0.3 S (S random symmetric, shifted to keep a SPD), |b|_a <= 0.6.
NormModel random_randers(Rng& rng, int dim);

Eigen::MatrixXd random_orthogonal(Rng& rng, int n);
/// Invertible matrix with condition number below 50.
Eigen::MatrixXd random_invertible(Rng& rng, int n);

/// Gauss equation in a Euclidean space:
/// sum_a (tr A_a kappa_a(u) - |A_a u|^2).
double gauss_equation_ric(const Germ& germ, const Eigen::VectorXd& u);

/// A pencil accepted by spectral_split whose critical angles are at least
/// `separation` apart, so sampling cannot miss an arc.
SymPencil random_generic_pencil(Rng& rng, int N, double separation = 1e-2);

/// Random spectral data with r real and s complex pairs.
SpectralData random_spectral(Rng& rng, int r, int s);

/// Germ whose ruling direction is `u`: kappa(u) = 0 and the cubic vanishes at u.
/// With in_kernel, every d2 block also annihilates u.
Germ random_ruled_germ(Rng& rng, int n, int p, const Eigen::VectorXd& u, bool in_kernel);

/// Transform a germ by a random ambient linear change and re-adapt it.
Germ random_ambient_change(Rng& rng, const Germ& germ);

}  // namespace finsub::testing

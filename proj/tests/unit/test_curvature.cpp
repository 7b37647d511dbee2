#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "finsub/curvature.hpp"
#include "finsub/errors.hpp"
#include "finsub/example.hpp"
#include "finsub/sampling.hpp"
#include "generators.hpp"

using finsub::Germ;
using finsub::NormModel;
using finsub::Sym3;

namespace {

Germ hypersurface(const Eigen::MatrixXd& d2) {
  return Germ::from_arrays(static_cast<int>(d2.rows()), 1, {d2}, {Sym3(static_cast<int>(d2.rows()))});
}

// S^2(x, u) = 2 H(u, Df(x) u) for the cubic Taylor graph.
double induced_square(const NormModel& m, const Germ& g, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& u) {
  Eigen::VectorXd y(g.n + g.p);
  y.head(g.n) = u;
  for (int a = 0; a < g.p; ++a)
    y[g.n + a] = u.dot(g.d2[a] * x) + 0.5 * x.dot(g.d3[a].contract(u) * x);
  return 2.0 * m.value(y);
}

// G^i = 1/4 g^il (d^2 S^2 / dx^k du^l u^k - d S^2 / dx^l), by central differences.
Eigen::VectorXd spray_by_definition(const NormModel& m, const Germ& g, const Eigen::VectorXd& u) {
  const int n = g.n;
  const double h = 1e-4;
  const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd rhs(n);
  Eigen::MatrixXd gm(n, n);
  for (int l = 0; l < n; ++l) {
    const Eigen::VectorXd el = Eigen::VectorXd::Unit(n, l);
    const double dx = (induced_square(m, g, h * el, u) - induced_square(m, g, -h * el, u)) / (2 * h);
    double mixed = 0.0;
    for (int k = 0; k < n; ++k) {
      const Eigen::VectorXd ek = Eigen::VectorXd::Unit(n, k);
      const double f = induced_square(m, g, h * ek, u + h * el) - induced_square(m, g, -h * ek, u + h * el) -
                       induced_square(m, g, h * ek, u - h * el) + induced_square(m, g, -h * ek, u - h * el);
      mixed += f / (4 * h * h) * u[k];
    }
    rhs[l] = mixed - dx;
    for (int k = 0; k < n; ++k) {
      const Eigen::VectorXd ek = Eigen::VectorXd::Unit(n, k);
      gm(l, k) = 0.5 * (induced_square(m, g, x0, u + h * el + h * ek) - induced_square(m, g, x0, u + h * el - h * ek) -
                        induced_square(m, g, x0, u - h * el + h * ek) + induced_square(m, g, x0, u - h * el - h * ek)) /
                 (4 * h * h);
    }
  }
  return 0.25 * gm.inverse() * rhs;
}

}  // namespace

TEST(Curvature, EuclideanFundamentalTensor) {
  finsub::Rng rng(2);
  const Germ g = finsub::testing::random_germ(rng, 2, 1);
  const auto gt = finsub::fundamental_tensor(NormModel::euclidean(3), g, Eigen::Vector2d(1, 0));
  EXPECT_TRUE(gt.isApprox(Eigen::Matrix2d::Identity(), 1e-15));
}

TEST(Curvature, Example4FundamentalTensor) {
  const finsub::ExampleParams P;
  const auto [norm, germ] = finsub::build_example(P);
  const auto gt = finsub::fundamental_tensor(norm, germ, Eigen::Vector2d(1, 0));
  EXPECT_NEAR(gt(0, 0), 2 * P.A, 1e-12);
  EXPECT_NEAR(gt(1, 1), 2 * P.A, 1e-12);
  EXPECT_NEAR(gt(0, 1), 0.0, 1e-12);
}

TEST(Curvature, FundamentalTensorDegreeZero) {
  finsub::Rng rng(4);
  const auto m = finsub::testing::random_randers(rng, 4);
  const Germ g = finsub::testing::random_germ(rng, 3, 1);
  const Eigen::VectorXd u = rng.unit_vector(3);
  EXPECT_TRUE(finsub::fundamental_tensor(m, g, u).isApprox(finsub::fundamental_tensor(m, g, 3.7 * u), 1e-12));
}

TEST(Curvature, ParaboloidRicci) {
  for (int n = 2; n <= 4; ++n) {
    const Germ g = hypersurface(Eigen::MatrixXd::Identity(n, n));
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    u[0] = 1.0;
    const auto norm = NormModel::euclidean(n + 1);
    EXPECT_NEAR(finsub::ricci_expanded(norm, g, u).Ric, n - 1, 1e-12);
    EXPECT_NEAR(finsub::ricci_oracle(norm, g, u, finsub::OracleScheme::Jet), n - 1, 1e-9);
    EXPECT_NEAR(finsub::ricci_oracle(norm, g, u, finsub::OracleScheme::FiniteDifference), n - 1, 1e-6);
  }
}

TEST(Curvature, HyperbolicParaboloid) {
  const Germ g = hypersurface(Eigen::Vector2d(2, -2).asDiagonal().toDenseMatrix());
  const auto r = finsub::ricci_expanded(NormModel::euclidean(3), g, Eigen::Vector2d(1, 0));
  EXPECT_NEAR(r.Ric, -4.0, 1e-12);
  EXPECT_NEAR(r.Ric, finsub::testing::gauss_equation_ric(g, Eigen::Vector2d(1, 0)), 1e-12);
}

TEST(Curvature, FlatGermIsFlat) {
  finsub::Rng rng(6);
  const auto m = finsub::testing::random_randers(rng, 5);
  const auto r = finsub::ricci_expanded(m, Germ::flat(3, 2), rng.unit_vector(3));
  EXPECT_EQ(r.Ric, 0.0);
  EXPECT_EQ(r.G.norm(), 0.0);
}

TEST(Curvature, ReportConsistency) {
  finsub::Rng rng(8);
  const auto m = finsub::testing::random_randers(rng, 4);
  const Germ g = finsub::testing::random_germ(rng, 2, 2);
  const Eigen::VectorXd u = rng.unit_vector(2);
  const auto r = finsub::ricci_expanded(m, g, u);
  EXPECT_NEAR(r.Ric, r.Rik.trace(), 1e-12 * (1 + std::abs(r.Ric)));
  EXPECT_NEAR(r.Ric, r.ric_terms[0] + r.ric_terms[1] + r.ric_terms[2] + r.ric_terms[3],
              1e-12 * (1 + std::abs(r.Ric)));
  EXPECT_LE((r.kappa - g.kappa(u)).norm(), 1e-14);
  EXPECT_LE((r.G - 0.5 * r.h * r.kappa).norm(), 1e-13);
  EXPECT_LE((r.G - finsub::spray_at_origin(m, g, u)).norm(), 1e-13);
  EXPECT_NEAR(r.S, std::sqrt(2 * m.value(Eigen::Vector4d(u[0], u[1], 0, 0))), 1e-14);
  EXPECT_LE((r.zeta - r.zeta.transpose()).norm(), 1e-13);
  EXPECT_EQ(static_cast<int>(r.rho.size()), 2);
}

TEST(Curvature, SprayMatchesDefinition) {
  finsub::Rng rng(10);
  for (int trial = 0; trial < 5; ++trial) {
    const auto m = finsub::testing::random_randers(rng, 4);
    const Germ g = finsub::testing::random_germ(rng, 2, 2);
    const Eigen::VectorXd u = rng.unit_vector(2);
    const Eigen::VectorXd G = finsub::spray_at_origin(m, g, u);
    EXPECT_LE((G - spray_by_definition(m, g, u)).norm(), 1e-6 * (1 + G.norm()));
  }
  const auto [norm, germ] = finsub::build_example(finsub::ExampleParams{});
  const Eigen::Vector2d u(1, 0);
  EXPECT_LE((finsub::spray_at_origin(norm, germ, u) - spray_by_definition(norm, germ, u)).norm(), 1e-6);
}

TEST(Curvature, Homogeneity) {
  finsub::Rng rng(12);
  const auto m = finsub::testing::random_randers(rng, 4);
  const Germ g = finsub::testing::random_germ(rng, 3, 1);
  const Eigen::VectorXd u = rng.unit_vector(3);
  const auto a = finsub::ricci_expanded(m, g, u);
  const auto b = finsub::ricci_expanded(m, g, 2.5 * u);
  EXPECT_NEAR(b.Ric, 6.25 * a.Ric, 1e-10 * (1 + std::abs(b.Ric)));
  EXPECT_LE((b.G - 6.25 * a.G).norm(), 1e-10 * (1 + b.G.norm()));
  EXPECT_LE((b.h - a.h).norm(), 1e-12);
  EXPECT_LE((b.zeta - a.zeta).norm(), 1e-12);
}

TEST(Curvature, ExampleAgreesWithClosedForm) {
  const finsub::ExampleParams P;
  const auto [norm, germ] = finsub::build_example(P);
  for (double t : {0.0, 0.3, 1.0471975511965976, 2.0, 4.1}) {
    const Eigen::Vector2d u(std::cos(t), std::sin(t));
    const double pipe = finsub::ricci_expanded(norm, germ, u).Ric;
    const double closed = finsub::ric_closed_form(P, u).ric;
    EXPECT_NEAR(pipe, closed, 1e-8 * std::max(std::abs(closed), 1e-12)) << t;
  }
}

TEST(Curvature, ZetaEuclideanIsIdentity) {
  finsub::Rng rng(14);
  const auto z = finsub::zeta_check(NormModel::euclidean(5), finsub::testing::random_germ(rng, 3, 2),
                                    rng.unit_vector(3));
  EXPECT_TRUE(z.zeta.isApprox(Eigen::Matrix2d::Identity(), 1e-15));
}

TEST(Curvature, ZetaExampleBorderedDeterminant) {
  const auto [norm, germ] = finsub::build_example(finsub::ExampleParams{});
  const auto z = finsub::zeta_check(norm, germ, Eigen::Vector2d(1, 0));
  // Independent evaluation of det H[3] / det H[2] from the Hessian.
  const auto j = finsub::norm_jet(norm, Eigen::Vector3d(1, 0, 0), 2);
  Eigen::Matrix3d h;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) h(a, b) = finsub::jet_partial(j, {a, b});
  const double ratio = h.determinant() / h.topLeftCorner<2, 2>().determinant();
  EXPECT_NEAR(z.zeta(0, 0), ratio, 1e-10);
  EXPECT_LE(z.residual, 1e-10);
}

TEST(Curvature, ZetaPositiveForRanders) {
  finsub::Rng rng(16);
  for (int i = 0; i < 200; ++i) {
    const int n = rng.uniform_int(1, 3), p = rng.uniform_int(1, 2);
    const auto m = finsub::testing::random_randers(rng, n + p);
    const auto z = finsub::zeta_check(m, Germ::flat(n, p), rng.unit_vector(n));
    EXPECT_GT(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(z.zeta).eigenvalues()[0], 0.0);
  }
}

TEST(Curvature, InputErrors) {
  const auto m = NormModel::euclidean(3);
  const Germ g = Germ::flat(2, 1);
  EXPECT_THROW(finsub::ricci_expanded(m, g, Eigen::Vector2d::Zero()), finsub::SingularDirection);
  EXPECT_THROW(finsub::ricci_expanded(m, g, Eigen::Vector3d(1, 0, 0)), std::invalid_argument);
  EXPECT_THROW(finsub::ricci_expanded(NormModel::euclidean(4), g, Eigen::Vector2d(1, 0)),
               std::invalid_argument);
  finsub::OracleOptions tiny;
  tiny.u_step = 1e-300;
  EXPECT_THROW(finsub::ricci_oracle(m, g, Eigen::Vector2d(1, 0), finsub::OracleScheme::FiniteDifference, tiny),
               finsub::StepUnderflow);
}

TEST(Curvature, CsvHasHeaderAndRows) {
  const Germ g = hypersurface(Eigen::Matrix2d::Identity());
  std::vector<finsub::CurvatureReport> rows;
  for (double t : {0.0, 1.0}) rows.push_back(finsub::ricci_expanded(NormModel::euclidean(3), g, Eigen::Vector2d(std::cos(t), std::sin(t))));
  std::ostringstream out;
  finsub::write_curvature_csv(out, rows);
  const std::string s = out.str();
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 3);
  EXPECT_NE(s.find("Ric"), std::string::npos);
}

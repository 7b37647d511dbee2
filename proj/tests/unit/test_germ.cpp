#include <gtest/gtest.h>

#include "finsub/errors.hpp"
#include "finsub/germ.hpp"
#include "finsub/invariants.hpp"
#include "finsub/sampling.hpp"
#include "generators.hpp"

using finsub::Germ;
using finsub::Sym3;

TEST(Sym3, SetWritesPermutations) {
  Sym3 t(3);
  t.set(0, 1, 2, 5.0);
  EXPECT_EQ(t(2, 1, 0), 5.0);
  EXPECT_EQ(t(1, 0, 2), 5.0);
  EXPECT_EQ(t.cubic(Eigen::Vector3d(1, 1, 1)), 30.0);
  const Eigen::MatrixXd c = t.contract(Eigen::Vector3d(0, 0, 2));
  EXPECT_EQ(c(0, 1), 10.0);
  EXPECT_EQ(c(0, 0), 0.0);
}

TEST(Sym3, Symmetrize) {
  Sym3 t(2);
  t.raw(0, 0, 1) = 3.0;
  const double dev = t.symmetrize();
  EXPECT_DOUBLE_EQ(t(0, 1, 0), 1.0);
  EXPECT_DOUBLE_EQ(dev, 2.0);
}

TEST(Germ, ShapeErrors) {
  EXPECT_THROW(Germ::from_arrays(2, 1, {Eigen::MatrixXd::Identity(3, 3)}, {Sym3(2)}),
               std::invalid_argument);
  EXPECT_THROW(Germ::from_arrays(2, 2, {Eigen::MatrixXd::Identity(2, 2)}, {Sym3(2)}),
               std::invalid_argument);
  EXPECT_THROW(Germ::from_arrays(0, 1, {}, {}), std::invalid_argument);
}

TEST(Germ, InputIsSymmetrized) {
  Eigen::Matrix2d a;
  a << 1, 2, 0, 1;
  const Germ g = Germ::from_arrays(2, 1, {a}, {Sym3(2)});
  EXPECT_DOUBLE_EQ(g.d2[0](0, 1), 1.0);
  EXPECT_DOUBLE_EQ(g.d2[0](1, 0), 1.0);
  EXPECT_GT(g.input_asymmetry, finsub::kGermAsymmetryWarning);
}

TEST(Germ, KappaCubicGraph) {
  Sym3 t(2);
  t.set(0, 0, 1, 6.0);
  const Germ g = Germ::from_arrays(2, 1, {Eigen::Matrix2d::Identity()}, {t});
  const Eigen::Vector2d u(1, 2);
  EXPECT_DOUBLE_EQ(g.kappa(u)[0], 5.0);
  EXPECT_DOUBLE_EQ(g.cubic(u)[0], 3 * 6.0 * 2.0);
  EXPECT_DOUBLE_EQ(g.graph(u)[0], 0.5 * 5.0 + 36.0 / 6.0);
}

TEST(Germ, AdaptWithZeroGradientIsIdentity) {
  finsub::Rng rng(1);
  const Germ g = finsub::testing::random_germ(rng, 3, 2);
  const auto frame = finsub::AmbientFrame::identity(5);
  const auto [a, f] = finsub::adapt_germ(Eigen::MatrixXd::Zero(2, 3), g.d2, g.d3, frame);
  EXPECT_EQ(a, g);
  EXPECT_EQ(f.basis, frame.basis);
  EXPECT_EQ(f.origin, frame.origin);
  const auto [b, f2] = finsub::adapt_germ(Eigen::MatrixXd::Zero(2, 3), a.d2, a.d3, f);
  EXPECT_EQ(b, a);
}

TEST(Germ, AdaptLineWithSlope) {
  // f(x) = x + x^2: y~ = y - x leaves y~ = x^2, and the tangent axis becomes (1, 1).
  Eigen::MatrixXd d1(1, 1);
  d1 << 1.0;
  Eigen::MatrixXd d2(1, 1);
  d2 << 2.0;
  const auto [g, f] = finsub::adapt_germ(d1, {d2}, {Sym3(1)}, finsub::AmbientFrame::identity(2));
  EXPECT_DOUBLE_EQ(g.d2[0](0, 0), 2.0);
  EXPECT_DOUBLE_EQ(f.basis(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(f.basis(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(f.basis(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(f.basis(1, 1), 1.0);
}

TEST(Germ, SingularFrames) {
  const Germ g = Germ::flat(2, 1);
  EXPECT_THROW(finsub::apply_linear_map(g, finsub::AmbientFrame::identity(3), Eigen::Matrix3d::Zero()),
               finsub::NonInvertibleFrame);
  Eigen::Matrix3d swap;
  swap << 0, 0, 1, 0, 1, 0, 1, 0, 0;  // moves the normal into the tangent block
  EXPECT_THROW(finsub::apply_linear_map(g, finsub::AmbientFrame::identity(3), swap),
               finsub::NonInvertibleFrame);
  auto bad = finsub::AmbientFrame::identity(3);
  bad.basis.setZero();
  EXPECT_THROW(finsub::adapt_germ(Eigen::MatrixXd::Zero(1, 2), g.d2, g.d3, bad),
               finsub::NonInvertibleFrame);
}

TEST(Germ, LinearMapRecomputesGraph) {
  // Tangent rescaling x = 2 x~: f~(x~) = f(x~ / 2), so second jets scale by 1/4.
  finsub::Rng rng(5);
  const Germ g = finsub::testing::random_germ(rng, 2, 1);
  Eigen::Matrix3d L = Eigen::Matrix3d::Identity();
  L(0, 0) = L(1, 1) = 2.0;
  const auto [raw, frame] = finsub::apply_linear_map(g, finsub::AmbientFrame::identity(3), L);
  EXPECT_LE(raw.d1.norm(), 1e-15);
  EXPECT_LE((raw.d2[0] - g.d2[0] / 4).norm(), 1e-14);
  EXPECT_NEAR(raw.d3[0](0, 0, 1), g.d3[0](0, 0, 1) / 8, 1e-14);
  EXPECT_TRUE(frame.basis.isApprox(L.inverse()));
}

TEST(Germ, ShearKeepsInvariants) {
  const Germ para = Germ::from_arrays(2, 1, {Eigen::Matrix2d::Identity()}, {Sym3(2)});
  Eigen::Matrix3d shear = Eigen::Matrix3d::Identity();
  shear(2, 0) = 0.7;
  shear(0, 1) = 0.4;
  const auto [raw, frame] = finsub::apply_linear_map(para, finsub::AmbientFrame::identity(3), shear);
  EXPECT_GT(raw.d1.norm(), 0.1);
  const Germ g = finsub::adapt_germ(raw, frame).first;
  const auto before = finsub::point_invariants(para);
  const auto after = finsub::point_invariants(g);
  EXPECT_EQ(before.mu, after.mu);
  EXPECT_EQ(before.type, after.type);
}

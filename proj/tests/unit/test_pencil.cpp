#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "finsub/errors.hpp"
#include "finsub/pencil.hpp"
#include "finsub/sampling.hpp"
#include "generators.hpp"

using finsub::CanonicalData;
using finsub::Inertia;
using finsub::SpectralData;
using finsub::SymPencil;

namespace {

Eigen::MatrixXd diag(std::initializer_list<double> v) {
  Eigen::VectorXd d(static_cast<int>(v.size()));
  int i = 0;
  for (double x : v) d[i++] = x;
  return d.asDiagonal();
}

SymPencil complex_block(double rho, double nu) {
  Eigen::Matrix2d a1, a2;
  a1 << nu, rho, rho, -nu;
  a2 << 0, 1, 1, 0;
  return SymPencil::make(a1, a2);
}

std::vector<Eigen::Vector2d> sorted(std::vector<Eigen::Vector2d> v) {
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
    return a[0] != b[0] ? a[0] < b[0] : a[1] < b[1];
  });
  return v;
}

}  // namespace

TEST(Pencil, Inertia) {
  EXPECT_EQ(finsub::inertia(Eigen::Matrix3d::Identity()), (Inertia{3, 0, 0}));
  EXPECT_EQ(finsub::inertia(diag({1, -1, 0})), (Inertia{1, 1, 1}));
  const auto hyp = finsub::build_canonical({0, {}, 1});
  EXPECT_EQ(finsub::inertia(hyp.at_angle(0.0)), (Inertia{1, 1, 0}));
  EXPECT_EQ(finsub::inertia(diag({1e-12, -1})), (Inertia{0, 1, 1}));
}

TEST(Pencil, MakeRejectsBadInput) {
  Eigen::Matrix2d a;
  a << 1, 2, 0, 1;
  EXPECT_ANY_THROW(SymPencil::make(a, Eigen::Matrix2d::Identity()));
  EXPECT_ANY_THROW(SymPencil::make(Eigen::Matrix2d::Identity(), Eigen::Matrix3d::Identity()));
}

TEST(Pencil, TypeSampledExamples) {
  EXPECT_EQ(finsub::type_sampled({Eigen::Matrix3d::Identity(), diag({1, -1, 1})}, 1000), 0);
  EXPECT_EQ(finsub::type_sampled(finsub::build_canonical({2, {1, 1, 1}, 0}), 1000), 1);
  EXPECT_EQ(finsub::type_sampled(finsub::build_canonical({0, {}, 3}), 1000), 3);
  EXPECT_THROW(finsub::type_sampled({Eigen::Matrix2d::Zero(), Eigen::Matrix2d::Zero()}, 10),
               finsub::ZeroPencil);
}

TEST(Pencil, SpectralSplitReal) {
  const auto S = finsub::spectral_split({diag({2, 3}), Eigen::Matrix2d::Identity()});
  EXPECT_EQ(S.s(), 0);
  const auto v = sorted(S.real_pairs);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_NEAR(v[0][0], 2, 1e-12);
  EXPECT_NEAR(v[0][1], 1, 1e-12);
  EXPECT_NEAR(v[1][0], 3, 1e-12);
  EXPECT_NEAR(v[1][1], 1, 1e-12);
}

TEST(Pencil, SpectralSplitComplex) {
  const auto S = finsub::spectral_split(complex_block(0.3, 0.5));
  ASSERT_EQ(S.s(), 1);
  EXPECT_EQ(S.r(), 0);
  EXPECT_NEAR(S.complex_pairs[0][0], 0.3, 1e-12);
  EXPECT_NEAR(S.complex_pairs[0][1], 0.5, 1e-12);
}

TEST(Pencil, SpectralSplitDirectSum) {
  const auto c = complex_block(-0.4, 1.2);
  for (bool complex_first : {true, false}) {
    Eigen::MatrixXd A1 = Eigen::MatrixXd::Zero(4, 4), A2 = Eigen::MatrixXd::Zero(4, 4);
    const int o = complex_first ? 0 : 2, q = complex_first ? 2 : 0;
    A1.block(o, o, 2, 2) = c.A1;
    A2.block(o, o, 2, 2) = c.A2;
    A1.block(q, q, 2, 2) = diag({2, 3});
    A2.block(q, q, 2, 2) = Eigen::Matrix2d::Identity();
    // Mix by a random congruence; the spectral data must not change.
    finsub::Rng rng(complex_first ? 1 : 2);
    const Eigen::MatrixXd X = finsub::testing::random_invertible(rng, 4);
    const auto S = finsub::spectral_split({X.transpose() * A1 * X, X.transpose() * A2 * X});
    ASSERT_EQ(S.s(), 1);
    ASSERT_EQ(S.r(), 2);
    EXPECT_NEAR(S.complex_pairs[0][0], -0.4, 1e-9);
    EXPECT_NEAR(S.complex_pairs[0][1], 1.2, 1e-9);
    const auto v = sorted(S.real_pairs);
    EXPECT_NEAR(v[0][0] / v[0][1], 2, 1e-9);
    EXPECT_NEAR(v[1][0] / v[1][1], 3, 1e-9);
  }
}

TEST(Pencil, SpectralSplitErrors) {
  EXPECT_THROW(finsub::spectral_split({diag({1, 0}), diag({1, 0})}), finsub::SingularA2);
  // A Jordan block: A2 = antidiag(1, 1), A1 = [[1, 0], [0, 0]] gives A2^{-1} A1 nilpotent.
  Eigen::Matrix2d a1, a2;
  a1 << 0, 0, 0, 1;
  a2 << 0, 1, 1, 0;
  EXPECT_THROW(finsub::spectral_split({a1, a2}), finsub::NotSemisimple);
}

TEST(Pencil, TypeExactExamples) {
  SpectralData S;
  S.real_pairs.assign(3, Eigen::Vector2d(0, 1));
  S.complex_pairs.push_back(Eigen::Vector2d(0.1, 1));
  EXPECT_EQ(finsub::type_exact(S), 1);
  const auto C = finsub::spectral_split(finsub::build_canonical({2, {1, 2, 1}, 1}));
  EXPECT_EQ(finsub::type_exact(C), 2);
  EXPECT_EQ(CanonicalData({2, {1, 2, 1}, 1}).type_formula(), 2);
}

TEST(Pencil, TypeExactMatchesSampledOnRandom) {
  finsub::Rng rng(21);
  for (int i = 0; i < 40; ++i) {
    const auto P = finsub::testing::random_generic_pencil(rng, rng.uniform_int(2, 6));
    EXPECT_EQ(finsub::type_exact(finsub::spectral_split(P)), finsub::type_sampled(P, 10000));
  }
}

TEST(Pencil, ToPencilRoundTrip) {
  finsub::Rng rng(23);
  const auto S = finsub::testing::random_spectral(rng, 3, 2);
  const auto back = finsub::spectral_split(finsub::to_pencil(S));
  EXPECT_EQ(back.r(), 3);
  EXPECT_EQ(back.s(), 2);
  EXPECT_EQ(finsub::type_exact(back), finsub::type_exact(S));
}

TEST(Pencil, GenericityExamples) {
  const auto a = finsub::genericity_check({diag({1, -1}), diag({1, -1})});
  EXPECT_TRUE(a.det_not_identically_zero);
  EXPECT_TRUE(a.semisimple);
  EXPECT_FALSE(a.smooth_intersection);

  const auto b = finsub::genericity_check(finsub::build_canonical({2, {1, 1, 1}, 0}));
  EXPECT_TRUE(b.det_not_identically_zero);
  EXPECT_TRUE(b.semisimple);
  EXPECT_TRUE(b.smooth_intersection);

  // Odd block with T = (l1 l2).
  Eigen::Matrix3d q1 = Eigen::Matrix3d::Zero(), q2 = Eigen::Matrix3d::Zero();
  q1(0, 1) = q1(1, 0) = 1;
  q2(0, 2) = q2(2, 0) = 1;
  const auto c = finsub::genericity_check({q1, q2});
  EXPECT_FALSE(c.det_not_identically_zero);
}

TEST(Pencil, CanonicalShape) {
  EXPECT_EQ(CanonicalData({2, {1, 2, 1}, 1}).dim(), 6);
  EXPECT_EQ(CanonicalData({3, {1, 1, 2, 1, 1}, 0}).d(), (std::vector<int>{2, 3, 3, 2, 2}));
  EXPECT_ANY_THROW(CanonicalData({2, {1, 1}, 0}).validate());
  EXPECT_ANY_THROW(CanonicalData({1, {0}, 1}).validate());
  EXPECT_ANY_THROW(CanonicalData({0, {}, 0}).validate());
}

TEST(Pencil, BuildCanonicalSmall) {
  const auto P = finsub::build_canonical({1, {2}, 1});
  EXPECT_TRUE(P.A1.isApprox(diag({1, 1, 1, -1}), 1e-15));
  Eigen::Matrix4d a2 = Eigen::Matrix4d::Zero();
  a2(2, 3) = a2(3, 2) = 1;
  EXPECT_LE((P.A2 - a2).norm(), 1e-15);
}

TEST(Pencil, ToCanonicalRoundTrip) {
  for (const CanonicalData& C : {CanonicalData{2, {1, 2, 1}, 1}, CanonicalData{0, {}, 2},
                                 CanonicalData{3, {1, 1, 1, 2, 1}, 0}, CanonicalData{1, {3}, 1}}) {
    const auto back = finsub::to_canonical(finsub::spectral_split(finsub::build_canonical(C)));
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(*back, C);
  }
  finsub::Rng rng(3);
  SpectralData off;
  off.real_pairs = {Eigen::Vector2d(std::cos(0.1), std::sin(0.1)), Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)};
  EXPECT_FALSE(finsub::to_canonical(off).has_value());
}

TEST(Pencil, TopologyExamples) {
  using Case = finsub::TopologyLabel::Case;
  const auto a = finsub::classify_topology({0, {}, 3});
  EXPECT_EQ(a.kind, Case::UnitTangentBundleOfSphere);
  EXPECT_EQ(a.spheres, std::vector<int>{2});
  EXPECT_EQ(a.dimension(), 3);

  const auto b = finsub::classify_topology({2, {1, 1, 1}, 0});
  EXPECT_EQ(b.kind, Case::ProductThreeSpheres);
  EXPECT_EQ(b.spheres, (std::vector<int>{0, 0, 0}));
  EXPECT_EQ(b.dimension(), 0);

  EXPECT_EQ(finsub::classify_topology({1, {2}, 0}).kind, Case::Empty);
  EXPECT_EQ(finsub::classify_topology({1, {2}, 0}).dimension(), -1);
  EXPECT_EQ(finsub::classify_topology({1, {2}, 2}).kind, Case::ProductTwoSpheres);
  EXPECT_EQ(finsub::classify_topology({3, {1, 1, 1, 1, 1}, 0}).kind, Case::ConnectedSum);
}

TEST(Pencil, PerturbIsDeterministic) {
  const auto P = finsub::build_canonical({0, {}, 2});
  const auto a = finsub::perturb(P, 1e-3, 9), b = finsub::perturb(P, 1e-3, 9);
  EXPECT_EQ(a.A1, b.A1);
  EXPECT_EQ(a.A2, P.A2);
  EXPECT_LE((a.A1 - P.A1).cwiseAbs().maxCoeff(), 1e-3);
  EXPECT_GT((a.A1 - P.A1).norm(), 0.0);
}

TEST(Pencil, CommonZeroTrivial) {
  const auto r = finsub::common_zero_search(Eigen::Matrix3d::Zero(), Eigen::Matrix3d::Zero(),
                                            finsub::Sym3(3), finsub::Sym3(3));
  ASSERT_TRUE(r.found);
  EXPECT_NEAR(r.point.norm(), 1.0, 1e-14);
  EXPECT_EQ(r.residual, 0.0);
}

TEST(Pencil, CommonZeroOnUnitTangentBundle) {
  const auto P = finsub::build_canonical({0, {}, 3});
  finsub::Rng rng(31);
  for (int i = 0; i < 10; ++i) {
    const auto psi1 = finsub::testing::random_cubic(rng, 6), psi2 = finsub::testing::random_cubic(rng, 6);
    finsub::CommonZeroOptions opts;
    opts.seed = static_cast<std::uint64_t>(i);
    const auto r = finsub::common_zero_search(P.A1, P.A2, psi1, psi2, opts);
    ASSERT_TRUE(r.found);
    EXPECT_LE(r.residual, 1e-8);
    const Eigen::VectorXd& x = r.point;
    EXPECT_NEAR(x.norm(), 1.0, 1e-12);
    EXPECT_LE(std::abs(x.dot(P.A1 * x)) + std::abs(psi1.cubic(x)) + std::abs(psi2.cubic(x)), 3e-8);
  }
}

TEST(Pencil, CommonZeroDefiniteFormFails) {
  finsub::Rng rng(33);
  finsub::CommonZeroOptions opts;
  opts.budget = 8;
  const auto r = finsub::common_zero_search(Eigen::Matrix2d::Identity(), rng.symmetric(2),
                                            finsub::testing::random_cubic(rng, 2),
                                            finsub::testing::random_cubic(rng, 2), opts);
  EXPECT_FALSE(r.found);
  EXPECT_EQ(r.descents, 8);
  EXPECT_GT(r.residual, 0.5);
}

TEST(Pencil, CommonZeroDeterministic) {
  const auto P = finsub::build_canonical({0, {}, 3});
  finsub::Rng rng(35);
  const auto psi1 = finsub::testing::random_cubic(rng, 6), psi2 = finsub::testing::random_cubic(rng, 6);
  const auto a = finsub::common_zero_search(P.A1, P.A2, psi1, psi2);
  const auto b = finsub::common_zero_search(P.A1, P.A2, psi1, psi2);
  EXPECT_EQ(a.point, b.point);
  EXPECT_EQ(a.descents, b.descents);
}

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nlg/apath.hpp"
#include "nlg/models.hpp"
#include "nlg/sweep.hpp"
#include "oracles.hpp"

using namespace nlg;

namespace {

constexpr double kPi = std::numbers::pi;

// (8/3) sin^4(pi s) integrates to 1 over [0, 1] and vanishes to fourth order at both ends.
template <class T>
T bump(const T& s) {
  using std::sin;
  const T v = sin(kPi * s);
  return (8.0 / 3.0) * v * v * v * v;
}

// w1 on the first half, w2 on the second, each with unit total weight.
SmoothMap concatenated(Eigen::Vector3d w1, Eigen::Vector3d w2) {
  return SmoothMap(1, 3, [w1, w2](auto t, auto y) {
    using T = typename decltype(y)::value_type;
    const bool first = value_of(t[0]) < 0.5;
    const T s = first ? T(2.0) * t[0] : T(2.0) * t[0] - T(1.0);
    const T b = T(2.0) * bump(s);
    for (int a = 0; a < 3; ++a) y[a] = b * (first ? w1(a) : w2(a));
  });
}

Eigen::Matrix3d to_eigen(const Matrix& m) { return oracle::to_eigen(m.data); }

}  // namespace

TEST(APath, ConstructionChecks) {
  const LieAlgebroid A = so3_action_r3();
  std::vector<Point> x(8, Point{0.0, 0.0, 0.0}), a(8, Point{0.0, 0.0, 0.0});
  EXPECT_THROW(make_apath(A, x, a), std::invalid_argument);
  x.push_back({0.0, 0.0, 0.0});
  a.push_back({0.0, 0.0, 0.0});
  EXPECT_NO_THROW(make_apath(A, x, a));
  x[3] = {5.0, 0.0, 0.0};
  EXPECT_THROW(make_apath(A, x, a), APathError);
  EXPECT_THROW(integrate_base(A, constant_map(1, {0.0, 0.0, 0.0}), Point{0.0, 0.0, 0.0}, 4),
               std::invalid_argument);
}

TEST(APath, LeavingTheBoxReportsTime) {
  const LieAlgebroid T = builtin_model("tangent3").A;
  try {
    integrate_base(T, constant_map(1, {10.0, 0.0, 0.0}), Point{0.0, 0.0, 0.0}, 64);
    FAIL();
  } catch (const APathError& e) {
    EXPECT_GT(e.time(), 0.0);
    EXPECT_LT(e.time(), 1.0);
  }
}

TEST(APath, ZeroFiberGivesConstantBase) {
  const LieAlgebroid A = so3_action_r3();
  const APath p = integrate_base(A, constant_map(1, {0.0, 0.0, 0.0}), Point{0.3, -0.2, 0.5}, 16);
  for (const auto& x : p.x) EXPECT_EQ(x, (Point{0.3, -0.2, 0.5}));
  EXPECT_LE(apath_residual(p), 1e-14);
}

TEST(APath, HalfTurnAboutThirdAxis) {
  const LieAlgebroid A = so3_action_r3();
  const APath p = integrate_base(A, constant_map(1, {0.0, 0.0, kPi}), Point{0.0, 1.0, 0.0}, 512);
  EXPECT_NEAR(p.x.back()[0], 0.0, 1e-10);
  EXPECT_NEAR(p.x.back()[1], -1.0, 1e-10);
  EXPECT_NEAR(p.x.back()[2], 0.0, 1e-10);
}

TEST(APath, CasimirConservedOnSu2) {
  const LieAlgebroid A = builtin_model("su2").A;
  const SmoothMap a = random_trig_map(1, 3, 11);
  const Point x0{0.4, -0.3, 0.2};
  const APath p = integrate_base(A, a, x0, 512);
  const double c0 = x0[0] * x0[0] + x0[1] * x0[1] + x0[2] * x0[2];
  double drift = 0.0;
  for (const auto& x : p.x) drift = std::max(drift, std::abs(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] - c0));
  EXPECT_LE(drift, 1e-9);
}

TEST(APath, ResidualSmallForIntegratedPaths) {
  const LieAlgebroid T = builtin_model("tangent3").A;
  EXPECT_LE(apath_residual(integrate_base(T, random_trig_map(1, 3, 12), Point{0.0, 0.0, 0.0}, 512)), 1e-6);
  const LieAlgebroid A = so3_action_r3();
  EXPECT_LE(apath_residual(integrate_base(A, random_trig_map(1, 3, 13), Point{0.5, 0.2, -0.1}, 512)), 1e-8);
}

TEST(APath, ResidualDetectsWrongBase) {
  const LieAlgebroid A = so3_action_r3();
  APath p = integrate_base(A, random_trig_map(1, 3, 14), Point{0.5, 0.2, -0.1}, 128);
  for (auto& a : p.a) a[0] += 0.1;
  EXPECT_GT(apath_residual(p), 1e-3);
}

TEST(APath, GridDerivativeExactOnCubics) {
  std::vector<Point> f;
  const std::size_t N = 20;
  for (std::size_t k = 0; k <= N; ++k) {
    const double t = static_cast<double>(k) / N;
    f.push_back({t * t * t - 2 * t});
  }
  const auto d = grid_derivative(f);
  for (std::size_t k = 0; k <= N; ++k) {
    const double t = static_cast<double>(k) / N;
    EXPECT_NEAR(d[k][0], 3 * t * t - 2, 1e-11);
  }
}

TEST(APath, ConvergenceOrders) {
  const LieAlgebroid A = so3_action_r3();
  const SmoothMap a = random_trig_map(1, 3, 15);
  for (double o : integration_orders(A, a, Point{0.5, 0.2, -0.1}, {16, 32, 64})) {
    EXPECT_GE(o, 3.5);
    EXPECT_LE(o, 4.5);
  }
  for (double o : residual_orders(A, a, Point{0.5, 0.2, -0.1}, {32, 64, 128})) {
    EXPECT_GE(o, 3.5);
    EXPECT_LE(o, 4.5);
  }
}

TEST(Holonomy, ZeroAndHalfTurn) {
  const LieAlgebroid A = so3_action_r3();
  const Holonomy h0 = holonomy(integrate_base(A, constant_map(1, {0.0, 0.0, 0.0}), Point{0.1, 0.2, 0.3}, 16));
  EXPECT_LE((to_eigen(h0.R) - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(), 1e-15);
  const APath p = integrate_base(A, constant_map(1, {kPi, 0.0, 0.0}), Point{0.1, 0.2, 0.3}, 256);
  const Holonomy h = holonomy(p);
  const Eigen::Matrix3d D = Eigen::Vector3d(1.0, -1.0, -1.0).asDiagonal();
  EXPECT_LE((to_eigen(h.R) - D).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LE(holonomy_consistency(p, h), 1e-9);
}

TEST(Holonomy, ConcatenationMultiplies) {
  const LieAlgebroid A = so3_action_r3();
  const Eigen::Vector3d w1(0.7, -0.2, 0.4), w2(-0.3, 0.9, 0.5);
  const APath p = integrate_base(A, concatenated(w1, w2), Point{0.2, 0.1, -0.4}, 512);
  const Holonomy h = holonomy(p);
  const Eigen::Matrix3d ref = oracle::expm(w1) * oracle::expm(w2);
  EXPECT_LE((to_eigen(h.R) - ref).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LE(holonomy_consistency(p, h), 1e-8);
}

TEST(Holonomy, RequiresGenerators) {
  const LieAlgebroid T = builtin_model("tangent3").A;
  EXPECT_THROW(holonomy(integrate_base(T, constant_map(1, {0.0, 0.0, 0.0}), Point{0.0, 0.0, 0.0}, 8)),
               std::invalid_argument);
}

TEST(Homotopy, BoundaryVanishes) {
  for (std::uint64_t s = 0; s < 5; ++s) EXPECT_LE(homotopy_boundary_defect(random_homotopy(3, s)), 1e-14);
  EXPECT_EQ(homotopy_boundary_defect(zero_homotopy(3)), 0.0);
}

TEST(Homotopy, ZeroHomotopyLeavesPathUnchanged) {
  const LieAlgebroid A = so3_action_r3();
  const APath p = integrate_base(A, random_trig_map(1, 3, 21), Point{0.3, 0.3, 0.3}, 128);
  const HomotopyFlowResult r = homotopy_flow(p, zero_homotopy(3), 5);
  for (std::size_t k = 0; k < p.a.size(); ++k) {
    EXPECT_EQ(r.path.a[k], p.a[k]);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(r.path.x[k][i], p.x[k][i], 1e-8);
  }
}

TEST(Homotopy, FlowKeepsEndpointsAndHolonomy) {
  const LieAlgebroid A = so3_action_r3();
  const APath p = integrate_base(A, random_trig_map(1, 3, 22), Point{0.3, -0.3, 0.2}, 256);
  const Holonomy h0 = holonomy(p);
  for (std::uint64_t s = 0; s < 3; ++s) {
    const HomotopyFlowResult r = homotopy_flow(p, random_homotopy(3, 30 + s), 40);
    const Holonomy h1 = holonomy(r.path);
    EXPECT_LE(matrix_distance(h0.R, h1.R), 1e-6);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(r.path.x.back()[i], p.x.back()[i], 1e-6);
    EXPECT_LE(r.flatness_after, 1e-5);
  }
}

TEST(Homotopy, AbelianIntegralInvariant) {
  const LieAlgebroid B = from_lie_algebra({0.0}, std::nullopt, {}, "abelian");
  const std::size_t N = 256;
  const APath p = integrate_base(B, random_trig_map(1, 1, 40), Point{0.0}, N);
  const HomotopyFlowResult fl = homotopy_flow(p, random_homotopy(1, 41), 40);
  double s0 = 0.0, s1 = 0.0;
  for (std::size_t k = 0; k <= N; ++k) {
    const double w = (k == 0 || k == N) ? 0.5 : 1.0;
    s0 += w * p.a[k][0];
    s1 += w * fl.path.a[k][0];
  }
  EXPECT_LE(std::abs(s1 - s0) / N, 1e-12);
}

TEST(Weinstein, SmallExperiment) {
  WeinsteinOptions o;
  o.paths = 2;
  o.homotopies = 2;
  o.intervals = 128;
  const WeinsteinReport r = weinstein_experiment(so3_action_r3(), o);
  EXPECT_EQ(r.trials.size(), 4u);
  EXPECT_LE(r.max_holonomy_drift, 1e-6);
  EXPECT_LE(r.max_endpoint_drift, 1e-6);
  EXPECT_LE(r.max_consistency, 1e-8);
  EXPECT_LE(r.max_orthogonality, 1e-9);
  EXPECT_GE(r.min_separation, 0.5);
  EXPECT_EQ(r.sample_paths.size(), 2u);
}

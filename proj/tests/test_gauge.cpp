#include <gtest/gtest.h>

#include "nlg/expr.hpp"
#include "nlg/gauge.hpp"
#include "nlg/models.hpp"
#include "nlg/so3.hpp"
#include "nlg/sweep.hpp"
#include "oracles.hpp"

using namespace nlg;

namespace {

const Chart kPlane({"u1", "u2"}, {{-1.0, 1.0}, {-1.0, 1.0}});

GaugeField abelian_u1du2() {
  const LieAlgebroid A = from_lie_algebra({0.0});
  return make_gauge_field(kPlane, A, constant_map(2, {0.0}), parse_map({"0", "u1"}, kPlane));
}

std::vector<Point> grid33() {
  std::vector<Point> pts;
  for (int i = 0; i <= 32; ++i)
    for (int j = 0; j <= 32; ++j) pts.push_back({-1.0 + i / 16.0, -1.0 + j / 16.0});
  return pts;
}

// theta_mu as a 3-vector at u.
Eigen::Vector3d column(const std::vector<double>& th, std::size_t mu, std::size_t m = 2) {
  return {th[0 * m + mu], th[1 * m + mu], th[2 * m + mu]};
}

SmoothMap transpose_field(const SmoothMap& R) {
  return SmoothMap(R.dim(), 9, [R](auto u, auto y) {
    using T = typename decltype(y)::value_type;
    std::vector<T> r(9);
    R.template eval<T>(u, std::span<T>(r));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) y[i * 3 + j] = r[j * 3 + i];
  });
}

}  // namespace

TEST(AnchorResidual, TangentPushforwardVanishes) {
  const BuiltinModel bm = builtin_model("tangent3");
  const GaugeField g = bm.flat_field(2, 4);
  for (const auto& u : sample_points(kPlane, 30, 1)) EXPECT_LE(max_abs(anchor_residual(g, u)), 1e-12);
}

TEST(AnchorResidual, LieAlgebraConstantBaseMapIsExactlyZero) {
  const GaugeField g = random_gauge_field(so3_algebra(), 2, 3);
  const GaugeField c = make_gauge_field(g.source, g.A, constant_map(2, {0.1}), g.theta);
  for (const auto& u : sample_points(kPlane, 30, 1))
    for (double v : anchor_residual(c, u)) EXPECT_EQ(v, 0.0);
}

TEST(AnchorResidual, MatchesComponentFormula) {
  const LieAlgebroid A = builtin_model("su2").A;
  const GaugeField g = random_gauge_field(A, 2, 9);
  for (const auto& u : sample_points(kPlane, 30, 2)) {
    const auto T = anchor_residual(g, u);
    const Matrix df = jacobian(g.f, u);
    const auto x = g.f(u);
    const auto th = g.theta(u);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t mu = 0; mu < 2; ++mu) {
        double v = df(i, mu);
        // rho^i_(j) = pi^ji = eps_jik x_k
        for (std::size_t j = 0; j < 3; ++j)
          for (std::size_t k = 0; k < 3; ++k) v -= levi_civita(j, i, k) * x[k] * th[j * 2 + mu];
        EXPECT_NEAR(T[i * 2 + mu], v, 1e-12);
      }
  }
}

TEST(FieldStrength, AbelianExample) {
  const GaugeField g = abelian_u1du2();
  for (const auto& u : sample_points(kPlane, 10, 3)) {
    const auto F = field_strength(g, u);
    EXPECT_NEAR(F[0 * 2 + 1], 1.0, 1e-15);
    EXPECT_NEAR(F[1 * 2 + 0], -1.0, 1e-15);
    EXPECT_EQ(F[0], 0.0);
  }
}

TEST(FieldStrength, ZeroFieldAndPureGauge) {
  const GaugeField z = zero_gauge_field(so3_algebra(), 2);
  for (double v : field_strength(z, Point{0.2, 0.3})) EXPECT_EQ(v, 0.0);
  const GaugeField pure = builtin_model("so3").flat_field(2, 17);
  for (const auto& u : sample_points(kPlane, 50, 4)) EXPECT_LE(max_abs(field_strength(pure, u)), 1e-9);
}

TEST(FieldStrength, MatchesFiniteDifferenceOracle) {
  for (const char* name : {"so3", "su2", "so3_action", "quad"}) {
    const LieAlgebroid A = builtin_model(name).A;
    const GaugeField g = random_gauge_field(A, 2, 5);
    for (const auto& u : sample_points(kPlane, 10, 6)) {
      const auto lib = field_strength(g, u);
      const auto ref = oracle::field_strength(g.theta, g.f, A.structure(), A.rank(), u);
      for (std::size_t k = 0; k < lib.size(); ++k) EXPECT_NEAR(lib[k], ref[k], 1e-9) << name;
    }
  }
}

TEST(Curvature, FunctionIdentityAndSpecialCases) {
  const GaugeField flat = builtin_model("tangent3").flat_field(2, 8);
  const SmoothMap h = random_function(flat.A, 2);
  for (const auto& u : sample_points(kPlane, 20, 7)) EXPECT_LE(max_abs(curvature_on_function(flat, h, u)), 1e-12);
  const GaugeField g = random_gauge_field(builtin_model("su2").A, 2, 3);
  for (const auto& u : sample_points(kPlane, 20, 7)) {
    for (double v : curvature_on_function(g, constant_map(3, {4.0}), u)) EXPECT_EQ(v, 0.0);
    const auto a = curvature_on_function(g, h, u), b = anchor_contraction(g, h, u);
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-12);
  }
}

TEST(Curvature, OneFormDecompositionOnAllModels) {
  for (const auto& name : builtin_model_names()) {
    const LieAlgebroid A = builtin_model(name).A;
    const GaugeField g = random_gauge_field(A, 2, 31);
    for (std::uint64_t k = 0; k < 3; ++k) {
      const AForm lam = random_oneform(A, 40 + k);
      for (const auto& u : sample_points(kPlane, 20, 8)) {
        const auto a = curvature_on_oneform(g, lam, u), b = curvature_decomposition(g, lam, u);
        for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-10 * (1.0 + std::abs(a[i]))) << name;
      }
    }
  }
}

TEST(Curvature, BasisCovectorGivesFieldStrength) {
  const GaugeField g = builtin_model("so3_action").flat_field(2, 3);
  for (const auto& u : sample_points(kPlane, 10, 9)) {
    const auto F = field_strength(g, u);
    for (std::size_t a = 0; a < 3; ++a) {
      std::vector<double> e(3, 0.0);
      e[a] = 1.0;
      const auto w = curvature_on_oneform(g, AForm{1, constant_map(3, e)}, u);
      for (std::size_t mn = 0; mn < 4; ++mn) EXPECT_NEAR(w[mn], F[a * 4 + mn], 1e-11);
    }
  }
}

TEST(Curvature, MorphismKillsRandomOneForms) {
  const GaugeField g = builtin_model("su2").flat_field(2, 12);
  for (std::uint64_t k = 0; k < 20; ++k) {
    const AForm lam = random_oneform(g.A, 100 + k);
    for (const auto& u : sample_points(kPlane, 5, k)) EXPECT_LE(max_abs(curvature_on_oneform(g, lam, u)), 1e-10);
  }
}

TEST(Curvature, AbelianOneFormValue) {
  const GaugeField g = abelian_u1du2();
  const auto w = curvature_on_oneform(g, AForm{1, constant_map(1, {1.0})}, Point{0.1, 0.5});
  EXPECT_NEAR(w[0 * 2 + 1], 1.0, 1e-14);
}

TEST(Flatness, ExamplesFromEachFamily) {
  const auto pts = sample_points(kPlane, 50, 10);
  EXPECT_TRUE(is_flat(builtin_model("tangent3").flat_field(2, 1), 1e-11, pts).flat);
  EXPECT_TRUE(is_flat(builtin_model("so3").flat_field(2, 2), 1e-9, pts).flat);
  const FlatReport r = is_flat(abelian_u1du2(), 1e-9, pts);
  EXPECT_FALSE(r.flat);
  EXPECT_NEAR(r.max_field, 1.0, 1e-14);
  const MorphismReport m = morphism_residual(abelian_u1du2(), coordinate_functions(abelian_u1du2().A),
                                             basis_covectors(abelian_u1du2().A), pts, 1e-9);
  EXPECT_NEAR(m.max(), 1.0, 1e-14);
}

TEST(Flatness, VerdictAgreesWithMorphismResidual) {
  for (const auto& name : builtin_model_names()) {
    const BuiltinModel bm = builtin_model(name);
    for (std::uint64_t k = 0; k < 20; ++k) {
      const bool closed = bm.flat_field && k % 2 == 0;
      const GaugeField g = closed ? bm.flat_field(2, k) : random_gauge_field(bm.A, 2, k);
      const auto pts = sample_points(g.source, 50, 1000 + k);
      const FlatReport fr = is_flat(g, 1e-8, pts);
      const MorphismReport mr = morphism_residual(g, coordinate_functions(g.A), basis_covectors(g.A), pts, 1e-8);
      EXPECT_EQ(fr.flat, mr.morphism()) << name << " " << k;
      if (closed) EXPECT_LE(std::max(fr.max_anchor, fr.max_field), 1e-9) << name;
      else EXPECT_FALSE(fr.flat) << name;
    }
  }
}

TEST(Flatness, ParallelSweepMatchesSerialReference) {
  const GaugeField g = random_gauge_field(builtin_model("su2").A, 2, 77);
  const auto pts = sample_points(kPlane, 400, 78);
  const FlatReport fr = is_flat(g, 1e-8, pts);
  const ArgMax s = serial::max_over(pts.size(), [&](std::size_t i) { return max_abs(field_strength(g, pts[i])); });
  EXPECT_EQ(fr.max_field, s.value);
  EXPECT_EQ(fr.worst_field, pts[static_cast<std::size_t>(s.index)]);
}

TEST(InfinitesimalGauge, ZeroParameterAndAbelianShift) {
  const GaugeField g = random_gauge_field(so3_algebra(), 2, 4);
  const GaugeVariation v = infinitesimal_gauge(g, plain_parameter(g, constant_map(2, {0.0, 0.0, 0.0})));
  for (double x : v.dtheta(Point{0.1, 0.1})) EXPECT_EQ(x, 0.0);
  for (double x : v.df(Point{0.1, 0.1})) EXPECT_EQ(x, 0.0);

  const GaugeField a = abelian_u1du2();
  const SmoothMap eps = parse_map({"sin(u1)*u2"}, kPlane);
  const GaugeVariation w = infinitesimal_gauge(a, plain_parameter(a, eps));
  for (const auto& u : sample_points(kPlane, 10, 3)) {
    const Matrix de = jacobian(eps, u);
    EXPECT_NEAR(w.dtheta(u)[0], de.data[0], 1e-15);
    EXPECT_NEAR(w.dtheta(u)[1], de.data[1], 1e-15);
  }
}

TEST(InfinitesimalGauge, So3LinearizesTheFiniteTransform) {
  // Constant f, theta = 0, eps(u) arbitrary: dtheta = d eps.
  const LieAlgebroid A = so3_algebra();
  const GaugeField z = zero_gauge_field(A, 2);
  TrigSpec spec;
  spec.amplitude = 0.8;
  const SmoothMap eps = random_trig_map(2, 3, 5, spec);
  const GaugeVariation v = infinitesimal_gauge(z, plain_parameter(z, eps));
  const double t = 1e-4;
  const GaugeField gp = apply_group_gauge(z, GroupGauge{so3::exp_field(eps, t), so3_generators()});
  const GaugeField gm = apply_group_gauge(z, GroupGauge{so3::exp_field(eps, -t), so3_generators()});
  for (const auto& u : sample_points(kPlane, 20, 6)) {
    const auto a = gp.theta(u), b = gm.theta(u), d = v.dtheta(u);
    for (std::size_t k = 0; k < d.size(); ++k) EXPECT_NEAR((a[k] - b[k]) / (2 * t), d[k], 1e-8);
  }
}

TEST(InfinitesimalGauge, AlternativeOrderingFailsGroupOracle) {
  // Constant eps on a random so(3) field: the finite law gives
  // theta(t) = Ad_{exp(-t eps)} theta. Only C^a_bc theta^b eps^c matches.
  const LieAlgebroid A = so3_algebra();
  const GaugeField g = random_gauge_field(A, 2, 41);
  const std::vector<double> e{0.4, -0.7, 0.2};
  const GaugeVariation v = infinitesimal_gauge(g, plain_parameter(g, constant_map(2, e)));
  const Eigen::Vector3d ev(e[0], e[1], e[2]);
  const auto C = A.structure()(Point{0.0});
  double lib_err = 0.0, alt_err = 0.0;
  const double t = 1e-4;
  for (const auto& u : sample_points(kPlane, 20, 42)) {
    const auto th = g.theta(u);
    const auto d = v.dtheta(u);
    for (std::size_t mu = 0; mu < 2; ++mu) {
      const Eigen::Vector3d x = column(th, mu);
      const Eigen::Vector3d ref =
          (oracle::expm(t * ev).transpose() * x - oracle::expm(-t * ev).transpose() * x) / (2 * t);
      for (std::size_t a = 0; a < 3; ++a) {
        double alt = 0.0;
        for (std::size_t b = 0; b < 3; ++b)
          for (std::size_t c = 0; c < 3; ++c) alt += C[(a * 3 + b) * 3 + c] * e[b] * x(c);
        lib_err = std::max(lib_err, std::abs(d[a * 2 + mu] - ref(a)));
        alt_err = std::max(alt_err, std::abs(alt - ref(a)));
      }
    }
  }
  EXPECT_LE(lib_err, 1e-8);
  EXPECT_GT(alt_err, 1e-2);
}

TEST(Flow, TimeZeroAndZeroParameterLeaveFieldUnchanged) {
  const GaugeField g = random_gauge_field(builtin_model("su2").A, 2, 3);
  const GaugeField g0 = flow_gauge(g, pulled_back_parameter(g, random_section(g.A, 4)), 0.0, 10);
  const GaugeField gz = flow_gauge(g, plain_parameter(g, constant_map(2, {0.0, 0.0, 0.0})), 1.0, 10);
  for (const auto& u : sample_points(kPlane, 10, 5)) {
    EXPECT_EQ(g0.theta(u), g.theta(u));
    EXPECT_EQ(g0.f(u), g.f(u));
    EXPECT_EQ(gz.theta(u), g.theta(u));
    EXPECT_EQ(gz.f(u), g.f(u));
  }
}

TEST(Flow, AbelianFlowAddsExactForm) {
  const GaugeField a = abelian_u1du2();
  const SmoothMap eps = parse_map({"cos(u1 + 2*u2)"}, kPlane);
  const GaugeField at = flow_gauge(a, plain_parameter(a, eps), 1.0, 7);
  for (const auto& u : sample_points(kPlane, 10, 6)) {
    const Matrix de = jacobian(eps, u);
    const auto th = a.theta(u), tt = at.theta(u);
    EXPECT_NEAR(tt[0], th[0] + de.data[0], 1e-12);
    EXPECT_NEAR(tt[1], th[1] + de.data[1], 1e-12);
    EXPECT_NEAR(field_strength(at, u)[1], 1.0, 1e-12);
  }
}

TEST(Flow, ConstantParameterMatchesMatrixExponential) {
  for (const char* name : {"so3", "so3_action"}) {
    const LieAlgebroid A = builtin_model(name).A;
    const GaugeField g = random_gauge_field(A, 2, 51);
    const std::vector<double> e{0.9, -0.4, 0.6};
    const GaugeField gt = flow_gauge(g, plain_parameter(g, constant_map(2, e)), 1.0, 100);
    const Eigen::Matrix3d R = oracle::expm(Eigen::Vector3d(e[0], e[1], e[2]));
    for (const auto& u : sample_points(kPlane, 12, 52)) {
      const auto th = g.theta(u), tt = gt.theta(u);
      for (std::size_t mu = 0; mu < 2; ++mu) {
        const Eigen::Vector3d ref = R.transpose() * column(th, mu);
        for (std::size_t a = 0; a < 3; ++a) EXPECT_NEAR(tt[a * 2 + mu], ref(a), 1e-8) << name;
      }
      if (A.kind() == AlgebroidKind::Action) {
        const auto f = g.f(u), ft = gt.f(u);
        const Eigen::Vector3d ref = R.transpose() * Eigen::Vector3d(f[0], f[1], f[2]);
        for (int i = 0; i < 3; ++i) EXPECT_NEAR(ft[i], ref(i), 1e-8) << name;
      }
    }
  }
}

TEST(Flow, PreservesFlatness) {
  for (const char* name : {"so3", "tangent3", "so3_action", "sympl2", "su2", "abelian"}) {
    const BuiltinModel bm = builtin_model(name);
    const GaugeField g = bm.flat_field(2, 61);
    const GaugeField gt = flow_gauge(g, pulled_back_parameter(g, random_section(bm.A, 62, 0.4)), 1.0, 100);
    const FlatReport fr = is_flat(gt, 1e-7, sample_points(kPlane, 12, 63));
    EXPECT_TRUE(fr.flat) << name << " " << fr.max_anchor << " " << fr.max_field;
  }
}

TEST(Flow, LeavingTheBaseBoxIsRejected) {
  const BuiltinModel bm = builtin_model("tangent3");
  const GaugeField g = bm.flat_field(2, 3);
  const GaugeField gt = flow_gauge(g, pulled_back_parameter(g, constant_map(3, {5.0, 0.0, 0.0})), 1.0, 20);
  EXPECT_THROW(gt.f(Point{0.0, 0.0}), FlowError);
}

TEST(Flow, PulledBackParameterComposesWithBaseMap) {
  const GaugeField g = random_gauge_field(builtin_model("su2").A, 2, 71);
  const ASection s = random_section(g.A, 72);
  const GaugeParameter p = pulled_back_parameter(g, s);
  for (const auto& u : sample_points(kPlane, 20, 73)) {
    const auto a = p.eps(u), b = s(g.f(u));
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-12);
  }
}

TEST(Flow, PlainAndPulledBackAgreeOnAnchoredFields) {
  const GaugeField g = builtin_model("su2").flat_field(2, 81);
  const ASection s = random_section(g.A, 82);
  const GaugeVariation a = infinitesimal_gauge(g, pulled_back_parameter(g, s));
  const GaugeVariation b = infinitesimal_gauge(g, plain_parameter(g, pulled_back_parameter(g, s).eps));
  for (const auto& u : sample_points(kPlane, 20, 83)) {
    const auto x = a.dtheta(u), y = b.dtheta(u);
    for (std::size_t k = 0; k < x.size(); ++k) EXPECT_NEAR(x[k], y[k], 1e-11);
  }
}

TEST(GroupGauge, ConstantRotationIsAdjoint) {
  const GaugeField g = random_gauge_field(so3_algebra(), 2, 91);
  const Eigen::Vector3d w(0.3, 1.2, -0.5);
  const Eigen::Matrix3d R = oracle::expm(w);
  std::vector<double> Rv(9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) Rv[i * 3 + j] = R(i, j);
  const GaugeField gr = apply_group_gauge(g, GroupGauge{constant_map(2, Rv), so3_generators()});
  for (const auto& u : sample_points(kPlane, 10, 92)) {
    const auto th = g.theta(u), tr = gr.theta(u);
    for (std::size_t mu = 0; mu < 2; ++mu) {
      const Eigen::Vector3d ref = R.transpose() * column(th, mu);
      for (int a = 0; a < 3; ++a) EXPECT_NEAR(tr[a * 2 + mu], ref(a), 1e-14);
    }
  }
}

TEST(GroupGauge, FieldStrengthTransformsByAdjointOnGrid) {
  const auto pts = grid33();
  for (const char* name : {"so3", "so3_action"}) {
    const GaugeField g = random_gauge_field(builtin_model(name).A, 2, 101);
    for (std::uint64_t k = 0; k < 10; ++k) {
      const SmoothMap R = so3::random_rotation_field(2, 200 + k);
      EXPECT_LE(group_gauge_defect(GroupGauge{R, so3_generators()}, pts), 1e-10);
      const GaugeField gr = apply_group_gauge(g, GroupGauge{R, so3_generators()});
      double err = 0.0;
      for (const auto& u : pts) {
        const Eigen::Matrix3d Rm = oracle::to_eigen(R(u));
        const auto F = field_strength(g, u), Fr = field_strength(gr, u);
        for (std::size_t mn = 0; mn < 4; ++mn) {
          const Eigen::Vector3d ref = Rm.transpose() * Eigen::Vector3d(F[mn], F[4 + mn], F[8 + mn]);
          for (int a = 0; a < 3; ++a) err = std::max(err, std::abs(Fr[a * 4 + mn] - ref(a)));
        }
      }
      EXPECT_LE(err, 1e-9) << name << " " << k;
    }
  }
}

TEST(GroupGauge, InverseRoundTrip) {
  const GaugeField g = random_gauge_field(so3_action_r3(), 2, 111);
  const SmoothMap R = so3::random_rotation_field(2, 112);
  const GaugeField back = apply_group_gauge(apply_group_gauge(g, GroupGauge{R, so3_generators()}),
                                            GroupGauge{transpose_field(R), so3_generators()});
  for (const auto& u : sample_points(kPlane, 20, 113)) {
    const auto a = g.theta(u), b = back.theta(u);
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-10);
    const auto f = g.f(u), fb = back.f(u);
    for (std::size_t k = 0; k < f.size(); ++k) EXPECT_NEAR(f[k], fb[k], 1e-10);
  }
}

TEST(GroupGauge, PureGaugeFromZeroIsFlat) {
  const GaugeField z = zero_gauge_field(so3_algebra(), 2);
  const GaugeField p = apply_group_gauge(z, GroupGauge{so3::random_rotation_field(2, 5), so3_generators()});
  EXPECT_TRUE(is_flat(p, 1e-9, sample_points(kPlane, 50, 6)).flat);
}

TEST(GroupGauge, BasisMismatchIsRejected) {
  auto gens = so3_generators();
  for (auto& e : gens)
    for (auto& v : e.data) v *= 2.0;
  const GaugeField g = random_gauge_field(so3_algebra(), 2, 1);
  EXPECT_THROW(apply_group_gauge(g, GroupGauge{so3::random_rotation_field(2, 1), gens}), BasisMismatch);
  const GaugeField t = random_gauge_field(builtin_model("tangent3").A, 2, 1);
  EXPECT_THROW(apply_group_gauge(t, GroupGauge{so3::random_rotation_field(2, 1), so3_generators()}),
               BasisMismatch);
}

TEST(Covariance, HalvingRatioOnSo3AndSu2) {
  for (const char* name : {"so3", "su2", "so3_action"}) {
    const LieAlgebroid A = builtin_model(name).A;
    const GaugeField g = random_gauge_field(A, 2, 121, 0.3);
    const CovarianceReport r =
        covariance_check(g, random_section(A, 122, 0.4), random_oneform(A, 123), random_function(A, 124));
    ASSERT_EQ(r.ratios.size(), 2u);
    for (double q : r.ratios) {
      EXPECT_GE(q, 3.5) << name;
      EXPECT_LE(q, 4.5) << name;
    }
    for (double o : r.orders) EXPECT_GE(o, 1.8) << name;
  }
}

TEST(Covariance, AnchorViolatingFieldStillCovariant) {
  const LieAlgebroid A = builtin_model("su2").A;
  const GaugeField g = random_gauge_field(A, 2, 131, 0.3);
  double T = 0.0;
  for (const auto& u : sample_points(kPlane, 12, 1)) T = std::max(T, max_abs(anchor_residual(g, u)));
  EXPECT_GT(T, 0.1);
  const CovarianceReport r = covariance_check(g, random_section(A, 132, 0.4), random_oneform(A, 133), random_function(A, 134));
  EXPECT_GE(r.ratios.back(), 3.5);
  EXPECT_LE(r.ratios.back(), 4.5);
}

TEST(Covariance, ZeroParameterAndFlatField) {
  const LieAlgebroid A = builtin_model("su2").A;
  const GaugeField g = random_gauge_field(A, 2, 141, 0.3);
  const CovarianceReport z = covariance_check(g, constant_map(3, {0.0, 0.0, 0.0}), random_oneform(A, 1), random_function(A, 2));
  for (double v : z.residual) EXPECT_EQ(v, 0.0);
  const GaugeField flat = builtin_model("su2").flat_field(2, 142);
  const CovarianceReport f = covariance_check(flat, random_section(A, 143, 0.4), random_oneform(A, 3), random_function(A, 4));
  for (double v : f.residual) EXPECT_LE(v, 1e-8);
}

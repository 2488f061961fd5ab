#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nlg/expr.hpp"
#include "nlg/sweep.hpp"
#include "oracles.hpp"

using namespace nlg;

namespace {

Chart xy() { return Chart({"x1", "x2"}, {{-2.0, 2.0}, {-2.0, 2.0}}); }

const std::vector<std::string> kSamples = {
    "x1 + 2*x2",
    "sin(x1)^2 + cos(x2)*x1",
    "exp(x1*x2) / (3 + x2^2)",
    "-x1^3 + (x1 - x2)*(x1 + x2)",
    "cos(sin(x1) + exp(-x2))",
    "x1/(1.5 + cos(x2)) - 4.25e-1*x2^4",
};

}  // namespace

TEST(Expr, SumOfProductTree) {
  const Expr e = parse_expr("x1 + 2*x2", xy());
  const ExprNode& r = e.root();
  ASSERT_EQ(r.kind, ExprKind::Add);
  EXPECT_EQ(r.lhs->kind, ExprKind::Var);
  EXPECT_EQ(r.lhs->var, 0);
  ASSERT_EQ(r.rhs->kind, ExprKind::Mul);
  EXPECT_EQ(r.rhs->lhs->kind, ExprKind::Number);
  EXPECT_EQ(r.rhs->lhs->number, 2.0);
  EXPECT_EQ(r.rhs->rhs->var, 1);
}

TEST(Expr, PythagoreanIdentity) {
  const Expr e = parse_expr("sin(x1)^2 + cos(x1)^2", xy());
  for (double t : {-1.7, 0.0, 0.3, 1.9}) {
    const std::array<double, 2> x{t, 0.0};
    EXPECT_NEAR(e.eval<double>(x), 1.0, 1e-15);
  }
}

TEST(Expr, SyntaxErrorCarriesOffset) {
  try {
    parse_expr("x1 + ", xy());
    FAIL() << "expected a syntax error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 5u);
  }
  EXPECT_THROW(parse_expr("x1 +* x2", xy()), ParseError);
  EXPECT_THROW(parse_expr("2 x1", xy()), ParseError);
  EXPECT_THROW(parse_expr("x1^1.5", xy()), ParseError);
  EXPECT_THROW(parse_expr("(x1", xy()), ParseError);
}

TEST(Expr, UnknownIdentifierNamed) {
  try {
    parse_expr("x1 + y7", xy());
    FAIL() << "expected an unknown identifier";
  } catch (const UnknownIdentifier& e) {
    EXPECT_EQ(e.name(), "y7");
  }
}

TEST(Expr, PrintParseRoundTrip) {
  for (const auto& s : kSamples) {
    const Expr e = parse_expr(s, xy());
    const Expr back = parse_expr(to_string(e), xy());
    EXPECT_TRUE(back == e) << s;
    EXPECT_EQ(to_string(back), to_string(e)) << s;
  }
}

TEST(SmoothMap, PointEvaluations) {
  EXPECT_EQ(identity_map(2)(Point{0.3, -1.0}), (Point{0.3, -1.0}));
  EXPECT_EQ(parse_map({"x1*x2"}, xy())(Point{2.0, 3.0})[0], 6.0);
  const Chart line({"x1"}, {{-2.0, 2.0}});
  EXPECT_NEAR(parse_map({"exp(x1)"}, line)(Point{1.0})[0], std::numbers::e, 1e-12);
}

TEST(SmoothMap, NonFiniteValueReportsPoint) {
  const Chart line({"x1"}, {{-2.0, 2.0}});
  try {
    parse_map({"1/x1"}, line)(Point{0.0});
    FAIL() << "expected an evaluation error";
  } catch (const EvaluationError& e) {
    EXPECT_EQ(e.point(), Point{0.0});
  }
}

TEST(Jacobian, LinearMapIsExact) {
  Matrix a(2, 3);
  a.data = {1.5, -2.0, 0.25, 3.0, 0.0, -7.0};
  const Matrix j = jacobian(linear_map(a), Point{0.4, -0.3, 2.0});
  EXPECT_EQ(j.data, a.data);
}

TEST(Jacobian, SineAtZero) {
  const Chart line({"x1"}, {{-2.0, 2.0}});
  EXPECT_EQ(jacobian(parse_map({"sin(x1)"}, line), Point{0.0}).data[0], 1.0);
}

TEST(Jacobian, AgreesWithCentralDifferences) {
  const auto pts = sample_points(xy(), 100, 3);
  for (const auto& s : kSamples) {
    const SmoothMap m = parse_map({s}, xy());
    for (const auto& x : pts) {
      const Matrix j = jacobian(m, x);
      const Matrix fd = fd_jacobian(m, x, 1e-5);
      for (std::size_t k = 0; k < j.data.size(); ++k)
        EXPECT_LE(std::abs(j.data[k] - fd.data[k]), 1e-6 * (1.0 + std::abs(j.data[k]))) << s;
    }
  }
}

TEST(Jacobian, AgreesWithIndependentStencil) {
  const SmoothMap m = parse_map({kSamples[2], kSamples[4]}, xy());
  for (const auto& x : sample_points(xy(), 20, 8)) {
    const Matrix j = jacobian(m, x);
    for (std::size_t k = 0; k < 2; ++k) {
      const auto d = oracle::partial(m, x, k);
      for (std::size_t i = 0; i < 2; ++i) EXPECT_NEAR(j(i, k), d[i], 1e-9);
    }
  }
}

TEST(Jacobian, ChainRuleOnComposition) {
  const SmoothMap inner = parse_map({"sin(x1)*x2", "x1 - x2^2"}, xy());
  const SmoothMap outer = parse_map({"exp(x1)*x2", "x1^2", "cos(x1 + x2)"}, xy());
  const SmoothMap comp = compose(outer, inner);
  for (const auto& x : sample_points(xy(), 25, 4)) {
    const Matrix jc = jacobian(comp, x);
    const Matrix jo = jacobian(outer, inner(x));
    const Matrix ji = jacobian(inner, x);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t k = 0; k < 2; ++k) {
        double s = 0.0;
        for (std::size_t l = 0; l < 2; ++l) s += jo(i, l) * ji(l, k);
        EXPECT_NEAR(jc(i, k), s, 1e-13 * (1.0 + std::abs(s)));
      }
  }
}

TEST(Dual, NestedLevelsGiveHigherDerivatives) {
  // d^3/dx^3 sin(x) = -cos(x)
  const double x = 0.7;
  D3 v(D2(D1(x, 1.0), D1(1.0, 0.0)), D2(D1(1.0, 0.0), D1(0.0, 0.0)));
  const D3 s = sin(v);
  EXPECT_NEAR(s.v.v.v, std::sin(x), 1e-15);
  EXPECT_NEAR(s.d.v.v, std::cos(x), 1e-15);
  EXPECT_NEAR(s.d.d.v, -std::sin(x), 1e-15);
  EXPECT_NEAR(s.d.d.d, -std::cos(x), 1e-15);
}

TEST(FdJacobian, QuadraticAndConstant) {
  const Chart line({"x1"}, {{-2.0, 2.0}});
  EXPECT_NEAR(fd_jacobian(parse_map({"x1^2"}, line), Point{1.0}, 1e-4).data[0], 2.0, 1e-7);
  const Matrix z = fd_jacobian(constant_map(2, {1.0, -4.0}), Point{0.2, 0.9}, 1e-4);
  for (double v : z.data) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(SamplePoints, DeterministicAndInsideBox) {
  const Chart unit({"a", "b"}, {{0.0, 1.0}, {0.0, 1.0}});
  EXPECT_EQ(sample_points(unit, 1, 99).size(), 1u);
  EXPECT_TRUE(unit.contains(sample_points(unit, 1, 99)[0]));
  EXPECT_EQ(sample_points(unit, 50, 5), sample_points(unit, 50, 5));
  EXPECT_NE(sample_points(unit, 50, 5), sample_points(unit, 50, 6));
  for (const auto& p : sample_points(unit, 100, 12))
    for (double v : p) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
}

TEST(Chart, RejectsInconsistentShapes) {
  EXPECT_THROW(Chart({"a", "b"}, {{0.0, 1.0}}), std::invalid_argument);
  EXPECT_THROW(Chart({"a"}, {{1.0, 0.0}}), std::invalid_argument);
}

TEST(Sweep, ParallelMaxMatchesSerial) {
  const auto pts = sample_points(xy(), 2000, 21);
  const SmoothMap m = parse_map({kSamples[3]}, xy());
  auto residual = [&](std::size_t i) { return std::abs(m(pts[i])[0]); };
  const ArgMax s = serial::max_over(pts.size(), residual);
  const ArgMax p = parallel::max_over(pts.size(), residual);
  EXPECT_EQ(s.value, p.value);
  EXPECT_EQ(s.index, p.index);
}

TEST(Sweep, TiesResolveToLowestIndex) {
  auto flat = [](std::size_t i) { return i % 7 == 3 ? 2.0 : 1.0; };
  EXPECT_EQ(parallel::max_over(1000, flat).index, 3);
  EXPECT_EQ(serial::max_over(1000, flat).index, 3);
}

TEST(Sweep, NanIsNeverMasked) {
  auto r = [](std::size_t i) { return i == 500 ? std::nan("") : 1.0; };
  EXPECT_TRUE(std::isinf(parallel::max_over(1000, r).value));
  EXPECT_EQ(parallel::max_over(1000, r).index, 500);
}

TEST(Sweep, ExceptionsPropagate) {
  auto r = [](std::size_t i) -> double {
    if (i == 77) throw std::runtime_error("boom");
    return 0.0;
  };
  EXPECT_THROW(parallel::max_over(200, r), std::runtime_error);
}

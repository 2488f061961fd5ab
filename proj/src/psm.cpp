#include "nlg/psm.hpp"

#include <cmath>

#include "nlg/expr.hpp"
#include "nlg/sweep.hpp"

namespace nlg {

PoissonStructure make_poisson(std::string name, Chart chart, SmoothMap pi, bool declared_poisson) {
  const std::size_t n = chart.dim();
  if (pi.dim() != n || pi.codim() != n * n)
    throw std::invalid_argument("Poisson bivector must map the chart to n*n components");
  const auto pts = sample_points(chart, kDefaultAxiomPoints, kDefaultAxiomSeed);
  for (const auto& x : pts) {
    const Point v = pi(x);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (std::abs(v[i * n + j] + v[j * n + i]) > 1e-12)
          throw std::invalid_argument("bivector " + name + " is not antisymmetric");
  }
  const double jac = parallel::max_over(pts.size(), [&](std::size_t k) {
                       return max_abs(poisson_jacobiator(pi, pts[k]));
                     }).value;
  return PoissonStructure{std::move(name), std::move(chart), std::move(pi), declared_poisson, jac};
}

std::vector<PoissonStructure> builtin_poisson_models() {
  std::vector<PoissonStructure> out;
  const Chart r2 = Chart::cube(2, "x", -2.0, 2.0);
  const Chart r3 = Chart::cube(3, "x", -2.0, 2.0);
  out.push_back(make_poisson("sympl2", r2, parse_map({"0", "1", "-1", "0"}, r2), true));
  out.push_back(make_poisson("su2", r3,
                             parse_map({"0", "x3", "-x2", "-x3", "0", "x1", "x2", "-x1", "0"}, r3),
                             true));
  out.push_back(make_poisson("nonpoisson", r3,
                             parse_map({"0", "x2", "0", "-x2", "0", "x1", "0", "-x1", "0"}, r3),
                             false));
  const Chart q3 = Chart::cube(3, "x", -1.5, 1.5);
  out.push_back(make_poisson(
      "quad", q3,
      parse_map({"0", "x1*x2", "-x3*x1", "-x1*x2", "0", "x2*x3", "x3*x1", "-x2*x3", "0"}, q3), true));
  return out;
}

PoissonStructure builtin_poisson(const std::string& name) {
  for (auto& ps : builtin_poisson_models())
    if (ps.name == name) return ps;
  throw std::invalid_argument("unknown Poisson model: " + name);
}

PSMField make_psm_field(const PoissonStructure& ps, Chart source, SmoothMap X, SmoothMap eta) {
  const std::size_t n = ps.dim();
  if (source.dim() != 2) throw std::invalid_argument("PSM source must be 2-dimensional");
  if (X.dim() != 2 || X.codim() != n) throw std::invalid_argument("X must map the source to the chart");
  if (eta.dim() != 2 || eta.codim() != 2 * n) throw std::invalid_argument("eta must have 2*n components");
  return PSMField{std::move(source), std::move(X), std::move(eta)};
}

GaugeField as_gauge_field(const PoissonStructure& ps, const PSMField& phi) {
  const std::size_t n = ps.dim();
  const std::size_t m = phi.source.dim();
  const SmoothMap eta = phi.eta;
  SmoothMap theta(m, n * m, [eta, n, m](auto u, auto y) {
    using T = typename decltype(y)::value_type;
    const auto e = eta.eval<T>(u);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t mu = 0; mu < m; ++mu) y[i * m + mu] = e[mu * n + i];
  });
  return make_gauge_field(phi.source, cotangent_algebroid(ps.chart, ps.pi, "cotangent(" + ps.name + ")"),
                          phi.X, std::move(theta));
}

PSMField read_back(const GaugeField& g) {
  const std::size_t n = g.A.rank();
  const std::size_t m = g.m();
  const SmoothMap theta = g.theta;
  SmoothMap eta(m, m * n, [theta, n, m](auto u, auto y) {
    using T = typename decltype(y)::value_type;
    const auto th = theta.eval<T>(u);
    for (std::size_t mu = 0; mu < m; ++mu)
      for (std::size_t i = 0; i < n; ++i) y[mu * n + i] = th[i * m + mu];
  });
  return PSMField{g.source, g.f, std::move(eta)};
}

EOMResidual eom_residual(const PoissonStructure& ps, const PSMField& phi, std::span<const double> u) {
  const GaugeField g = as_gauge_field(ps, phi);
  return EOMResidual{anchor_residual(g, u), field_strength(g, u)};
}

EOMResidual eom_components(const PoissonStructure& ps, const PSMField& phi, std::span<const double> u) {
  const std::size_t n = ps.dim();
  const std::size_t m = 2;
  const Point X = phi.X(u);
  const Matrix dX = jacobian(phi.X, u);      // (i, mu)
  const Point eta = phi.eta(u);              // (mu, i)
  const Matrix deta = jacobian(phi.eta, u);  // (mu*n + i, nu) = d_nu eta_{mu i}
  const Point pi = ps.pi(X);
  const Matrix dpi = jacobian(ps.pi, X);     // (j*n + k, i) = d_i pi^jk
  EOMResidual out{std::vector<double>(n * m), std::vector<double>(n * m * m)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t mu = 0; mu < m; ++mu) {
      double acc = dX(i, mu);
      for (std::size_t j = 0; j < n; ++j) acc += pi[i * n + j] * eta[mu * n + j];
      out.r1[i * m + mu] = acc;
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t mu = 0; mu < m; ++mu)
      for (std::size_t nu = 0; nu < m; ++nu) {
        double acc = deta(nu * n + i, mu) - deta(mu * n + i, nu);
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t k = 0; k < n; ++k)
            acc += dpi(j * n + k, i) * eta[mu * n + j] * eta[nu * n + k];
        out.r2[(i * m + mu) * m + nu] = acc;
      }
  return out;
}

PSMField random_psm_field(const PoissonStructure& ps, std::uint64_t seed, double amplitude) {
  const std::size_t n = ps.dim();
  SeededRng rng(seed);
  TrigSpec xs;
  double half = 1e300;
  for (const auto& iv : ps.chart.box()) {
    xs.offset.push_back(0.5 * (iv.lo + iv.hi));
    half = std::min(half, 0.5 * (iv.hi - iv.lo));
  }
  xs.amplitude = 0.5 * half;
  TrigSpec es;
  es.amplitude = amplitude;
  const Chart source = Chart::cube(2, "u", -1.0, 1.0);
  return make_psm_field(ps, source, random_trig_map(2, n, rng.next(), xs),
                        random_trig_map(2, 2 * n, rng.next(), es));
}

PSMField symplectic_on_shell(const PoissonStructure& ps, const Chart& source, SmoothMap X) {
  const std::size_t n = ps.dim();
  const std::vector<double> center = [&] {
    std::vector<double> c;
    for (const auto& iv : ps.chart.box()) c.push_back(0.5 * (iv.lo + iv.hi));
    return c;
  }();
  // Gauss-Jordan inverse of the (constant) bivector matrix.
  std::vector<double> a = ps.pi(center), inv(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) inv[i * n + i] = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t i = col + 1; i < n; ++i)
      if (std::abs(a[i * n + col]) > std::abs(a[piv * n + col])) piv = i;
    if (std::abs(a[piv * n + col]) < 1e-12) throw std::invalid_argument("bivector is not invertible");
    for (std::size_t j = 0; j < n; ++j) {
      std::swap(a[col * n + j], a[piv * n + j]);
      std::swap(inv[col * n + j], inv[piv * n + j]);
    }
    const double p = a[col * n + col];
    for (std::size_t j = 0; j < n; ++j) {
      a[col * n + j] /= p;
      inv[col * n + j] /= p;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col) continue;
      const double f = a[i * n + col];
      for (std::size_t j = 0; j < n; ++j) {
        a[i * n + j] -= f * a[col * n + j];
        inv[i * n + j] -= f * inv[col * n + j];
      }
    }
  }
  const std::size_t m = source.dim();
  SmoothMap eta(m, m * n, [X, inv, n, m](auto u, auto y) {
    using T = typename decltype(y)::value_type;
    if constexpr (!liftable_v<T>) {
      throw_depth();
    } else {
      std::vector<T> val(n), dX(n * m);
      value_and_jacobian<T>(X, u, val, dX);
      for (std::size_t mu = 0; mu < m; ++mu)
        for (std::size_t j = 0; j < n; ++j) {
          T acc(0.0);
          for (std::size_t i = 0; i < n; ++i) acc += -inv[j * n + i] * dX[i * m + mu];
          y[mu * n + j] = acc;
        }
    }
  });
  return make_psm_field(ps, source, std::move(X), std::move(eta));
}

}  // namespace nlg

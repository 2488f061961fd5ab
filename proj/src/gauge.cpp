#include "nlg/gauge.hpp"

#include <cmath>
#include <sstream>

#include "nlg/sweep.hpp"

namespace nlg {
namespace {

struct Dims {
  std::size_t m, n, r;
};

Dims dims_of(const GaugeField& g) { return {g.m(), g.A.dim(), g.A.rank()}; }

// Right-hand side of the gauge flow at one source point.
struct GaugeFlowModel {
  Dims d;
  Chart base;
  SmoothMap rho;
  SmoothMap C;
  SmoothMap eps;
  std::optional<SmoothMap> eps_hat;

  template <class T>
  void velocity(std::span<const T> u, std::span<const T> f, std::span<const T> th,
                std::span<T> df, std::span<T> dth) const {
    const auto [m, n, r] = d;
    std::vector<T> rh(n * r), c(r * r * r), e(r);
    rho.eval<T>(f, std::span<T>(rh));
    C.eval<T>(f, std::span<T>(c));
    if (eps_hat) {
      std::vector<T> de(r * n);
      value_and_jacobian<T>(*eps_hat, f, e, de);
      for (std::size_t a = 0; a < r; ++a)
        for (std::size_t mu = 0; mu < m; ++mu) {
          T acc(0.0);
          for (std::size_t b = 0; b < r; ++b) {
            const T& tb = th[b * m + mu];
            for (std::size_t cc = 0; cc < r; ++cc) acc += c[(a * r + b) * r + cc] * tb * e[cc];
            for (std::size_t j = 0; j < n; ++j) acc += rh[j * r + b] * tb * de[a * n + j];
          }
          dth[a * m + mu] = acc;
        }
    } else {
      std::vector<T> de(r * m);
      value_and_jacobian<T>(eps, u, e, de);
      for (std::size_t a = 0; a < r; ++a)
        for (std::size_t mu = 0; mu < m; ++mu) {
          T acc = de[a * m + mu];
          for (std::size_t b = 0; b < r; ++b)
            for (std::size_t cc = 0; cc < r; ++cc)
              acc += c[(a * r + b) * r + cc] * th[b * m + mu] * e[cc];
          dth[a * m + mu] = acc;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
      T acc(0.0);
      for (std::size_t a = 0; a < r; ++a) acc += rh[i * r + a] * e[a];
      df[i] = acc;
    }
  }

  template <class T>
  void check_inside(std::span<const T> u, std::span<const T> f) const {
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (!base.box()[i].contains(value_of(f[i]))) {
        Point at;
        for (const auto& v : u) at.push_back(value_of(v));
        std::ostringstream os;
        os << "gauge flow left the base box in coordinate " << base.labels()[i];
        throw FlowError(os.str(), at);
      }
    }
  }
};

GaugeFlowModel flow_model(const GaugeField& g, const GaugeParameter& eps) {
  return GaugeFlowModel{dims_of(g), g.A.base(), g.A.anchor(), g.A.structure(), eps.eps,
                        eps.eps_hat};
}

std::vector<double> solve_gram_projector(const std::vector<Matrix>& gens) {
  // P = (G^T G)^{-1} G^T with G the k^2 x r matrix of vectorized generators.
  const std::size_t r = gens.size();
  const std::size_t kk = gens.front().data.size();
  std::vector<double> gram(r * r), inv(r * r, 0.0);
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b) {
      double s = 0.0;
      for (std::size_t p = 0; p < kk; ++p) s += gens[a].data[p] * gens[b].data[p];
      gram[a * r + b] = s;
    }
  for (std::size_t a = 0; a < r; ++a) inv[a * r + a] = 1.0;
  for (std::size_t col = 0; col < r; ++col) {
    std::size_t piv = col;
    for (std::size_t i = col + 1; i < r; ++i)
      if (std::abs(gram[i * r + col]) > std::abs(gram[piv * r + col])) piv = i;
    if (std::abs(gram[piv * r + col]) < 1e-14)
      throw BasisMismatch("generators are linearly dependent");
    for (std::size_t j = 0; j < r; ++j) {
      std::swap(gram[col * r + j], gram[piv * r + j]);
      std::swap(inv[col * r + j], inv[piv * r + j]);
    }
    const double p = gram[col * r + col];
    for (std::size_t j = 0; j < r; ++j) {
      gram[col * r + j] /= p;
      inv[col * r + j] /= p;
    }
    for (std::size_t i = 0; i < r; ++i) {
      if (i == col) continue;
      const double f = gram[i * r + col];
      for (std::size_t j = 0; j < r; ++j) {
        gram[i * r + j] -= f * gram[col * r + j];
        inv[i * r + j] -= f * inv[col * r + j];
      }
    }
  }
  std::vector<double> proj(r * kk, 0.0);
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t p = 0; p < kk; ++p) {
      double s = 0.0;
      for (std::size_t b = 0; b < r; ++b) s += inv[a * r + b] * gens[b].data[p];
      proj[a * kk + p] = s;
    }
  return proj;
}

void check_generators(const LieAlgebroid& A, const std::vector<Matrix>& gens) {
  const std::size_t r = A.rank();
  if (gens.size() != r) throw BasisMismatch("generator count differs from the algebroid rank");
  const std::size_t k = gens.front().rows;
  for (const auto& e : gens)
    if (e.rows != k || e.cols != k) throw BasisMismatch("generators must be square of equal size");
  const auto proj = solve_gram_projector(gens);
  const std::size_t kk = k * k;
  for (const auto& x : sample_points(A.base(), 8, 7)) {
    const Point c = A.structure()(x);
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = 0; b < r; ++b) {
        std::vector<double> comm(kk, 0.0);
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j)
            for (std::size_t l = 0; l < k; ++l)
              comm[i * k + j] += gens[a](i, l) * gens[b](l, j) - gens[b](i, l) * gens[a](l, j);
        for (std::size_t cc = 0; cc < r; ++cc) {
          double coef = 0.0;
          for (std::size_t p = 0; p < kk; ++p) coef += proj[cc * kk + p] * comm[p];
          if (std::abs(coef - c[(cc * r + a) * r + b]) > 1e-10)
            throw BasisMismatch("generator commutators do not reproduce the structure functions");
        }
      }
  }
}

}  // namespace

GaugeField make_gauge_field(Chart source, LieAlgebroid A, SmoothMap f, SmoothMap theta) {
  const std::size_t m = source.dim();
  if (f.dim() != m || f.codim() != A.dim())
    throw std::invalid_argument("gauge field: f must map the source chart to the base");
  if (theta.dim() != m || theta.codim() != A.rank() * m)
    throw std::invalid_argument("gauge field: theta must have r*m components");
  return GaugeField{std::move(source), std::move(A), std::move(f), std::move(theta)};
}

GaugeField tangent_pushforward_field(const Chart& source, const Chart& base, SmoothMap f) {
  const std::size_t m = source.dim();
  const std::size_t n = base.dim();
  SmoothMap theta(m, n * m, [f, m, n](auto u, auto y) {
    using T = typename decltype(y)::value_type;
    if constexpr (!liftable_v<T>) {
      throw_depth();
    } else {
      std::vector<T> val(n);
      value_and_jacobian<T>(f, u, val, y);
    }
  });
  return make_gauge_field(source, tangent_algebroid(base), std::move(f), std::move(theta));
}

GaugeParameter plain_parameter(const GaugeField& g, SmoothMap eps) {
  if (eps.dim() != g.m() || eps.codim() != g.A.rank())
    throw std::invalid_argument("gauge parameter must map the source chart to R^r");
  return GaugeParameter{std::move(eps), std::nullopt};
}

GaugeParameter pulled_back_parameter(const GaugeField& g, ASection eps_hat) {
  if (eps_hat.dim() != g.A.dim() || eps_hat.codim() != g.A.rank())
    throw std::invalid_argument("pulled-back parameter must be a section of A");
  return GaugeParameter{compose(eps_hat, g.f), std::move(eps_hat)};
}

std::vector<double> anchor_residual(const GaugeField& g, std::span<const double> u) {
  const auto [m, n, r] = dims_of(g);
  std::vector<double> fv(n), df(n * m), th(r * m), rh(n * r);
  value_and_jacobian<double>(g.f, u, fv, df);
  g.theta.eval<double>(u, th);
  g.A.anchor().eval<double>(fv, rh);
  std::vector<double> out(n * m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t mu = 0; mu < m; ++mu) {
      double acc = df[i * m + mu];
      for (std::size_t a = 0; a < r; ++a) acc -= rh[i * r + a] * th[a * m + mu];
      out[i * m + mu] = acc;
    }
  return out;
}

std::vector<double> field_strength(const GaugeField& g, std::span<const double> u) {
  const auto [m, n, r] = dims_of(g);
  std::vector<double> th(r * m), dth(r * m * m), fv(n), c(r * r * r);
  value_and_jacobian<double>(g.theta, u, th, dth);
  g.f.eval<double>(u, fv);
  g.A.structure().eval<double>(fv, c);
  std::vector<double> out(r * m * m);
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t mu = 0; mu < m; ++mu)
      for (std::size_t nu = 0; nu < m; ++nu) {
        double acc = dth[(a * m + nu) * m + mu] - dth[(a * m + mu) * m + nu];
        for (std::size_t b = 0; b < r; ++b)
          for (std::size_t cc = 0; cc < r; ++cc)
            acc += c[(a * r + b) * r + cc] * th[b * m + mu] * th[cc * m + nu];
        out[(a * m + mu) * m + nu] = acc;
      }
  return out;
}

std::vector<double> curvature_on_function(const GaugeField& g, const SmoothMap& h,
                                          std::span<const double> u) {
  const auto [m, n, r] = dims_of(g);
  const Matrix dhf = jacobian(compose(h, g.f), u);  // d_M (theta^* h), theta^* h = h o f
  const Point fv = g.f(u);
  const Point dAh = d_A(g.A, AForm{0, h}).coeffs(fv);
  const Point th = g.theta(u);
  std::vector<double> out(m);
  for (std::size_t mu = 0; mu < m; ++mu) {
    double acc = dhf(0, mu);
    for (std::size_t a = 0; a < r; ++a) acc -= dAh[a] * th[a * m + mu];
    out[mu] = acc;
  }
  return out;
}

std::vector<double> anchor_contraction(const GaugeField& g, const SmoothMap& h,
                                       std::span<const double> u) {
  const auto [m, n, r] = dims_of(g);
  const auto t = anchor_residual(g, u);
  const Matrix dh = jacobian(h, g.f(u));
  std::vector<double> out(m, 0.0);
  for (std::size_t mu = 0; mu < m; ++mu)
    for (std::size_t j = 0; j < n; ++j) out[mu] += t[j * m + mu] * dh(0, j);
  return out;
}

SmoothMap pullback_oneform(const GaugeField& g, const AForm& lambda) {
  if (lambda.degree != 1) throw std::invalid_argument("pullback_oneform expects a 1-form");
  const auto [m, n, r] = dims_of(g);
  const SmoothMap f = g.f;
  const SmoothMap theta = g.theta;
  const SmoothMap lam = lambda.coeffs;
  return SmoothMap(m, m, [=, m = m, n = n, r = r](auto u, auto y) {
    using T = typename decltype(y)::value_type;
    std::vector<T> fv(n), th(r * m), lv(r);
    f.eval<T>(u, std::span<T>(fv));
    theta.eval<T>(u, std::span<T>(th));
    lam.eval<T>(std::span<const T>(fv), std::span<T>(lv));
    for (std::size_t mu = 0; mu < m; ++mu) {
      T acc(0.0);
      for (std::size_t a = 0; a < r; ++a) acc += lv[a] * th[a * m + mu];
      y[mu] = acc;
    }
  });
}

std::vector<double> curvature_on_oneform(const GaugeField& g, const AForm& lambda,
                                         std::span<const double> u) {
  const auto [m, n, r] = dims_of(g);
  const Matrix dp = jacobian(pullback_oneform(g, lambda), u);  // dp(nu, mu) = d_mu (theta^* lambda)_nu
  const Point fv = g.f(u);
  const Point om = d_A(g.A, lambda).coeffs(fv);
  const Point th = g.theta(u);
  std::vector<double> out(m * m);
  for (std::size_t mu = 0; mu < m; ++mu)
    for (std::size_t nu = 0; nu < m; ++nu) {
      double acc = dp(nu, mu) - dp(mu, nu);
      for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b) acc -= om[a * r + b] * th[a * m + mu] * th[b * m + nu];
      out[mu * m + nu] = acc;
    }
  return out;
}

std::vector<double> curvature_decomposition(const GaugeField& g, const AForm& lambda,
                                            std::span<const double> u) {
  const auto [m, n, r] = dims_of(g);
  const auto F = field_strength(g, u);
  const auto T = anchor_residual(g, u);
  const Point fv = g.f(u);
  const Point th = g.theta(u);
  std::vector<double> lv(r), dl(r * n);
  value_and_jacobian<double>(lambda.coeffs, fv, lv, dl);
  // s_mu,a = T^j_mu d_j lambda_a
  std::vector<double> s(m * r, 0.0);
  for (std::size_t mu = 0; mu < m; ++mu)
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t j = 0; j < n; ++j) s[mu * r + a] += T[j * m + mu] * dl[a * n + j];
  std::vector<double> out(m * m);
  for (std::size_t mu = 0; mu < m; ++mu)
    for (std::size_t nu = 0; nu < m; ++nu) {
      double acc = 0.0;
      for (std::size_t a = 0; a < r; ++a)
        acc += lv[a] * F[(a * m + mu) * m + nu] + s[mu * r + a] * th[a * m + nu] -
               s[nu * r + a] * th[a * m + mu];
      out[mu * m + nu] = acc;
    }
  return out;
}

FlatReport is_flat(const GaugeField& g, double tol, const std::vector<Point>& pts) {
  FlatReport rep;
  rep.tol = tol;
  const ArgMax t = parallel::max_over(pts.size(), [&](std::size_t k) { return max_abs(anchor_residual(g, pts[k])); });
  const ArgMax f = parallel::max_over(pts.size(), [&](std::size_t k) { return max_abs(field_strength(g, pts[k])); });
  rep.max_anchor = t.value;
  rep.max_field = f.value;
  if (t.index >= 0) rep.worst_anchor = pts[static_cast<std::size_t>(t.index)];
  if (f.index >= 0) rep.worst_field = pts[static_cast<std::size_t>(f.index)];
  rep.flat = rep.max_anchor <= tol && rep.max_field <= tol;
  return rep;
}

MorphismReport morphism_residual(const GaugeField& g, const std::vector<SmoothMap>& functions,
                                 const std::vector<AForm>& covectors,
                                 const std::vector<Point>& pts, double tol) {
  if (functions.empty() && covectors.empty())
    throw std::invalid_argument("morphism_residual needs at least one generator");
  MorphismReport rep;
  rep.tol = tol;
  const ArgMax fn = parallel::max_over(pts.size(), [&](std::size_t k) {
    double m = 0.0;
    for (const auto& h : functions) m = std::max(m, max_abs(curvature_on_function(g, h, pts[k])));
    return m;
  });
  const ArgMax om = parallel::max_over(pts.size(), [&](std::size_t k) {
    double m = 0.0;
    for (const auto& l : covectors) m = std::max(m, max_abs(curvature_on_oneform(g, l, pts[k])));
    return m;
  });
  rep.max_function = fn.value;
  rep.max_oneform = om.value;
  const ArgMax& worst = fn.value >= om.value ? fn : om;
  if (worst.index >= 0) rep.worst = pts[static_cast<std::size_t>(worst.index)];
  return rep;
}

std::vector<SmoothMap> coordinate_functions(const LieAlgebroid& A) {
  std::vector<SmoothMap> out;
  const std::size_t n = A.dim();
  for (std::size_t i = 0; i < n; ++i) {
    Matrix row(1, n);
    row(0, i) = 1.0;
    out.push_back(linear_map(row));
  }
  return out;
}

std::vector<AForm> basis_covectors(const LieAlgebroid& A) {
  std::vector<AForm> out;
  const std::size_t r = A.rank();
  for (std::size_t a = 0; a < r; ++a) {
    std::vector<double> e(r, 0.0);
    e[a] = 1.0;
    out.push_back(AForm{1, constant_map(A.dim(), e)});
  }
  return out;
}

GaugeVariation infinitesimal_gauge(const GaugeField& g, const GaugeParameter& eps) {
  const GaugeFlowModel model = flow_model(g, eps);
  const auto [m, n, r] = model.d;
  const SmoothMap f = g.f;
  const SmoothMap theta = g.theta;
  auto make = [=, m = m, n = n, r = r](bool want_df) {
    return SmoothMap(m, want_df ? n : r * m, [=](auto u, auto y) {
      using T = typename decltype(y)::value_type;
      if constexpr (!liftable_v<T>) {
        throw_depth();
      } else {
        std::vector<T> fv(n), th(r * m), df(n), dth(r * m);
        f.eval<T>(u, std::span<T>(fv));
        theta.eval<T>(u, std::span<T>(th));
        model.velocity<T>(u, fv, th, df, dth);
        const auto& src = want_df ? df : dth;
        for (std::size_t i = 0; i < y.size(); ++i) y[i] = src[i];
      }
    });
  };
  return GaugeVariation{make(true), make(false)};
}

GaugeField flow_gauge(const GaugeField& g, const GaugeParameter& eps, double t, std::size_t steps) {
  if (steps == 0) throw std::invalid_argument("flow_gauge needs at least one step");
  if (t == 0.0) return g;
  const GaugeFlowModel model = flow_model(g, eps);
  const auto [m, n, r] = model.d;
  const std::size_t dim = n + r * m;
  const SmoothMap f = g.f;
  const SmoothMap theta = g.theta;
  const SmoothMap state(m, dim, [=, m = m, n = n, r = r](auto u, auto y) {
    using T = typename decltype(y)::value_type;
    if constexpr (!liftable_v<T>) {
      throw_depth();
    } else {
      std::vector<T> s(dim), tmp(dim), k1(dim), k2(dim), k3(dim), k4(dim);
      f.eval<T>(u, std::span<T>(s.data(), n));
      theta.eval<T>(u, std::span<T>(s.data() + n, r * m));
      auto rhs = [&](const std::vector<T>& x, std::vector<T>& k) {
        std::span<const T> xs(x);
        std::span<T> ks(k);
        model.check_inside<T>(u, xs.first(n));
        model.velocity<T>(u, xs.first(n), xs.subspan(n), ks.first(n), ks.subspan(n));
      };
      const double h = t / static_cast<double>(steps);
      for (std::size_t step = 0; step < steps; ++step) {
        rhs(s, k1);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = s[i] + (0.5 * h) * k1[i];
        rhs(tmp, k2);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = s[i] + (0.5 * h) * k2[i];
        rhs(tmp, k3);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = s[i] + h * k3[i];
        rhs(tmp, k4);
        for (std::size_t i = 0; i < dim; ++i)
          s[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      }
      model.check_inside<T>(u, std::span<const T>(s).first(n));
      for (std::size_t i = 0; i < dim; ++i) y[i] = s[i];
    }
  });
  SmoothMap ft(m, n, [state, n = n](auto u, auto y) {
    using T = typename decltype(y)::value_type;
    const auto s = state.eval<T>(u);
    for (std::size_t i = 0; i < n; ++i) y[i] = s[i];
  });
  SmoothMap tht(m, r * m, [state, n = n](auto u, auto y) {
    using T = typename decltype(y)::value_type;
    const auto s = state.eval<T>(u);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = s[n + i];
  });
  return GaugeField{g.source, g.A, std::move(ft), std::move(tht)};
}

double group_gauge_defect(const GroupGauge& R, const std::vector<Point>& pts) {
  std::size_t k = 0;
  while (k * k < R.R.codim()) ++k;
  return parallel::max_over(pts.size(), [&](std::size_t idx) {
           const Point v = R.R(pts[idx]);
           double worst = 0.0;
           for (std::size_t i = 0; i < k; ++i)
             for (std::size_t j = 0; j < k; ++j) {
               double s = 0.0;
               for (std::size_t l = 0; l < k; ++l) s += v[l * k + i] * v[l * k + j];
               worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
             }
           if (k == 3) {
             const double det = v[0] * (v[4] * v[8] - v[5] * v[7]) - v[1] * (v[3] * v[8] - v[5] * v[6]) +
                                v[2] * (v[3] * v[7] - v[4] * v[6]);
             worst = std::max(worst, std::abs(det - 1.0));
           }
           return worst;
         })
      .value;
}

GaugeField apply_group_gauge(const GaugeField& g, const GroupGauge& R) {
  const auto [m, n, r] = dims_of(g);
  if (R.generators.empty()) throw BasisMismatch("group gauge has no generators");
  const std::size_t k = R.generators.front().rows;
  if (R.R.dim() != m || R.R.codim() != k * k)
    throw std::invalid_argument("group gauge must map the source chart to k x k matrices");
  check_generators(g.A, R.generators);

  bool moves_base = false;
  if (g.A.kind() == AlgebroidKind::Action) {
    if (g.A.generators().size() != r || n != k)
      throw BasisMismatch("action algebroid has no matching matrix generators");
    for (std::size_t a = 0; a < r; ++a)
      if (g.A.generators()[a].data != R.generators[a].data)
        throw BasisMismatch("action generators differ from the group gauge generators");
    moves_base = true;
  } else if (g.A.kind() != AlgebroidKind::LieAlgebra) {
    throw BasisMismatch("group gauges act only on Lie algebras and linear action algebroids");
  }

  const std::vector<double> proj = solve_gram_projector(R.generators);
  const std::vector<Matrix> gens = R.generators;
  const SmoothMap Rm = R.R;
  const SmoothMap theta = g.theta;
  const SmoothMap f = g.f;
  const std::size_t kk = k * k;

  SmoothMap theta2(m, r * m, [=, m = m, r = r](auto u, auto y) {
    using T = typename decltype(y)::value_type;
    if constexpr (!liftable_v<T>) {
      throw_depth();
    } else {
      std::vector<T> rv(kk), dr(kk * m), th(r * m);
      value_and_jacobian<T>(Rm, u, rv, dr);
      theta.eval<T>(u, std::span<T>(th));
      std::vector<T> X(kk), XR(kk), Y(kk);
      for (std::size_t mu = 0; mu < m; ++mu) {
        for (std::size_t p = 0; p < kk; ++p) {
          T acc(0.0);
          for (std::size_t a = 0; a < r; ++a) acc += th[a * m + mu] * gens[a].data[p];
          X[p] = acc;
        }
        // XR = X R + dR_mu, then Y = R^T XR.
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) {
            T acc = dr[(i * k + j) * m + mu];
            for (std::size_t l = 0; l < k; ++l) acc += X[i * k + l] * rv[l * k + j];
            XR[i * k + j] = acc;
          }
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) {
            T acc(0.0);
            for (std::size_t l = 0; l < k; ++l) acc += rv[l * k + i] * XR[l * k + j];
            Y[i * k + j] = acc;
          }
        for (std::size_t a = 0; a < r; ++a) {
          T acc(0.0);
          for (std::size_t p = 0; p < kk; ++p) acc += proj[a * kk + p] * Y[p];
          y[a * m + mu] = acc;
        }
      }
    }
  });

  SmoothMap f2 = f;
  if (moves_base) {
    f2 = SmoothMap(m, n, [=, n = n](auto u, auto y) {
      using T = typename decltype(y)::value_type;
      std::vector<T> rv(kk), fv(n);
      Rm.eval<T>(u, std::span<T>(rv));
      f.eval<T>(u, std::span<T>(fv));
      for (std::size_t i = 0; i < k; ++i) {
        T acc(0.0);
        for (std::size_t l = 0; l < k; ++l) acc += rv[l * k + i] * fv[l];
        y[i] = acc;
      }
    });
  }
  return GaugeField{g.source, g.A, std::move(f2), std::move(theta2)};
}

CovarianceReport covariance_check(const GaugeField& g, const ASection& eps_hat,
                                  const AForm& lambda, const SmoothMap& h,
                                  const CovarianceOptions& opts) {
  if (lambda.degree != 1) throw std::invalid_argument("covariance_check expects a 1-form");
  const GaugeParameter param = pulled_back_parameter(g, eps_hat);
  const AForm l_lambda = lie_derivative(g.A, eps_hat, lambda);
  const AForm l_h = lie_derivative(g.A, eps_hat, AForm{0, h});
  const auto pts = sample_points(g.source, opts.points, opts.seed);

  const auto f0_lambda = parallel::map_points<std::vector<double>>(
      pts.size(), [&](std::size_t k) { return curvature_on_oneform(g, lambda, pts[k]); });
  const auto f0_h = parallel::map_points<std::vector<double>>(
      pts.size(), [&](std::size_t k) { return curvature_on_function(g, h, pts[k]); });

  CovarianceReport rep;
  rep.times = opts.times;
  for (double t : opts.times) {
    const GaugeField gt = flow_gauge(g, param, t, opts.steps);
    const double w = kTransportSign * t;
    const AForm lambda_t{1, linear_combination({{1.0, lambda.coeffs}, {w, l_lambda.coeffs}})};
    const SmoothMap h_t = linear_combination({{1.0, h}, {w, l_h.coeffs}});
    const double r1 = parallel::max_over(pts.size(), [&](std::size_t k) {
                        auto v = curvature_on_oneform(gt, lambda_t, pts[k]);
                        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= f0_lambda[k][i];
                        return max_abs(v);
                      }).value;
    const double r0 = parallel::max_over(pts.size(), [&](std::size_t k) {
                        auto v = curvature_on_function(gt, h_t, pts[k]);
                        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= f0_h[k][i];
                        return max_abs(v);
                      }).value;
    rep.residual_oneform.push_back(r1);
    rep.residual_function.push_back(r0);
    rep.residual.push_back(std::max(r0, r1));
  }
  for (std::size_t i = 0; i + 1 < rep.residual.size(); ++i) {
    const double ratio = rep.residual[i] / rep.residual[i + 1];
    rep.ratios.push_back(ratio);
    rep.orders.push_back(std::log(ratio) / std::log(rep.times[i] / rep.times[i + 1]));
  }
  return rep;
}

}  // namespace nlg

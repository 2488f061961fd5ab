#include "nlg/algebroid.hpp"

#include <cmath>
#include <stdexcept>

#include "nlg/sweep.hpp"

namespace nlg {
namespace {

std::size_t cube_size(std::size_t r) { return r * r * r; }

std::size_t rank_from_structure(const std::vector<double>& c) {
  std::size_t r = 0;
  while (cube_size(r) < c.size()) ++r;
  if (cube_size(r) != c.size() || r == 0)
    throw std::invalid_argument("structure constants must have r^3 entries");
  return r;
}

SmoothMap zero_map(std::size_t dim, std::size_t codim) {
  return constant_map(dim, std::vector<double>(codim, 0.0));
}

}  // namespace

LieAlgebroid::LieAlgebroid(std::string name, AlgebroidKind kind, Chart base, std::size_t rank,
                           SmoothMap anchor, SmoothMap structure, std::vector<Matrix> generators)
    : name_(std::move(name)),
      kind_(kind),
      base_(std::move(base)),
      rank_(rank),
      anchor_(std::move(anchor)),
      structure_(std::move(structure)),
      generators_(std::move(generators)) {
  const std::size_t n = base_.dim();
  if (rank_ == 0) throw std::invalid_argument("algebroid rank must be positive");
  if (anchor_.dim() != n || anchor_.codim() != n * rank_)
    throw std::invalid_argument("anchor must map the base to n*r components");
  if (structure_.dim() != n || structure_.codim() != cube_size(rank_))
    throw std::invalid_argument("structure functions must map the base to r^3 components");
  if (!generators_.empty() && generators_.size() != rank_)
    throw std::invalid_argument("generator count must equal the rank");
  measured_ = measure_axioms(*this);
}

AForm make_form(const LieAlgebroid& A, int degree, SmoothMap coeffs) {
  const std::size_t r = A.rank();
  const std::size_t want = degree == 0 ? 1 : degree == 1 ? r : degree == 2 ? r * r : 0;
  if (want == 0) throw std::invalid_argument("form degree must be 0, 1 or 2");
  if (coeffs.dim() != A.dim() || coeffs.codim() != want)
    throw std::invalid_argument("form coefficients have the wrong shape");
  return AForm{degree, std::move(coeffs)};
}

std::vector<double> so3_structure_constants() {
  std::vector<double> c(27);
  for (std::size_t cc = 0; cc < 3; ++cc)
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b) c[(cc * 3 + a) * 3 + b] = levi_civita(a, b, cc);
  return c;
}

std::vector<Matrix> so3_generators() {
  std::vector<Matrix> gens(3, Matrix(3, 3));
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t k = 0; k < 3; ++k) gens[a](i, k) = -levi_civita(a, i, k);
  return gens;
}

LieAlgebroid from_lie_algebra(std::vector<double> structure_constants, std::optional<Chart> base,
                              std::vector<Matrix> generators, std::string name) {
  const std::size_t r = rank_from_structure(structure_constants);
  Chart chart = base ? *base : Chart({"x0"}, {Interval{-1.0, 1.0}});
  const std::size_t n = chart.dim();
  return LieAlgebroid(std::move(name), AlgebroidKind::LieAlgebra, chart, r, zero_map(n, n * r),
                      constant_map(n, std::move(structure_constants)), std::move(generators));
}

LieAlgebroid so3_algebra(std::optional<Chart> base) {
  return from_lie_algebra(so3_structure_constants(), std::move(base), so3_generators(), "so3");
}

LieAlgebroid tangent_algebroid(const Chart& chart) {
  const std::size_t n = chart.dim();
  Matrix id(n, n);
  for (std::size_t i = 0; i < n; ++i) id(i, i) = 1.0;
  return LieAlgebroid("tangent", AlgebroidKind::Tangent, chart, n, constant_map(n, id.data),
                      zero_map(n, cube_size(n)));
}

LieAlgebroid action_algebroid(const Chart& chart, std::vector<double> structure_constants,
                              SmoothMap vector_fields, std::vector<Matrix> generators,
                              std::string name) {
  const std::size_t r = rank_from_structure(structure_constants);
  const std::size_t n = chart.dim();
  if (vector_fields.dim() != n || vector_fields.codim() != n * r)
    throw std::invalid_argument("action vector fields must map the chart to n*r components");
  return LieAlgebroid(std::move(name), AlgebroidKind::Action, chart, r, std::move(vector_fields),
                      constant_map(n, std::move(structure_constants)), std::move(generators));
}

LieAlgebroid linear_action_algebroid(const Chart& chart, std::vector<Matrix> generators,
                                     std::vector<double> structure_constants, std::string name) {
  const std::size_t n = chart.dim();
  const std::size_t r = generators.size();
  for (const auto& e : generators)
    if (e.rows != n || e.cols != n) throw std::invalid_argument("generator shape must be n x n");
  // Column a of the anchor is -E_a x.
  Matrix lin(n * r, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t k = 0; k < n; ++k) lin(i * r + a, k) = -generators[a](i, k);
  return action_algebroid(chart, std::move(structure_constants), linear_map(lin),
                          std::move(generators), std::move(name));
}

LieAlgebroid so3_action_r3(double half_width) {
  return linear_action_algebroid(Chart::cube(3, "x", -half_width, half_width), so3_generators(),
                                 so3_structure_constants(), "so3_action");
}

LieAlgebroid cotangent_algebroid(const Chart& chart, SmoothMap bivector, std::string name) {
  const std::size_t n = chart.dim();
  if (bivector.dim() != n || bivector.codim() != n * n)
    throw std::invalid_argument("bivector must map the chart to n*n components");
  SmoothMap anchor(n, n * n, [bivector, n](auto x, auto y) {
    using T = typename decltype(y)::value_type;
    std::vector<T> pi(n * n);
    bivector.eval<T>(x, std::span<T>(pi));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) y[i * n + j] = pi[j * n + i];
  });
  SmoothMap structure(n, n * n * n, [bivector, n](auto x, auto y) {
    using T = typename decltype(y)::value_type;
    if constexpr (!liftable_v<T>) {
      throw_depth();
    } else {
      std::vector<T> pi(n * n), dpi(n * n * n);
      value_and_jacobian<T>(bivector, x, pi, dpi);
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) y[(k * n + i) * n + j] = dpi[(i * n + j) * n + k];
    }
  });
  return LieAlgebroid(std::move(name), AlgebroidKind::Cotangent, chart, n, std::move(anchor),
                      std::move(structure));
}

LieAlgebroid mutate_structure(const LieAlgebroid& A, std::size_t c, std::size_t a, std::size_t b,
                              double scale, double shift) {
  const std::size_t r = A.rank();
  if (c >= r || a >= r || b >= r || a == b)
    throw std::invalid_argument("mutation index out of range");
  const SmoothMap inner = A.structure();
  const std::size_t ab = (c * r + a) * r + b;
  const std::size_t ba = (c * r + b) * r + a;
  SmoothMap mutated(A.dim(), cube_size(r), [=](auto x, auto y) {
    inner.eval(x, y);
    y[ab] = scale * y[ab] + shift;
    y[ba] = scale * y[ba] - shift;
  });
  return LieAlgebroid(A.name() + "_mutated", AlgebroidKind::General, A.base(), r, A.anchor(),
                      std::move(mutated), A.generators());
}

ASection bracket(const LieAlgebroid& A, const ASection& s1, const ASection& s2) {
  const std::size_t n = A.dim();
  const std::size_t r = A.rank();
  if (s1.dim() != n || s2.dim() != n || s1.codim() != r || s2.codim() != r)
    throw std::invalid_argument("bracket: sections have the wrong shape");
  const SmoothMap rho = A.anchor();
  const SmoothMap C = A.structure();
  return SmoothMap(n, r, [=](auto x, auto y) {
    using T = typename decltype(y)::value_type;
    if constexpr (!liftable_v<T>) {
      throw_depth();
    } else {
      std::vector<T> e1(r), e2(r), j1(r * n), j2(r * n), rh(n * r), c(r * r * r);
      value_and_jacobian<T>(s1, x, e1, j1);
      value_and_jacobian<T>(s2, x, e2, j2);
      rho.eval<T>(x, std::span<T>(rh));
      C.eval<T>(x, std::span<T>(c));
      // rho(e1) and rho(e2) as vector fields.
      std::vector<T> v1(n, T(0.0)), v2(n, T(0.0));
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t a = 0; a < r; ++a) {
          v1[j] += rh[j * r + a] * e1[a];
          v2[j] += rh[j * r + a] * e2[a];
        }
      for (std::size_t cc = 0; cc < r; ++cc) {
        T acc(0.0);
        for (std::size_t a = 0; a < r; ++a)
          for (std::size_t b = 0; b < r; ++b) acc += c[(cc * r + a) * r + b] * e1[a] * e2[b];
        for (std::size_t j = 0; j < n; ++j)
          acc += v1[j] * j2[cc * n + j] - v2[j] * j1[cc * n + j];
        y[cc] = acc;
      }
    }
  });
}

SmoothMap anchor_of(const LieAlgebroid& A, const ASection& s) {
  const std::size_t n = A.dim();
  const std::size_t r = A.rank();
  if (s.dim() != n || s.codim() != r) throw std::invalid_argument("anchor_of: wrong section shape");
  const SmoothMap rho = A.anchor();
  return SmoothMap(n, n, [=](auto x, auto y) {
    using T = typename decltype(y)::value_type;
    std::vector<T> e(r), rh(n * r);
    s.eval<T>(x, std::span<T>(e));
    rho.eval<T>(x, std::span<T>(rh));
    for (std::size_t i = 0; i < n; ++i) {
      T acc(0.0);
      for (std::size_t a = 0; a < r; ++a) acc += rh[i * r + a] * e[a];
      y[i] = acc;
    }
  });
}

AForm d_A(const LieAlgebroid& A, const AForm& w) {
  const std::size_t n = A.dim();
  const std::size_t r = A.rank();
  const SmoothMap rho = A.anchor();
  const SmoothMap C = A.structure();
  const SmoothMap g = w.coeffs;
  if (w.degree == 0) {
    if (g.dim() != n || g.codim() != 1) throw std::invalid_argument("d_A: bad 0-form");
    SmoothMap out(n, r, [=](auto x, auto y) {
      using T = typename decltype(y)::value_type;
      if constexpr (!liftable_v<T>) {
        throw_depth();
      } else {
        std::vector<T> val(1), dg(n), rh(n * r);
        value_and_jacobian<T>(g, x, val, dg);
        rho.eval<T>(x, std::span<T>(rh));
        for (std::size_t a = 0; a < r; ++a) {
          T acc(0.0);
          for (std::size_t j = 0; j < n; ++j) acc += rh[j * r + a] * dg[j];
          y[a] = acc;
        }
      }
    });
    return AForm{1, std::move(out)};
  }
  if (w.degree == 1) {
    if (g.dim() != n || g.codim() != r) throw std::invalid_argument("d_A: bad 1-form");
    SmoothMap out(n, r * r, [=](auto x, auto y) {
      using T = typename decltype(y)::value_type;
      if constexpr (!liftable_v<T>) {
        throw_depth();
      } else {
        std::vector<T> lam(r), dlam(r * n), rh(n * r), c(r * r * r);
        value_and_jacobian<T>(g, x, lam, dlam);
        rho.eval<T>(x, std::span<T>(rh));
        C.eval<T>(x, std::span<T>(c));
        for (std::size_t a = 0; a < r; ++a)
          for (std::size_t b = 0; b < r; ++b) {
            T acc(0.0);
            for (std::size_t j = 0; j < n; ++j)
              acc += rh[j * r + a] * dlam[b * n + j] - rh[j * r + b] * dlam[a * n + j];
            for (std::size_t cc = 0; cc < r; ++cc) acc -= c[(cc * r + a) * r + b] * lam[cc];
            y[a * r + b] = acc;
          }
      }
    });
    return AForm{2, std::move(out)};
  }
  throw std::invalid_argument("d_A: degree-2 input is not supported (no 3-forms)");
}

std::vector<double> d_A_on_triples(const LieAlgebroid& A, const AForm& w,
                                   std::span<const double> x) {
  if (w.degree != 2) throw std::invalid_argument("d_A_on_triples expects a 2-form");
  const std::size_t n = A.dim();
  const std::size_t r = A.rank();
  std::vector<double> om(r * r), dom(r * r * n), rh(n * r), c(r * r * r);
  value_and_jacobian<double>(w.coeffs, x, om, dom);
  A.anchor().eval<double>(x, rh);
  A.structure().eval<double>(x, c);
  auto term = [&](std::size_t a, std::size_t b, std::size_t cc) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += rh[j * r + a] * dom[(b * r + cc) * n + j];
    for (std::size_t d = 0; d < r; ++d) acc -= c[(d * r + a) * r + b] * om[d * r + cc];
    return acc;
  };
  std::vector<double> out(r * r * r);
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b)
      for (std::size_t cc = 0; cc < r; ++cc)
        out[(a * r + b) * r + cc] = term(a, b, cc) + term(b, cc, a) + term(cc, a, b);
  return out;
}

AForm contract(const LieAlgebroid& A, const ASection& s, const AForm& w) {
  const std::size_t n = A.dim();
  const std::size_t r = A.rank();
  const SmoothMap g = w.coeffs;
  if (w.degree == 0) throw std::invalid_argument("contract: cannot contract a 0-form");
  const std::size_t out_codim = w.degree == 1 ? 1 : r;
  SmoothMap out(n, out_codim, [=, deg = w.degree](auto x, auto y) {
    using T = typename decltype(y)::value_type;
    std::vector<T> e(r), c(g.codim());
    s.eval<T>(x, std::span<T>(e));
    g.eval<T>(x, std::span<T>(c));
    if (deg == 1) {
      T acc(0.0);
      for (std::size_t a = 0; a < r; ++a) acc += e[a] * c[a];
      y[0] = acc;
    } else {
      for (std::size_t b = 0; b < r; ++b) {
        T acc(0.0);
        for (std::size_t a = 0; a < r; ++a) acc += e[a] * c[a * r + b];
        y[b] = acc;
      }
    }
  });
  return AForm{w.degree - 1, std::move(out)};
}

AForm lie_derivative(const LieAlgebroid& A, const ASection& s, const AForm& w) {
  const std::size_t n = A.dim();
  const std::size_t r = A.rank();
  const SmoothMap rho = A.anchor();
  const SmoothMap C = A.structure();
  const SmoothMap g = w.coeffs;
  if (s.dim() != n || s.codim() != r) throw std::invalid_argument("lie_derivative: bad section");
  if (w.degree == 0) {
    SmoothMap out(n, 1, [=](auto x, auto y) {
      using T = typename decltype(y)::value_type;
      if constexpr (!liftable_v<T>) {
        throw_depth();
      } else {
        std::vector<T> val(1), dg(n), e(r), rh(n * r);
        value_and_jacobian<T>(g, x, val, dg);
        s.eval<T>(x, std::span<T>(e));
        rho.eval<T>(x, std::span<T>(rh));
        T acc(0.0);
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t a = 0; a < r; ++a) acc += rh[j * r + a] * e[a] * dg[j];
        y[0] = acc;
      }
    });
    return AForm{0, std::move(out)};
  }
  if (w.degree != 1) throw std::invalid_argument("lie_derivative: degree must be 0 or 1");
  // (L_e lam)_b = e^a (d_A lam)_ab + rho^j_b d_j (e^a lam_a)
  SmoothMap out(n, r, [=](auto x, auto y) {
    using T = typename decltype(y)::value_type;
    if constexpr (!liftable_v<T>) {
      throw_depth();
    } else {
      std::vector<T> lam(r), dlam(r * n), e(r), de(r * n), rh(n * r), c(r * r * r);
      value_and_jacobian<T>(g, x, lam, dlam);
      value_and_jacobian<T>(s, x, e, de);
      rho.eval<T>(x, std::span<T>(rh));
      C.eval<T>(x, std::span<T>(c));
      std::vector<T> dpair(n, T(0.0));  // d_j (e^a lam_a)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t a = 0; a < r; ++a)
          dpair[j] += de[a * n + j] * lam[a] + e[a] * dlam[a * n + j];
      for (std::size_t b = 0; b < r; ++b) {
        T acc(0.0);
        for (std::size_t a = 0; a < r; ++a) {
          T dab(0.0);
          for (std::size_t j = 0; j < n; ++j)
            dab += rh[j * r + a] * dlam[b * n + j] - rh[j * r + b] * dlam[a * n + j];
          for (std::size_t cc = 0; cc < r; ++cc) dab -= c[(cc * r + a) * r + b] * lam[cc];
          acc += e[a] * dab;
        }
        for (std::size_t j = 0; j < n; ++j) acc += rh[j * r + b] * dpair[j];
        y[b] = acc;
      }
    }
  });
  return AForm{1, std::move(out)};
}

std::vector<double> anchor_compat_residual(const LieAlgebroid& A, std::span<const double> x) {
  const std::size_t n = A.dim();
  const std::size_t r = A.rank();
  std::vector<double> rh(n * r), drh(n * r * n), c(r * r * r);
  value_and_jacobian<double>(A.anchor(), x, rh, drh);
  A.structure().eval<double>(x, c);
  std::vector<double> out(n * r * r);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = 0; b < r; ++b) {
        double acc = 0.0;
        for (std::size_t cc = 0; cc < r; ++cc) acc += rh[i * r + cc] * c[(cc * r + a) * r + b];
        for (std::size_t j = 0; j < n; ++j)
          acc += -rh[j * r + a] * drh[(i * r + b) * n + j] + rh[j * r + b] * drh[(i * r + a) * n + j];
        out[(i * r + a) * r + b] = acc;
      }
  return out;
}

std::vector<double> jacobi_residual(const LieAlgebroid& A, std::span<const double> x) {
  const std::size_t n = A.dim();
  const std::size_t r = A.rank();
  std::vector<double> rh(n * r), c(r * r * r), dc(r * r * r * n);
  A.anchor().eval<double>(x, rh);
  value_and_jacobian<double>(A.structure(), x, c, dc);
  auto term = [&](std::size_t d, std::size_t a, std::size_t b, std::size_t cc) {
    double acc = 0.0;
    for (std::size_t e = 0; e < r; ++e) acc += c[(d * r + a) * r + e] * c[(e * r + b) * r + cc];
    for (std::size_t j = 0; j < n; ++j) acc += rh[j * r + a] * dc[((d * r + b) * r + cc) * n + j];
    return acc;
  };
  std::vector<double> out(r * r * r * r);
  for (std::size_t d = 0; d < r; ++d)
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = 0; b < r; ++b)
        for (std::size_t cc = 0; cc < r; ++cc)
          out[((d * r + a) * r + b) * r + cc] = term(d, a, b, cc) + term(d, b, cc, a) + term(d, cc, a, b);
  return out;
}

SmoothMap jacobiator_map(const SmoothMap& bivector) {
  std::size_t n = 0;
  while (n * n < bivector.codim()) ++n;
  if (n * n != bivector.codim() || bivector.dim() != n)
    throw std::invalid_argument("bivector must map R^n to n*n components");
  return SmoothMap(n, n * n * n, [bivector, n](auto x, auto y) {
    using T = typename decltype(y)::value_type;
    if constexpr (!liftable_v<T>) {
      throw_depth();
    } else {
      std::vector<T> pi(n * n), dpi(n * n * n);
      value_and_jacobian<T>(bivector, x, pi, dpi);
      auto P = [&](std::size_t i, std::size_t j) -> const T& { return pi[i * n + j]; };
      auto dP = [&](std::size_t l, std::size_t i, std::size_t j) -> const T& {
        return dpi[(i * n + j) * n + l];
      };
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t k = 0; k < n; ++k) {
            T acc(0.0);
            for (std::size_t l = 0; l < n; ++l)
              acc += P(l, k) * dP(l, i, j) + P(l, i) * dP(l, j, k) + P(l, j) * dP(l, k, i);
            y[(i * n + j) * n + k] = acc;
          }
    }
  });
}

std::vector<double> poisson_jacobiator(const SmoothMap& bivector, std::span<const double> x) {
  return jacobiator_map(bivector)(x);
}

AxiomReport measure_axioms(const LieAlgebroid& A, std::size_t points, std::uint64_t seed,
                           double tol) {
  const auto pts = sample_points(A.base(), points, seed);
  const std::size_t r = A.rank();
  AxiomReport rep;
  rep.points = points;
  rep.tol = tol;
  rep.antisymmetry = parallel::max_over(pts.size(), [&](std::size_t k) {
                       const Point c = A.structure()(pts[k]);
                       double m = 0.0;
                       for (std::size_t cc = 0; cc < r; ++cc)
                         for (std::size_t a = 0; a < r; ++a)
                           for (std::size_t b = 0; b < r; ++b)
                             m = std::max(m, std::abs(c[(cc * r + a) * r + b] + c[(cc * r + b) * r + a]));
                       return m;
                     }).value;
  const ArgMax anchor = parallel::max_over(
      pts.size(), [&](std::size_t k) { return max_abs(anchor_compat_residual(A, pts[k])); });
  const ArgMax jac = parallel::max_over(
      pts.size(), [&](std::size_t k) { return max_abs(jacobi_residual(A, pts[k])); });
  rep.anchor_compat = anchor.value;
  rep.jacobi = jac.value;
  if (anchor.index >= 0) rep.worst_anchor_compat = pts[static_cast<std::size_t>(anchor.index)];
  if (jac.index >= 0) rep.worst_jacobi = pts[static_cast<std::size_t>(jac.index)];
  return rep;
}

}  // namespace nlg

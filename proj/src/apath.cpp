#include "nlg/apath.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nlg/sweep.hpp"

namespace nlg {
namespace {

using Vec = std::vector<double>;

void axpy(Vec& y, double w, const Vec& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += w * x[i];
}

Vec add(const Vec& x, double w, const Vec& d) {
  Vec y = x;
  axpy(y, w, d);
  return y;
}

// rho(x) a
Vec anchor_apply(const LieAlgebroid& A, const Vec& x, const Vec& a) {
  const std::size_t n = A.dim();
  const std::size_t r = A.rank();
  const Point rho = A.anchor()(x);
  Vec out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t b = 0; b < r; ++b) out[i] += rho[i * r + b] * a[b];
  return out;
}

void check_box(const LieAlgebroid& A, const Vec& x, double t) {
  if (!A.base().contains(x)) {
    std::ostringstream os;
    os << "A-path left the base box at t = " << t;
    throw APathError(os.str(), t);
  }
}

// Cubic interpolation of gridded values at t_k + h/2.
Vec midpoint(const std::vector<Point>& a, std::size_t k) {
  const std::size_t N = a.size() - 1;
  std::array<double, 4> w;
  std::array<std::size_t, 4> idx;
  if (k == 0) {
    w = {5.0, 15.0, -5.0, 1.0};
    idx = {0, 1, 2, 3};
  } else if (k + 1 == N) {
    w = {1.0, -5.0, 15.0, 5.0};
    idx = {N - 3, N - 2, N - 1, N};
  } else {
    w = {-1.0, 9.0, 9.0, -1.0};
    idx = {k - 1, k, k + 1, k + 2};
  }
  Vec out(a[k].size(), 0.0);
  for (int j = 0; j < 4; ++j) axpy(out, w[j] / 16.0, a[idx[j]]);
  return out;
}

Matrix matrix_of(const LieAlgebroid& A, const Vec& a) {
  const auto& gens = A.generators();
  Matrix X(gens.front().rows, gens.front().cols);
  for (std::size_t b = 0; b < gens.size(); ++b)
    for (std::size_t p = 0; p < X.data.size(); ++p) X.data[p] += a[b] * gens[b].data[p];
  return X;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t l = 0; l < a.cols; ++l)
      for (std::size_t j = 0; j < b.cols; ++j) c(i, j) += a(i, l) * b(l, j);
  return c;
}

void require_holonomy_model(const LieAlgebroid& A) {
  if (A.kind() != AlgebroidKind::Action || A.generators().size() != A.rank() ||
      A.generators().front().rows != A.dim())
    throw std::invalid_argument("holonomy needs an action algebroid with matrix generators");
}

// (C(x)(a, e))^c = C^c_ab a^a e^b
Vec structure_apply(const LieAlgebroid& A, const Vec& x, const Vec& a, const Vec& e) {
  const std::size_t r = A.rank();
  const Point C = A.structure()(x);
  Vec out(r, 0.0);
  for (std::size_t c = 0; c < r; ++c)
    for (std::size_t p = 0; p < r; ++p)
      for (std::size_t q = 0; q < r; ++q) out[c] += C[(c * r + p) * r + q] * a[p] * e[q];
  return out;
}

}  // namespace

APath make_apath(LieAlgebroid A, std::vector<Point> x, std::vector<Point> a) {
  if (x.size() != a.size()) throw std::invalid_argument("A-path: x and a differ in length");
  if (x.size() < kMinAPathIntervals + 1) throw std::invalid_argument("A-path: need at least 8 intervals");
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k].size() != A.dim() || a[k].size() != A.rank())
      throw std::invalid_argument("A-path: sample has the wrong dimension");
    check_box(A, x[k], static_cast<double>(k) / static_cast<double>(x.size() - 1));
  }
  return APath{std::move(A), std::move(x), std::move(a)};
}

std::vector<Point> grid_derivative(const std::vector<Point>& f) {
  if (f.size() < 5) throw std::invalid_argument("grid_derivative needs at least 5 samples");
  const std::size_t N = f.size() - 1;
  const double inv = static_cast<double>(N) / 12.0;
  std::vector<Point> d(f.size(), Point(f[0].size(), 0.0));
  auto stencil = [&](std::size_t k, std::initializer_list<std::pair<std::ptrdiff_t, double>> terms,
                     double sign) {
    for (const auto& [off, w] : terms) axpy(d[k], sign * w * inv, f[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(k) + off)]);
  };
  for (std::size_t k = 2; k + 2 <= N; ++k) stencil(k, {{-2, 1.0}, {-1, -8.0}, {1, 8.0}, {2, -1.0}}, 1.0);
  stencil(0, {{0, -25.0}, {1, 48.0}, {2, -36.0}, {3, 16.0}, {4, -3.0}}, 1.0);
  stencil(1, {{-1, -3.0}, {0, -10.0}, {1, 18.0}, {2, -6.0}, {3, 1.0}}, 1.0);
  stencil(N - 1, {{1, -3.0}, {0, -10.0}, {-1, 18.0}, {-2, -6.0}, {-3, 1.0}}, -1.0);
  stencil(N, {{0, -25.0}, {-1, 48.0}, {-2, -36.0}, {-3, 16.0}, {-4, -3.0}}, -1.0);
  return d;
}

double apath_residual(const APath& p) {
  const auto xdot = grid_derivative(p.x);
  double worst = 0.0;
  for (std::size_t k = 0; k < p.x.size(); ++k) {
    const Vec v = anchor_apply(p.A, p.x[k], p.a[k]);
    for (std::size_t i = 0; i < v.size(); ++i) worst = std::max(worst, std::abs(xdot[k][i] - v[i]));
  }
  return worst;
}

APath integrate_base(const LieAlgebroid& A, const SmoothMap& a, const Point& x0, std::size_t N) {
  if (N < kMinAPathIntervals) throw std::invalid_argument("integrate_base: need N >= 8");
  if (a.dim() != 1 || a.codim() != A.rank())
    throw std::invalid_argument("integrate_base: a must map [0,1] to R^r");
  check_box(A, x0, 0.0);
  const double h = 1.0 / static_cast<double>(N);
  auto a_at = [&](double t) { return a(Point{t}); };
  std::vector<Point> xs{x0}, as{a_at(0.0)};
  Vec x = x0;
  for (std::size_t k = 0; k < N; ++k) {
    const double t = static_cast<double>(k) * h;
    const Vec am = a_at(t + 0.5 * h);
    const Vec a1 = a_at(t + h);
    const Vec k1 = anchor_apply(A, x, as.back());
    const Vec x2 = add(x, 0.5 * h, k1);
    check_box(A, x2, t);
    const Vec k2 = anchor_apply(A, x2, am);
    const Vec x3 = add(x, 0.5 * h, k2);
    check_box(A, x3, t);
    const Vec k3 = anchor_apply(A, x3, am);
    const Vec x4 = add(x, h, k3);
    check_box(A, x4, t);
    const Vec k4 = anchor_apply(A, x4, a1);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    check_box(A, x, t + h);
    xs.push_back(x);
    as.push_back(a1);
  }
  return APath{A, std::move(xs), std::move(as)};
}

std::vector<Point> integrate_gridded(const LieAlgebroid& A, const std::vector<Point>& a,
                                     const Point& x0) {
  const std::size_t N = a.size() - 1;
  if (N < kMinAPathIntervals) throw std::invalid_argument("integrate_gridded: need N >= 8");
  const double h = 1.0 / static_cast<double>(N);
  std::vector<Point> xs{x0};
  Vec x = x0;
  for (std::size_t k = 0; k < N; ++k) {
    const double t = static_cast<double>(k) * h;
    const Vec am = midpoint(a, k);
    const Vec k1 = anchor_apply(A, x, a[k]);
    const Vec x2 = add(x, 0.5 * h, k1);
    check_box(A, x2, t);
    const Vec k2 = anchor_apply(A, x2, am);
    const Vec x3 = add(x, 0.5 * h, k2);
    check_box(A, x3, t);
    const Vec k3 = anchor_apply(A, x3, am);
    const Vec x4 = add(x, h, k3);
    check_box(A, x4, t);
    const Vec k4 = anchor_apply(A, x4, a[k + 1]);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    check_box(A, x, t + h);
    xs.push_back(x);
  }
  return xs;
}

Holonomy holonomy(const APath& p) {
  require_holonomy_model(p.A);
  const std::size_t N = p.intervals();
  const std::size_t n = p.A.dim();
  const double h = 1.0 / static_cast<double>(N);
  Matrix R(n, n);
  for (std::size_t i = 0; i < n; ++i) R(i, i) = 1.0;
  auto step = [](const Matrix& base, double w, const Matrix& k) {
    Matrix out = base;
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += w * k.data[i];
    return out;
  };
  for (std::size_t k = 0; k < N; ++k) {
    const Matrix X0 = matrix_of(p.A, p.a[k]);
    const Matrix Xm = matrix_of(p.A, midpoint(p.a, k));
    const Matrix X1 = matrix_of(p.A, p.a[k + 1]);
    const Matrix k1 = matmul(R, X0);
    const Matrix k2 = matmul(step(R, 0.5 * h, k1), Xm);
    const Matrix k3 = matmul(step(R, 0.5 * h, k2), Xm);
    const Matrix k4 = matmul(step(R, h, k3), X1);
    for (std::size_t i = 0; i < R.data.size(); ++i)
      R.data[i] += h / 6.0 * (k1.data[i] + 2.0 * k2.data[i] + 2.0 * k3.data[i] + k4.data[i]);
  }
  return Holonomy{std::move(R), p.x.back()};
}

double holonomy_consistency(const APath& p, const Holonomy& h) {
  const std::size_t n = p.A.dim();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += h.R(i, j) * h.x_end[j];
    worst = std::max(worst, std::abs(s - p.x.front()[i]));
  }
  return worst;
}

double matrix_distance(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) worst = std::max(worst, std::abs(a.data[i] - b.data[i]));
  return worst;
}

Homotopy random_homotopy(std::size_t rank, std::uint64_t seed, double amplitude, std::size_t modes) {
  SeededRng rng(seed);
  const double bound = amplitude / static_cast<double>(modes);
  std::vector<double> alpha(rank * modes), beta(rank * modes), omega(rank * modes), phi(rank * modes);
  for (std::size_t i = 0; i < rank * modes; ++i) {
    alpha[i] = rng.uniform(-bound, bound);
    beta[i] = rng.uniform(-bound, bound);
    omega[i] = rng.uniform(0.5, 3.0);
    phi[i] = rng.uniform(0.0, 2.0 * std::numbers::pi);
  }
  return Homotopy{SmoothMap(2, rank, [=](auto ts, auto y) {
    using T = typename decltype(y)::value_type;
    using std::cos;
    using std::sin;
    for (std::size_t a = 0; a < rank; ++a) {
      T acc(0.0);
      for (std::size_t k = 0; k < modes; ++k) {
        const std::size_t i = a * modes + k;
        acc += sin(static_cast<double>(k + 1) * std::numbers::pi * ts[0]) *
               (alpha[i] + beta[i] * cos(omega[i] * ts[1] + phi[i]));
      }
      y[a] = acc;
    }
  })};
}

Homotopy zero_homotopy(std::size_t rank) { return Homotopy{constant_map(2, std::vector<double>(rank, 0.0))}; }

double homotopy_boundary_defect(const Homotopy& h, std::size_t n) {
  double worst = 0.0;
  for (std::size_t j = 0; j <= n; ++j) {
    const double s = static_cast<double>(j) / static_cast<double>(n);
    for (double t : {0.0, 1.0}) worst = std::max(worst, max_abs(h.eps(Point{t, s})));
  }
  return worst;
}

HomotopyFlowResult homotopy_flow(const APath& p, const Homotopy& h, std::size_t steps) {
  if (steps == 0) throw std::invalid_argument("homotopy_flow needs at least one step");
  if (h.eps.dim() != 2 || h.eps.codim() != p.A.rank())
    throw std::invalid_argument("homotopy_flow: eps must map [0,1]^2 to R^r");
  const LieAlgebroid& A = p.A;
  const std::size_t K = p.x.size();
  const std::size_t r = A.rank();
  const double ds = 1.0 / static_cast<double>(steps);

  HomotopyFlowResult out{p, 0.0, apath_residual(p), 0.0};
  std::vector<Point>& x = out.path.x;
  std::vector<Point>& a = out.path.a;

  // eps and d_t eps at (t_k, s).
  auto sample = [&](double s, std::vector<Vec>& e, std::vector<Vec>& edot) {
    e.assign(K, Vec(r));
    edot.assign(K, Vec(r));
    std::vector<D1> in(2), val(r);
    for (std::size_t k = 0; k < K; ++k) {
      in[0] = D1(p.time(k), 1.0);
      in[1] = D1(s, 0.0);
      h.eps.eval<D1>(in, val);
      for (std::size_t c = 0; c < r; ++c) {
        e[k][c] = val[c].v;
        edot[k][c] = val[c].d;
      }
    }
  };
  auto velocity = [&](const std::vector<Point>& xs, const std::vector<Point>& as,
                      const std::vector<Vec>& e, const std::vector<Vec>& edot,
                      std::vector<Vec>& dx, std::vector<Vec>& da) {
    dx.resize(K);
    da.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
      dx[k] = anchor_apply(A, xs[k], e[k]);
      da[k] = add(edot[k], 1.0, structure_apply(A, xs[k], as[k], e[k]));
    }
  };
  auto shifted = [&](const std::vector<Point>& base, double w, const std::vector<Vec>& d) {
    std::vector<Point> out_pts(K);
    for (std::size_t k = 0; k < K; ++k) out_pts[k] = add(base[k], w, d[k]);
    return out_pts;
  };

  std::vector<Vec> e0, d0, em, dm, e1, d1;
  std::vector<Vec> kx1, ka1, kx2, ka2, kx3, ka3, kx4, ka4;
  for (std::size_t step = 0; step < steps; ++step) {
    const double s = static_cast<double>(step) * ds;
    sample(s, e0, d0);
    sample(s + 0.5 * ds, em, dm);
    sample(s + ds, e1, d1);
    velocity(x, a, e0, d0, kx1, ka1);
    const auto x2 = shifted(x, 0.5 * ds, kx1), a2 = shifted(a, 0.5 * ds, ka1);
    velocity(x2, a2, em, dm, kx2, ka2);
    const auto x3 = shifted(x, 0.5 * ds, kx2), a3 = shifted(a, 0.5 * ds, ka2);
    velocity(x3, a3, em, dm, kx3, ka3);
    const auto x4 = shifted(x, ds, kx3), a4 = shifted(a, ds, ka3);
    velocity(x4, a4, e1, d1, kx4, ka4);
    for (std::size_t k = 0; k < K; ++k) {
      for (std::size_t i = 0; i < x[k].size(); ++i)
        x[k][i] += ds / 6.0 * (kx1[k][i] + 2.0 * kx2[k][i] + 2.0 * kx3[k][i] + kx4[k][i]);
      for (std::size_t c = 0; c < r; ++c)
        a[k][c] += ds / 6.0 * (ka1[k][c] + 2.0 * ka2[k][c] + 2.0 * ka3[k][c] + ka4[k][c]);
    }
    const std::vector<Point> projected = integrate_gridded(A, a, x.front());
    for (std::size_t k = 0; k < K; ++k)
      for (std::size_t i = 0; i < x[k].size(); ++i)
        out.unprojected_drift = std::max(out.unprojected_drift, std::abs(x[k][i] - projected[k][i]));
    x = projected;
  }
  out.flatness_after = apath_residual(out.path);
  return out;
}

WeinsteinReport weinstein_experiment(const LieAlgebroid& A, const WeinsteinOptions& opts) {
  require_holonomy_model(A);
  const std::size_t r = A.rank();
  const std::size_t n = A.dim();
  SeededRng rng(opts.seed);

  WeinsteinReport rep;
  std::vector<Holonomy> hol;
  for (std::size_t i = 0; i < opts.paths; ++i) {
    TrigSpec spec;
    spec.amplitude = 2.0;
    spec.frequency = 3.0;
    const SmoothMap a = random_trig_map(1, r, rng.next(), spec);
    Point x0(n);
    for (std::size_t j = 0; j < n; ++j) {
      const auto& box = A.base().box()[j];
      const double mid = 0.5 * (box.lo + box.hi), half = 0.5 * (box.hi - box.lo);
      x0[j] = mid + rng.uniform(-0.4, 0.4) * half;
    }
    rep.sample_paths.push_back(integrate_base(A, a, x0, opts.intervals));
    hol.push_back(holonomy(rep.sample_paths.back()));
    rep.max_consistency = std::max(rep.max_consistency, holonomy_consistency(rep.sample_paths.back(), hol.back()));
    const Matrix& R = hol.back().R;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q) {
        double s = 0.0;
        for (std::size_t l = 0; l < n; ++l) s += R(l, p) * R(l, q);
        rep.max_orthogonality = std::max(rep.max_orthogonality, std::abs(s - (p == q ? 1.0 : 0.0)));
      }
  }
  std::vector<std::uint64_t> hseeds(opts.homotopies);
  for (auto& s : hseeds) s = rng.next();
  auto make_homotopy = [&](std::size_t j) {
    return opts.zero_homotopies ? zero_homotopy(r) : random_homotopy(r, hseeds[j], opts.amplitude);
  };

  const std::size_t total = opts.paths * opts.homotopies;
  rep.trials = parallel::map_points<WeinsteinTrial>(total, [&](std::size_t idx) {
    const std::size_t i = idx / opts.homotopies;
    const std::size_t j = idx % opts.homotopies;
    const APath& p = rep.sample_paths[i];
    const HomotopyFlowResult flowed = homotopy_flow(p, make_homotopy(j), opts.steps);
    const Holonomy hf = holonomy(flowed.path);
    WeinsteinTrial t;
    t.path = i;
    t.homotopy = j;
    t.holonomy_drift = matrix_distance(hf.R, hol[i].R);
    double ed = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      ed = std::max(ed, std::abs(flowed.path.x.front()[c] - p.x.front()[c]));
      ed = std::max(ed, std::abs(flowed.path.x.back()[c] - p.x.back()[c]));
    }
    t.endpoint_drift = ed;
    t.unprojected_drift = flowed.unprojected_drift;
    t.flatness_after = flowed.flatness_after;
    return t;
  });
  for (const auto& t : rep.trials) {
    rep.max_holonomy_drift = std::max(rep.max_holonomy_drift, t.holonomy_drift);
    rep.max_endpoint_drift = std::max(rep.max_endpoint_drift, t.endpoint_drift);
    rep.max_unprojected_drift = std::max(rep.max_unprojected_drift, t.unprojected_drift);
    rep.max_flatness = std::max(rep.max_flatness, t.flatness_after);
  }

  // Two classes: constant rotation by pi/2 and by pi about the first generator.
  Point x0(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& box = A.base().box()[j];
    x0[j] = 0.5 * (box.lo + box.hi) + 0.25 * (box.hi - box.lo) * (j == 1 ? 1.0 : 0.0);
  }
  std::vector<double> e1(r, 0.0), e2(r, 0.0);
  e1[0] = 0.5 * std::numbers::pi;
  e2[0] = std::numbers::pi;
  const APath q1 = integrate_base(A, constant_map(1, e1), x0, opts.intervals);
  const APath q2 = integrate_base(A, constant_map(1, e2), x0, opts.intervals);
  const std::size_t sep_trials = std::max<std::size_t>(1, opts.homotopies);
  std::vector<std::uint64_t> sep_seeds(2 * sep_trials);
  for (auto& s : sep_seeds) s = rng.next();
  const auto dists = parallel::map_points<double>(sep_trials, [&](std::size_t j) {
    const Homotopy h1 = opts.zero_homotopies ? zero_homotopy(r) : random_homotopy(r, sep_seeds[2 * j], opts.amplitude);
    const Homotopy h2 = opts.zero_homotopies ? zero_homotopy(r) : random_homotopy(r, sep_seeds[2 * j + 1], opts.amplitude);
    const Holonomy r1 = holonomy(homotopy_flow(q1, h1, opts.steps).path);
    const Holonomy r2 = holonomy(homotopy_flow(q2, h2, opts.steps).path);
    return matrix_distance(r1.R, r2.R);
  });
  rep.min_separation = *std::min_element(dists.begin(), dists.end());
  return rep;
}

std::vector<double> integration_orders(const LieAlgebroid& A, const SmoothMap& a, const Point& x0,
                                       const std::vector<std::size_t>& Ns) {
  const std::size_t finest = *std::max_element(Ns.begin(), Ns.end());
  const Point ref = integrate_base(A, a, x0, 16 * finest).x.back();
  std::vector<double> err;
  for (std::size_t N : Ns) {
    const Point x1 = integrate_base(A, a, x0, N).x.back();
    double e = 0.0;
    for (std::size_t i = 0; i < x1.size(); ++i) e = std::max(e, std::abs(x1[i] - ref[i]));
    err.push_back(e);
  }
  std::vector<double> orders;
  for (std::size_t i = 0; i + 1 < Ns.size(); ++i)
    orders.push_back(std::log(err[i] / err[i + 1]) /
                     std::log(static_cast<double>(Ns[i + 1]) / static_cast<double>(Ns[i])));
  return orders;
}

std::vector<double> residual_orders(const LieAlgebroid& A, const SmoothMap& a, const Point& x0,
                                    const std::vector<std::size_t>& Ns) {
  std::vector<double> res;
  for (std::size_t N : Ns) res.push_back(apath_residual(integrate_base(A, a, x0, N)));
  std::vector<double> orders;
  for (std::size_t i = 0; i + 1 < Ns.size(); ++i)
    orders.push_back(std::log(res[i] / res[i + 1]) /
                     std::log(static_cast<double>(Ns[i + 1]) / static_cast<double>(Ns[i])));
  return orders;
}

}  // namespace nlg

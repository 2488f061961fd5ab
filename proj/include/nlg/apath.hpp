#pragma once

// A-paths: gauge fields over I = [0, 1] sampled on a uniform grid, their
// flatness residual, holonomy for action algebroids, and homotopies acting
// on them as gauge flows that vanish at the endpoints.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "nlg/algebroid.hpp"
#include "nlg/smooth.hpp"

namespace nlg {

class APathError : public std::runtime_error {
 public:
  APathError(const std::string& what, double t) : std::runtime_error(what), t_(t) {}
  double time() const { return t_; }

 private:
  double t_;
};

inline constexpr std::size_t kMinAPathIntervals = 8;

struct APath {
  LieAlgebroid A;
  std::vector<Point> x;  // base path at t_k = k / N, k = 0..N
  std::vector<Point> a;  // fiber values at t_k

  std::size_t intervals() const { return x.size() - 1; }
  double time(std::size_t k) const { return static_cast<double>(k) / static_cast<double>(intervals()); }
};

/// Checks sizes, N >= 8 and that x stays in the base box.
APath make_apath(LieAlgebroid A, std::vector<Point> x, std::vector<Point> a);

/// Fourth-order finite-difference time derivative on the uniform grid:
/// centered interior stencil, one-sided closures at the two ends of each side.
std::vector<Point> grid_derivative(const std::vector<Point>& samples);

/// max_k |xdot(t_k) - rho(x(t_k)) a(t_k)|.
double apath_residual(const APath& p);

/// Solves xdot = rho(x) a(t) from x0 by RK4 with N steps; a: [0,1] -> R^r.
APath integrate_base(const LieAlgebroid& A, const SmoothMap& a, const Point& x0, std::size_t N);

/// Same, with a known only on the grid (cubic interpolation at half steps).
std::vector<Point> integrate_gridded(const LieAlgebroid& A, const std::vector<Point>& a,
                                     const Point& x0);

struct Holonomy {
  Matrix R;      // path-ordered exponential, Rdot = R (a^a e_a), R(0) = I
  Point x_end;   // x(1)
};

Holonomy holonomy(const APath& p);
/// |R(1) x(1) - x(0)|_inf, i.e. x(1) is the right action x(0) R(1) = R(1)^-1 x(0).
double holonomy_consistency(const APath& p, const Holonomy& h);
/// Max-abs entrywise difference.
double matrix_distance(const Matrix& a, const Matrix& b);

/// eps(t, s) on [0,1]^2 with eps(0, s) = eps(1, s) = 0.
struct Homotopy {
  SmoothMap eps;  // (t, s) -> R^r
};

/// eps^a(t, s) = sum_k sin(k pi t) (alpha_ak + beta_ak cos(omega_ak s + phi_ak)),
/// k = 1..modes, coefficients bounded by amplitude / modes.
Homotopy random_homotopy(std::size_t rank, std::uint64_t seed, double amplitude = 0.6,
                         std::size_t modes = 3);
Homotopy zero_homotopy(std::size_t rank);
/// Largest |eps| at t = 0 and t = 1 over an s-grid with `n` intervals.
double homotopy_boundary_defect(const Homotopy& h, std::size_t n = 64);

struct HomotopyFlowResult {
  APath path;
  double unprojected_drift = 0.0;  // max over steps of |x_flowed - x_reintegrated|
  double flatness_before = 0.0;
  double flatness_after = 0.0;
};

/// Flows (x, a) in s from 0 to 1 by dx = rho(x) eps, da = d_t eps + C(x)(a, eps)
/// with RK4 (`steps` steps), re-integrating x from x(0) after every step.
HomotopyFlowResult homotopy_flow(const APath& p, const Homotopy& h, std::size_t steps = 40);

struct WeinsteinOptions {
  std::size_t paths = 5;
  std::size_t homotopies = 10;
  std::size_t intervals = 256;
  std::size_t steps = 40;
  double amplitude = 0.6;
  bool zero_homotopies = false;
  std::uint64_t seed = 7;
};

struct WeinsteinTrial {
  std::size_t path = 0;
  std::size_t homotopy = 0;
  double holonomy_drift = 0.0;
  double endpoint_drift = 0.0;
  double unprojected_drift = 0.0;
  double flatness_after = 0.0;
};

struct WeinsteinReport {
  std::vector<WeinsteinTrial> trials;
  double max_holonomy_drift = 0.0;
  double max_endpoint_drift = 0.0;
  double max_unprojected_drift = 0.0;
  double max_flatness = 0.0;
  double max_consistency = 0.0;    // holonomy_consistency over the sampled paths
  double max_orthogonality = 0.0;  // |R^T R - I|
  double min_separation = 0.0;     // distance of the pi/2 and pi rotation classes after flows
  std::vector<APath> sample_paths; // the unflowed random paths, for plotting
};

/// Random flat A-paths of an action algebroid with matrix generators and
/// random homotopies acting on them.
WeinsteinReport weinstein_experiment(const LieAlgebroid& A, const WeinsteinOptions& opts = {});

/// Observed order of x(1) under N, 2N, 4N, ... against a fine reference:
/// returns log2(err(N_i) / err(N_{i+1})).
std::vector<double> integration_orders(const LieAlgebroid& A, const SmoothMap& a, const Point& x0,
                                       const std::vector<std::size_t>& Ns);
/// Same for apath_residual(integrate_base(...)).
std::vector<double> residual_orders(const LieAlgebroid& A, const SmoothMap& a, const Point& x0,
                                    const std::vector<std::size_t>& Ns);

}  // namespace nlg

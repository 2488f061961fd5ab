#pragma once

// Gauge fields on trivial principal groupoid bundles: a bundle map
// theta: TM -> A over f: M -> base(A), stored as f and theta^a_mu(u).
//
// Layouts: theta entry (a, mu) at a*m + mu; anchor residual T^i_mu at
// i*m + mu; field strength F^a_mu,nu at (a*m + mu)*m + nu; M-valued 2-forms
// (mu, nu) at mu*m + nu.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "nlg/algebroid.hpp"
#include "nlg/smooth.hpp"

namespace nlg {

struct GaugeField {
  Chart source;
  LieAlgebroid A;
  SmoothMap f;      // M -> base(A)
  SmoothMap theta;  // M -> r*m

  std::size_t m() const { return source.dim(); }
};

GaugeField make_gauge_field(Chart source, LieAlgebroid A, SmoothMap f, SmoothMap theta);

/// theta = f_* on the tangent algebroid of `base`.
GaugeField tangent_pushforward_field(const Chart& source, const Chart& base, SmoothMap f);

/// Infinitesimal gauge parameter. A plain parameter is a map eps: M -> R^r
/// (constant along the base in the local frame). A pulled-back parameter
/// comes from a section eps_hat of A, eps = eps_hat o f; it generates the
/// u-independent bisection flow of eps_hat.
struct GaugeParameter {
  SmoothMap eps;                     // M -> R^r
  std::optional<ASection> eps_hat;   // set when pulled back

  bool pulled_back() const { return eps_hat.has_value(); }
};

GaugeParameter plain_parameter(const GaugeField& g, SmoothMap eps);
GaugeParameter pulled_back_parameter(const GaugeField& g, ASection eps_hat);

class FlowError : public std::runtime_error {
 public:
  FlowError(const std::string& what, Point at) : std::runtime_error(what), point_(std::move(at)) {}
  const Point& point() const { return point_; }

 private:
  Point point_;
};

class BasisMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Pointwise curvature data.

std::vector<double> anchor_residual(const GaugeField& g, std::span<const double> u);
std::vector<double> field_strength(const GaugeField& g, std::span<const double> u);
/// (F_theta h)_mu = d_mu(h o f) - (theta^* d_A h)_mu, computed literally.
std::vector<double> curvature_on_function(const GaugeField& g, const SmoothMap& h,
                                          std::span<const double> u);
/// F_theta lambda = d_M(theta^* lambda) - theta^*(d_A lambda), computed literally.
std::vector<double> curvature_on_oneform(const GaugeField& g, const AForm& lambda,
                                         std::span<const double> u);
/// lambda_a(f) F^a + T^j_mu d_j lambda_a theta^a_nu - (mu <-> nu); equals
/// curvature_on_oneform for every field.
std::vector<double> curvature_decomposition(const GaugeField& g, const AForm& lambda,
                                            std::span<const double> u);
/// <dh, T>: equals curvature_on_function for every field.
std::vector<double> anchor_contraction(const GaugeField& g, const SmoothMap& h,
                                       std::span<const double> u);
/// theta^* lambda as a 1-form on M.
SmoothMap pullback_oneform(const GaugeField& g, const AForm& lambda);

struct FlatReport {
  double max_anchor = 0.0;
  double max_field = 0.0;
  Point worst_anchor;
  Point worst_field;
  double tol = 0.0;
  bool flat = false;
};

FlatReport is_flat(const GaugeField& g, double tol, const std::vector<Point>& pts);

struct MorphismReport {
  double max_function = 0.0;  // max |F_theta(h_k)|
  double max_oneform = 0.0;   // max |F_theta(lambda_l)|
  Point worst;
  double tol = 0.0;
  double max() const { return max_function > max_oneform ? max_function : max_oneform; }
  bool morphism() const { return max() <= tol; }
};

MorphismReport morphism_residual(const GaugeField& g, const std::vector<SmoothMap>& functions,
                                 const std::vector<AForm>& covectors,
                                 const std::vector<Point>& pts, double tol);
/// Coordinate functions x^i on the base of A.
std::vector<SmoothMap> coordinate_functions(const LieAlgebroid& A);
/// Constant dual frame e^a.
std::vector<AForm> basis_covectors(const LieAlgebroid& A);

// Gauge transformations.

struct GaugeVariation {
  SmoothMap df;      // M -> n
  SmoothMap dtheta;  // M -> r*m
};

/// Plain eps:  df = rho(f) eps,       dtheta^a = d eps^a + C^a_bc(f) theta^b eps^c.
/// Pulled back: df = rho(eps_hat)(f), dtheta^a = C^a_bc(f) theta^b eps_hat^c
///                                              + rho^j_b(f) theta^b d_j eps_hat^a.
/// The two agree whenever theta satisfies the anchor condition.
GaugeVariation infinitesimal_gauge(const GaugeField& g, const GaugeParameter& eps);

/// Flow of the infinitesimal gauge transformation to time t with classic RK4
/// (`steps` steps), evaluated lazily and pointwise in u. Throws FlowError when
/// f leaves the base box.
GaugeField flow_gauge(const GaugeField& g, const GaugeParameter& eps, double t, std::size_t steps);

/// Matrix-group valued gauge: R: M -> k x k orthogonal (row-major), with the
/// matrix generators the algebroid's frame corresponds to.
struct GroupGauge {
  SmoothMap R;
  std::vector<Matrix> generators;
};

/// Max of |R^T R - I| and |det R - 1| over the points.
double group_gauge_defect(const GroupGauge& R, const std::vector<Point>& pts);

/// theta' = Ad_{R^-1} theta + R^-1 dR in the generator basis. For action
/// algebroids the base map follows the right action, f' = R^T f.
GaugeField apply_group_gauge(const GaugeField& g, const GroupGauge& R);

/// Sign s with which forms on A are transported alongside a gauge flow:
/// lambda_t = lambda + s t L_eps_hat lambda to first order.
inline constexpr double kTransportSign = -1.0;

struct CovarianceOptions {
  std::vector<double> times{0.2, 0.1, 0.05};
  std::size_t steps = 40;
  std::size_t points = 12;
  std::uint64_t seed = 99;
};

struct CovarianceReport {
  std::vector<double> times;
  std::vector<double> residual_oneform;   // max_u |F_t(lambda_t) - F_0(lambda)|
  std::vector<double> residual_function;  // max_u |F_t(h_t) - F_0(h)|
  std::vector<double> residual;           // max of both
  std::vector<double> ratios;             // residual[i] / residual[i+1]
  std::vector<double> orders;             // log(ratio) / log(times[i]/times[i+1])
};

/// First-order gauge invariance of F_theta under the bisection flow of
/// eps_hat: the forms are transported linearly, so the residual is O(t^2).
CovarianceReport covariance_check(const GaugeField& g, const ASection& eps_hat,
                                  const AForm& lambda, const SmoothMap& h,
                                  const CovarianceOptions& opts = {});

}  // namespace nlg

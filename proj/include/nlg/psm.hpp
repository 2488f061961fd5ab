#pragma once

// Poisson sigma model fields (X, eta) on a 2-dimensional source and their
// equations of motion, both through the generic gauge-field operators and
// through the classical component formulas.
//
// Index placement: eta_{mu i} is stored at mu*n + i and becomes the gauge
// field component theta^(i)_mu of the cotangent algebroid.

#include <string>
#include <vector>

#include "nlg/gauge.hpp"

namespace nlg {

struct PoissonStructure {
  std::string name;
  Chart chart;
  SmoothMap pi;  // chart -> n*n, entry (i, j) at i*n + j
  bool declared_poisson = true;
  double measured_jacobiator = 0.0;  // max |J^ijk| over the default sample set

  std::size_t dim() const { return chart.dim(); }
};

/// Checks antisymmetry of pi at sample points and measures the Jacobiator.
PoissonStructure make_poisson(std::string name, Chart chart, SmoothMap pi, bool declared_poisson);

/// sympl2, su2, nonpoisson, quad.
std::vector<PoissonStructure> builtin_poisson_models();
PoissonStructure builtin_poisson(const std::string& name);

struct PSMField {
  Chart source;   // dimension 2
  SmoothMap X;    // source -> chart
  SmoothMap eta;  // source -> 2*n, entry (mu, i) at mu*n + i
};

PSMField make_psm_field(const PoissonStructure& ps, Chart source, SmoothMap X, SmoothMap eta);

GaugeField as_gauge_field(const PoissonStructure& ps, const PSMField& phi);
PSMField read_back(const GaugeField& g);

struct EOMResidual {
  std::vector<double> r1;  // (i, mu) at i*m + mu
  std::vector<double> r2;  // (i, mu, nu) at (i*m + mu)*m + nu
};

/// Through the gauge module: anchor residual and field strength.
EOMResidual eom_residual(const PoissonStructure& ps, const PSMField& phi, std::span<const double> u);
/// r1 = d_mu X^i + pi^ij(X) eta_{mu j},
/// r2 = d_mu eta_{nu i} - d_nu eta_{mu i} + d_i pi^jk(X) eta_{mu j} eta_{nu k}.
EOMResidual eom_components(const PoissonStructure& ps, const PSMField& phi, std::span<const double> u);

/// Random smooth (X, eta) on [-1, 1]^2 with X inside the central part of the chart.
PSMField random_psm_field(const PoissonStructure& ps, std::uint64_t seed, double amplitude = 0.5);
/// For constant invertible pi: eta_{mu j} = -(pi^-1)_{ji} d_mu X^i.
PSMField symplectic_on_shell(const PoissonStructure& ps, const Chart& source, SmoothMap X);

}  // namespace nlg

#pragma once

// Lie algebroids in a single chart: anchor rho^i_a(x) and structure
// functions C^c_ab(x) for a local frame e_a, so that
//   [e_a, e_b] = C^c_ab e_c,   rho(e_a) = rho^i_a d/dx^i.
//
// Storage layout (row-major flattening):
//   anchor     base -> n*r,   entry (i, a)    at i*r + a
//   structure  base -> r*r*r, entry (c, a, b) at (c*r + a)*r + b
//   2-forms    entry (a, b) at a*r + b, evaluated without a 1/2 factor.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nlg/smooth.hpp"

namespace nlg {

enum class AlgebroidKind { LieAlgebra, Tangent, Action, Cotangent, General };

/// Measured axiom residuals over a seeded sample set.
struct AxiomReport {
  double antisymmetry = 0.0;   // max |C^c_ab + C^c_ba|
  double anchor_compat = 0.0;  // max |R^i_ab|
  double jacobi = 0.0;         // max |J^d_abc|
  Point worst_anchor_compat;
  Point worst_jacobi;
  std::size_t points = 0;
  double tol = 0.0;
  bool valid() const { return antisymmetry <= tol && anchor_compat <= tol && jacobi <= tol; }
};

inline constexpr double kDefaultAxiomTol = 1e-9;
inline constexpr std::size_t kDefaultAxiomPoints = 100;
inline constexpr std::uint64_t kDefaultAxiomSeed = 20240601;

class LieAlgebroid {
 public:
  LieAlgebroid(std::string name, AlgebroidKind kind, Chart base, std::size_t rank,
               SmoothMap anchor, SmoothMap structure, std::vector<Matrix> generators = {});

  const std::string& name() const { return name_; }
  AlgebroidKind kind() const { return kind_; }
  const Chart& base() const { return base_; }
  std::size_t dim() const { return base_.dim(); }
  std::size_t rank() const { return rank_; }
  const SmoothMap& anchor() const { return anchor_; }
  const SmoothMap& structure() const { return structure_; }
  /// Matrix generators e_a of a Lie algebra representation, when known.
  const std::vector<Matrix>& generators() const { return generators_; }

  /// Residuals measured at construction with the default sample set.
  const AxiomReport& measured() const { return measured_; }

 private:
  std::string name_;
  AlgebroidKind kind_;
  Chart base_;
  std::size_t rank_;
  SmoothMap anchor_;
  SmoothMap structure_;
  std::vector<Matrix> generators_;
  AxiomReport measured_;
};

/// A section of A: r component functions on the base.
using ASection = SmoothMap;

/// Forms on A in degrees 0..2.
struct AForm {
  int degree = 0;
  SmoothMap coeffs;  // codim 1, r, or r*r
};

AForm make_form(const LieAlgebroid& A, int degree, SmoothMap coeffs);

// Constructors.

/// Lie algebra with constant structure constants C (flattened (c*r+a)*r+b),
/// as an algebroid with zero anchor over `base` (default: a 1-d chart).
LieAlgebroid from_lie_algebra(std::vector<double> structure_constants,
                              std::optional<Chart> base = std::nullopt,
                              std::vector<Matrix> generators = {}, std::string name = "lie_algebra");
/// so(3) with [e_a, e_b] = eps_abc e_c and generators L_a x = e_a x x.
LieAlgebroid so3_algebra(std::optional<Chart> base = std::nullopt);
LieAlgebroid tangent_algebroid(const Chart& chart);
/// Action algebroid g x M with anchor columns v_a (map chart -> n*r, entry i*r+a).
LieAlgebroid action_algebroid(const Chart& chart, std::vector<double> structure_constants,
                              SmoothMap vector_fields, std::vector<Matrix> generators = {},
                              std::string name = "action");
/// Right action of a matrix Lie algebra on R^n: v_a(x) = -E_a x.
LieAlgebroid linear_action_algebroid(const Chart& chart, std::vector<Matrix> generators,
                                     std::vector<double> structure_constants,
                                     std::string name = "linear_action");
/// so(3) acting on R^3 with v_a(x) = x cross e_a.
LieAlgebroid so3_action_r3(double half_width = 2.0);
/// Cotangent algebroid of a bivector pi (map chart -> n*n, entry i*n+j):
/// rho^i_(j) = pi^ji, C^(k)_(i)(j) = d_k pi^ij.
LieAlgebroid cotangent_algebroid(const Chart& chart, SmoothMap bivector,
                                 std::string name = "cotangent");

/// Copy of A whose structure component C^c_ab (and C^c_ba, to keep
/// antisymmetry) is replaced by scale * C + shift.
LieAlgebroid mutate_structure(const LieAlgebroid& A, std::size_t c, std::size_t a, std::size_t b,
                              double scale, double shift);

// Operations.

ASection bracket(const LieAlgebroid& A, const ASection& s1, const ASection& s2);
/// Anchor image rho(s) as a vector field on the base.
SmoothMap anchor_of(const LieAlgebroid& A, const ASection& s);
AForm d_A(const LieAlgebroid& A, const AForm& w);
/// d_A of a 2-form evaluated on frame triples, entry (a, b, c) at (a*r+b)*r+c.
std::vector<double> d_A_on_triples(const LieAlgebroid& A, const AForm& w, std::span<const double> x);
AForm lie_derivative(const LieAlgebroid& A, const ASection& s, const AForm& w);
/// Contraction i_s w.
AForm contract(const LieAlgebroid& A, const ASection& s, const AForm& w);

/// R^i_ab = rho^i_c C^c_ab - rho^j_a d_j rho^i_b + rho^j_b d_j rho^i_a, entry (i*r+a)*r+b.
std::vector<double> anchor_compat_residual(const LieAlgebroid& A, std::span<const double> x);
/// J^d_abc = sum_cyc(abc) [C^d_ae C^e_bc + rho^j_a d_j C^d_bc], entry ((d*r+a)*r+b)*r+c.
std::vector<double> jacobi_residual(const LieAlgebroid& A, std::span<const double> x);

/// J^ijk = pi^lk d_l pi^ij + pi^li d_l pi^jk + pi^lj d_l pi^ki as a map on the
/// chart (entry (i*n+j)*n+k).
SmoothMap jacobiator_map(const SmoothMap& bivector);
std::vector<double> poisson_jacobiator(const SmoothMap& bivector, std::span<const double> x);

AxiomReport measure_axioms(const LieAlgebroid& A, std::size_t points = kDefaultAxiomPoints,
                           std::uint64_t seed = kDefaultAxiomSeed, double tol = kDefaultAxiomTol);

/// Levi-Civita symbol on {0,1,2}.
constexpr double levi_civita(std::size_t i, std::size_t j, std::size_t k) {
  if (i == j || j == k || i == k) return 0.0;
  return ((i + 1) % 3 == j) ? 1.0 : -1.0;
}

/// so(3) structure constants C^c_ab = eps_abc, flattened.
std::vector<double> so3_structure_constants();
/// Generators L_a with L_a x = e_a x x and [L_a, L_b] = eps_abc L_c.
std::vector<Matrix> so3_generators();

}  // namespace nlg

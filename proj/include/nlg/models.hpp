#pragma once

// Named built-in algebroids and seeded generators of fields, functions and
// forms used by the verification suites.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nlg/gauge.hpp"

namespace nlg {

struct BuiltinModel {
  std::string name;
  LieAlgebroid A;
  bool declared_valid = true;
  /// Exactly flat field on [-1, 1]^m from a closed-form construction (empty if none).
  std::function<GaugeField(std::size_t m, std::uint64_t seed)> flat_field;
};

/// abelian, so3, tangent3, so3_action, sympl2, su2, quad, nonpoisson.
std::vector<std::string> builtin_model_names();
BuiltinModel builtin_model(const std::string& name);

/// Centre of the base box of A.
Point base_center(const LieAlgebroid& A);

/// Seeded smooth field on [-1, 1]^m with f inside the central part of the base box.
GaugeField random_gauge_field(const LieAlgebroid& A, std::size_t m, std::uint64_t seed,
                              double amplitude = 0.6);
/// f constant at the base centre (or `f0`), theta = 0.
GaugeField zero_gauge_field(const LieAlgebroid& A, std::size_t m, std::optional<Point> f0 = std::nullopt);

SmoothMap random_function(const LieAlgebroid& A, std::uint64_t seed);
AForm random_oneform(const LieAlgebroid& A, std::uint64_t seed);
ASection random_section(const LieAlgebroid& A, std::uint64_t seed, double amplitude = 0.5);

}  // namespace nlg

#pragma once

// Model files: a single TOML document describing a chart, an algebroid in
// terms of expressions, an optional gauge field, and the suites to run.
// The format is documented in docs/model-files.md.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlg/gauge.hpp"
#include "nlg/groupoid.hpp"
#include "nlg/psm.hpp"

namespace nlg::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GaugeSpec {
  GaugeField field;
  std::optional<bool> expect_flat;
};

struct ModelConfig {
  std::string name;
  std::string origin;  // file path or "builtin:<name>"
  std::optional<LieAlgebroid> algebroid;
  std::optional<PoissonStructure> poisson;  // set for cotangent models given by a bivector
  bool declared_valid = true;
  std::optional<GaugeSpec> gauge;
  std::string psm_model;        // Poisson model for the psm suite
  std::string groupoid;         // built-in finite groupoid for the finite-groupoid suite
  std::string groupoid_file;    // or a JSON description
  std::vector<std::string> suites;  // used by `all`

  // Settings from the file; command-line flags take precedence.
  std::optional<double> tol;
  std::optional<std::size_t> points;
  std::optional<std::uint64_t> seed;
};

/// Parses a model file; errors carry "path:line:column: message".
ModelConfig load_model_file(const std::string& path);
ModelConfig load_model_string(const std::string& text, const std::string& origin);
/// Built-in algebroid models (see builtin_model_names) and finite groupoids
/// (pair4, z3, random).
ModelConfig builtin_config(const std::string& name);

/// Suites run by `all` when the model does not list any.
std::vector<std::string> default_suites(const ModelConfig& m);

}  // namespace nlg::cli

#pragma once

// Verification suites behind the command-line subcommands. Each suite
// returns a JSON object {name, status, checks[], ...}; a check carries its
// measured value, its bound and, where meaningful, the worst sample point.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "config.hpp"
#include "nlg/apath.hpp"

namespace nlg::cli {

using Json = nlohmann::ordered_json;

/// Command-line overrides; unset fields fall back to the model file, then
/// to the defaults table.
struct SuiteOptions {
  std::optional<double> tol;
  std::optional<std::size_t> points;
  std::optional<std::uint64_t> seed;
};

struct SuiteResult {
  Json report;
  bool pass = false;
  std::vector<APath> paths;  // plot data
  double seconds = 0.0;
};

std::vector<std::string> suite_names();
bool is_suite(const std::string& name);

/// Runs one suite. Throws ConfigError when the model lacks what the suite
/// needs (for example weinstein on a model without matrix generators).
SuiteResult run_suite(const std::string& name, const ModelConfig& cfg, const SuiteOptions& opts);

}  // namespace nlg::cli

#pragma once

// Report assembly and output. report.json is deterministic for a fixed
// model, seed and version; wall times go to timing.json. Plot data is CSV
// (RFC 4180, CRLF line endings). All files are written atomically.

#include <filesystem>
#include <string>
#include <vector>

#include "suites.hpp"

namespace nlg::cli {

inline constexpr const char* kVersion = "0.1.0";

Json report_json(const ModelConfig& cfg, const SuiteOptions& opts, const std::vector<SuiteResult>& results);
Json timing_json(const std::vector<SuiteResult>& results);

/// Writes to a temporary file in the same directory, then renames it over
/// `path`. Throws std::runtime_error on I/O failure.
void write_atomic(const std::filesystem::path& path, const std::string& bytes);

/// One row per grid time: t, x1..xn, a1..ar.
std::string plot_csv(const APath& p);
std::string plot_header(std::size_t dim, std::size_t rank);

/// One CSV per path (<stem>_<k>.csv); an empty list gives a header-only
/// <stem>.csv. Returns the files written.
std::vector<std::filesystem::path> emit_plotdata(const std::vector<APath>& paths, std::size_t dim,
                                                 std::size_t rank, const std::filesystem::path& dir,
                                                 const std::string& stem);

}  // namespace nlg::cli

#include "cli.hpp"

#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "config.hpp"
#include "report.hpp"
#include "suites.hpp"

#ifndef NLG_DEFAULT_MODEL
#define NLG_DEFAULT_MODEL "models/default.toml"
#endif

namespace nlg::cli {

int run(int argc, const char* const* argv) {
  CLI::App app{"Verification suites for Lie algebroid gauge theory", "nlg"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string model_path, builtin, out_dir = ".", format = "json";
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<std::size_t> points;
  auto* model_opt = app.add_option("--model", model_path, "Model file (TOML)");
  app.add_option("--builtin", builtin, "Built-in model or finite groupoid")->excludes(model_opt);
  app.add_option("--seed", seed, "Seed for sample points and random data");
  app.add_option("--tol", tol, "Primary tolerance of the selected suites")->check(CLI::PositiveNumber);
  app.add_option("--points", points, "Number of sample points")->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--format", format, "json, or csv for JSON plus plot data")
      ->check(CLI::IsMember({"json", "csv"}));

  std::string subcommand;
  for (const auto& name : suite_names()) app.add_subcommand(name, "Run the " + name + " suite");
  app.add_subcommand("all", "Run every suite listed by the model");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitConfig;
  }
  subcommand = app.get_subcommands().front()->get_name();

  try {
    ModelConfig cfg;
    if (!builtin.empty()) {
      try {
        cfg = builtin_config(builtin);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    } else {
      cfg = load_model_file(model_path.empty() ? std::string(NLG_DEFAULT_MODEL) : model_path);
    }
    SuiteOptions opts{tol, points, seed};
    const std::vector<std::string> selected =
        subcommand == "all" ? default_suites(cfg) : std::vector<std::string>{subcommand};
    if (selected.empty()) throw ConfigError(cfg.origin + ": no suites apply to this model");

    std::vector<SuiteResult> results;
    for (const auto& s : selected) {
      results.push_back(run_suite(s, cfg, opts));
      const auto& r = results.back();
      std::cout << s << ": " << r.report["status"].get<std::string>() << "\n";
      if (r.report.contains("error")) std::cerr << s << ": " << r.report["error"].get<std::string>() << "\n";
      for (const auto& c : r.report["checks"])
        if (!c["pass"].get<bool>()) std::cout << "  failed " << c["name"].get<std::string>() << "\n";
    }

    const std::filesystem::path out(out_dir);
    std::filesystem::create_directories(out);
    const Json report = report_json(cfg, opts, results);
    write_atomic(out / "report.json", report.dump(2) + "\n");
    write_atomic(out / "timing.json", timing_json(results).dump(2) + "\n");
    if (format == "csv") {
      for (const auto& r : results) {
        if (r.report["name"] != "weinstein") continue;
        emit_plotdata(r.paths, cfg.algebroid->dim(), cfg.algebroid->rank(), out, "weinstein_path");
      }
    }
    return report["status"] == "pass" ? kExitPass : kExitFail;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace nlg::cli

#include "report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace nlg::cli {
namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Json report_json(const ModelConfig& cfg, const SuiteOptions& opts, const std::vector<SuiteResult>& results) {
  Json j;
  j["tool"] = "nlg";
  j["version"] = kVersion;
  Json model;
  model["name"] = cfg.name;
  model["source"] = std::filesystem::path(cfg.origin).filename().string();
  if (cfg.algebroid) {
    model["dim"] = cfg.algebroid->dim();
    model["rank"] = cfg.algebroid->rank();
  }
  j["model"] = std::move(model);
  Json overrides = Json::object();
  if (opts.seed) overrides["seed"] = *opts.seed;
  if (opts.tol) overrides["tol"] = *opts.tol;
  if (opts.points) overrides["points"] = *opts.points;
  j["overrides"] = std::move(overrides);
  bool pass = true;
  Json suites = Json::array();
  for (const auto& r : results) {
    pass = pass && r.pass;
    suites.push_back(r.report);
  }
  j["status"] = pass ? "pass" : "fail";
  j["suites"] = std::move(suites);
  return j;
}

Json timing_json(const std::vector<SuiteResult>& results) {
  Json j;
  double total = 0.0;
  Json list = Json::array();
  for (const auto& r : results) {
    Json s;
    s["name"] = r.report.value("name", "");
    s["seconds"] = r.seconds;
    total += r.seconds;
    list.push_back(std::move(s));
  }
  j["suites"] = std::move(list);
  j["total_seconds"] = total;
  return j;
}

void write_atomic(const std::filesystem::path& path, const std::string& bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

std::string plot_header(std::size_t dim, std::size_t rank) {
  std::string h = csv_field("t");
  for (std::size_t i = 1; i <= dim; ++i) h += "," + csv_field("x" + std::to_string(i));
  for (std::size_t a = 1; a <= rank; ++a) h += "," + csv_field("a" + std::to_string(a));
  return h + "\r\n";
}

std::string plot_csv(const APath& p) {
  std::string s = plot_header(p.A.dim(), p.A.rank());
  for (std::size_t k = 0; k < p.x.size(); ++k) {
    s += number(p.time(k));
    for (double v : p.x[k]) s += "," + number(v);
    for (double v : p.a[k]) s += "," + number(v);
    s += "\r\n";
  }
  return s;
}

std::vector<std::filesystem::path> emit_plotdata(const std::vector<APath>& paths, std::size_t dim,
                                                 std::size_t rank, const std::filesystem::path& dir,
                                                 const std::string& stem) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  if (paths.empty()) {
    written.push_back(dir / (stem + ".csv"));
    write_atomic(written.back(), plot_header(dim, rank));
    return written;
  }
  for (std::size_t k = 0; k < paths.size(); ++k) {
    written.push_back(dir / (stem + "_" + std::to_string(k) + ".csv"));
    write_atomic(written.back(), plot_csv(paths[k]));
  }
  return written;
}

}  // namespace nlg::cli

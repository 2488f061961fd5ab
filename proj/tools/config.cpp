#include "config.hpp"

#include <charconv>
#include <filesystem>
#include <sstream>

#include <toml.hpp>

#include "nlg/expr.hpp"
#include "nlg/models.hpp"

namespace nlg::cli {
namespace {

struct Ctx {
  std::string origin;

  [[noreturn]] void fail(const toml::node* node, const std::string& msg) const {
    std::ostringstream os;
    os << origin;
    if (node) os << ":" << node->source().begin.line << ":" << node->source().begin.column;
    os << ": " << msg;
    throw ConfigError(os.str());
  }
  [[noreturn]] void fail(const toml::table& t, const std::string& msg) const {
    fail(static_cast<const toml::node*>(&t), msg);
  }
};

const toml::table* subtable(const Ctx& ctx, const toml::table& root, const char* key, bool required) {
  const toml::node* n = root.get(key);
  if (!n) {
    if (required) ctx.fail(root, std::string("missing table [") + key + "]");
    return nullptr;
  }
  if (!n->is_table()) ctx.fail(n, std::string("\"") + key + "\" must be a table");
  return n->as_table();
}

const toml::array& array_at(const Ctx& ctx, const toml::table& t, const char* key) {
  const toml::node* n = t.get(key);
  if (!n) ctx.fail(t, std::string("missing key \"") + key + "\"");
  if (!n->is_array()) ctx.fail(n, std::string("\"") + key + "\" must be an array");
  return *n->as_array();
}

std::vector<double> numbers(const Ctx& ctx, const toml::table& t, const char* key) {
  std::vector<double> out;
  for (const auto& e : array_at(ctx, t, key)) {
    const auto v = e.value<double>();
    if (!v) ctx.fail(&e, std::string("\"") + key + "\" entries must be numbers");
    out.push_back(*v);
  }
  return out;
}

std::vector<std::string> strings(const Ctx& ctx, const toml::table& t, const char* key) {
  std::vector<std::string> out;
  for (const auto& e : array_at(ctx, t, key)) {
    const auto v = e.value<std::string>();
    if (!v) ctx.fail(&e, std::string("\"") + key + "\" entries must be strings");
    out.push_back(*v);
  }
  return out;
}

// Expressions may be given as strings or plain numbers.
SmoothMap expressions(const Ctx& ctx, const toml::table& t, const char* key, const Chart& chart,
                      std::size_t expected) {
  const toml::array& arr = array_at(ctx, t, key);
  if (arr.size() != expected) {
    std::ostringstream os;
    os << "\"" << key << "\" needs " << expected << " entries, found " << arr.size();
    ctx.fail(&arr, os.str());
  }
  std::vector<Expr> exprs;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const toml::node& e = arr[i];
    std::string src;
    if (auto s = e.value_exact<std::string>()) {
      src = *s;
    } else if (auto d = e.value<double>()) {
      char buf[64];
      const auto res = std::to_chars(buf, buf + sizeof buf, *d);
      src.assign(buf, res.ptr);
    } else {
      ctx.fail(&e, std::string("\"") + key + "\" entries must be expressions");
    }
    try {
      exprs.push_back(parse_expr(src, chart));
    } catch (const ParseError& err) {
      std::ostringstream os;
      os << key << "[" << i << "]: syntax error: " << err.what();
      ctx.fail(&e, os.str());
    } catch (const UnknownIdentifier& err) {
      ctx.fail(&e, std::string(key) + "[" + std::to_string(i) + "]: " + err.what());
    }
  }
  return to_map(exprs, chart.dim());
}

Chart chart_from(const Ctx& ctx, const toml::table& t) {
  const auto labels = strings(ctx, t, "labels");
  const auto lo = numbers(ctx, t, "lo");
  const auto hi = numbers(ctx, t, "hi");
  if (labels.size() != lo.size() || labels.size() != hi.size())
    ctx.fail(t, "labels, lo and hi must have equal length");
  std::vector<Interval> box;
  for (std::size_t i = 0; i < lo.size(); ++i) box.push_back({lo[i], hi[i]});
  try {
    return Chart(labels, box);
  } catch (const std::invalid_argument& e) {
    ctx.fail(t, e.what());
  }
}

std::size_t cube_root(const Ctx& ctx, const toml::table& t, std::size_t count) {
  std::size_t r = 1;
  while (r * r * r < count) ++r;
  if (r * r * r != count) ctx.fail(t, "structure needs r^3 entries");
  return r;
}

std::string kind_of(const Ctx& ctx, const toml::table& t) {
  const auto k = t["kind"].value<std::string>();
  if (!k) ctx.fail(t, "algebroid needs a string \"kind\"");
  return *k;
}

LieAlgebroid algebroid_from(const Ctx& ctx, const toml::table& root, const toml::table& t,
                            std::optional<PoissonStructure>& poisson, bool declared) {
  const std::string kind = kind_of(ctx, t);
  const toml::table* ct = subtable(ctx, root, "chart", kind != "lie_algebra");
  std::optional<Chart> chart;
  if (ct) chart = chart_from(ctx, *ct);
  const std::string name = root["name"].value_or<std::string>("model");
  try {
    if (kind == "lie_algebra") {
      const auto c = numbers(ctx, t, "structure");
      cube_root(ctx, t, c.size());
      return from_lie_algebra(c, chart, {}, name);
    }
    if (kind == "tangent") return tangent_algebroid(*chart);
    const std::size_t n = chart->dim();
    if (kind == "cotangent") {
      const SmoothMap pi = expressions(ctx, t, "pi", *chart, n * n);
      try {
        poisson = make_poisson(name, *chart, pi, declared);
      } catch (const std::invalid_argument& e) {
        ctx.fail(t, e.what());
      }
      return cotangent_algebroid(*chart, pi, name);
    }
    if (kind == "action") {
      const auto c = numbers(ctx, t, "structure");
      const std::size_t r = cube_root(ctx, t, c.size());
      std::vector<Matrix> gens;
      if (const toml::node* g = t.get("generators")) {
        if (!g->is_array() || g->as_array()->size() != r) ctx.fail(g, "generators: one matrix per basis element");
        for (const auto& e : *g->as_array()) {
          if (!e.is_array() || e.as_array()->size() != n * n) ctx.fail(&e, "generators: each matrix needs n*n numbers");
          Matrix m(n, n);
          std::size_t k = 0;
          for (const auto& v : *e.as_array()) {
            const auto d = v.value<double>();
            if (!d) ctx.fail(&v, "generators: entries must be numbers");
            m.data[k++] = *d;
          }
          gens.push_back(std::move(m));
        }
      }
      if (!t.get("anchor")) {
        if (gens.empty()) ctx.fail(t, "action algebroid needs \"anchor\" or \"generators\"");
        return linear_action_algebroid(*chart, gens, c, name);
      }
      return action_algebroid(*chart, c, expressions(ctx, t, "anchor", *chart, n * r), gens, name);
    }
    if (kind == "general") {
      const auto r = t["rank"].value<std::int64_t>();
      if (!r || *r <= 0) ctx.fail(t, "general algebroid needs a positive integer \"rank\"");
      const std::size_t rr = static_cast<std::size_t>(*r);
      return LieAlgebroid(name, AlgebroidKind::General, *chart, rr,
                          expressions(ctx, t, "anchor", *chart, n * rr),
                          expressions(ctx, t, "structure", *chart, rr * rr * rr));
    }
  } catch (const std::invalid_argument& e) {
    ctx.fail(t, e.what());
  }
  ctx.fail(t["kind"].node(), "unknown algebroid kind \"" + kind + "\"");
}

ModelConfig parse(const toml::table& root, const Ctx& ctx, const std::string& dir) {
  ModelConfig m;
  m.origin = ctx.origin;
  m.name = root["name"].value_or<std::string>("model");
  if (const toml::table* s = subtable(ctx, root, "settings", false)) {
    if (const toml::node* n = s->get("tol")) {
      const auto v = n->value<double>();
      if (!v || *v <= 0) ctx.fail(n, "tol must be a positive number");
      m.tol = *v;
    }
    if (const toml::node* n = s->get("points")) {
      const auto v = n->value<std::int64_t>();
      if (!v || *v <= 0) ctx.fail(n, "points must be a positive integer");
      m.points = static_cast<std::size_t>(*v);
    }
    if (const toml::node* n = s->get("seed")) {
      const auto v = n->value<std::int64_t>();
      if (!v || *v < 0) ctx.fail(n, "seed must be a non-negative integer");
      m.seed = static_cast<std::uint64_t>(*v);
    }
  }
  if (const toml::table* a = subtable(ctx, root, "algebroid", false)) {
    m.declared_valid = (*a)["declared_valid"].value_or(true);
    m.algebroid = algebroid_from(ctx, root, *a, m.poisson, m.declared_valid);
  }
  if (const toml::table* g = subtable(ctx, root, "gauge", false)) {
    if (!m.algebroid) ctx.fail(*g, "[gauge] needs an [algebroid]");
    const Chart source = chart_from(ctx, *g);
    const std::size_t mm = source.dim();
    const SmoothMap f = expressions(ctx, *g, "f", source, m.algebroid->dim());
    const SmoothMap theta = expressions(ctx, *g, "theta", source, m.algebroid->rank() * mm);
    GaugeSpec spec{make_gauge_field(source, *m.algebroid, f, theta), std::nullopt};
    if (const toml::node* e = g->get("expect_flat")) {
      const auto v = e->value<bool>();
      if (!v) ctx.fail(e, "expect_flat must be a boolean");
      spec.expect_flat = *v;
    }
    m.gauge = std::move(spec);
  }
  if (const toml::table* p = subtable(ctx, root, "psm", false)) {
    m.psm_model = (*p)["model"].value_or<std::string>("");
    if (m.psm_model.empty()) ctx.fail(*p, "[psm] needs \"model\"");
  }
  if (const toml::table* g = subtable(ctx, root, "groupoid", false)) {
    m.groupoid = (*g)["builtin"].value_or<std::string>("");
    const std::string file = (*g)["file"].value_or<std::string>("");
    if (!file.empty()) m.groupoid_file = (std::filesystem::path(dir) / file).string();
    if (m.groupoid.empty() && m.groupoid_file.empty()) ctx.fail(*g, "[groupoid] needs \"builtin\" or \"file\"");
  }
  if (const toml::table* s = subtable(ctx, root, "suites", false)) m.suites = strings(ctx, *s, "run");
  return m;
}

}  // namespace

ModelConfig load_model_string(const std::string& text, const std::string& origin) {
  const Ctx ctx{origin};
  toml::table root;
  try {
    root = toml::parse(text, origin);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << origin << ":" << e.source().begin.line << ":" << e.source().begin.column << ": "
       << e.description();
    throw ConfigError(os.str());
  }
  const std::string dir = std::filesystem::path(origin).parent_path().string();
  return parse(root, ctx, dir);
}

ModelConfig load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open model file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_model_string(buf.str(), path);
}

ModelConfig builtin_config(const std::string& name) {
  ModelConfig m;
  m.name = name;
  m.origin = "builtin:" + name;
  if (name == "pair4" || name == "z3" || name == "random") {
    m.groupoid = name;
    m.suites = {"finite-groupoid"};
    return m;
  }
  BuiltinModel bm = builtin_model(name);  // throws for unknown names
  m.algebroid = bm.A;
  m.declared_valid = bm.declared_valid;
  for (const auto& ps : builtin_poisson_models())
    if (ps.name == name) {
      m.poisson = ps;
      m.psm_model = name;
    }
  return m;
}

std::vector<std::string> default_suites(const ModelConfig& m) {
  if (!m.suites.empty()) return m.suites;
  std::vector<std::string> out;
  if (m.algebroid) {
    out.push_back("validate-algebroid");
    if (m.gauge) out.push_back("check-flat");
    out.push_back("covariance");
    if (m.algebroid->kind() == AlgebroidKind::Action && !m.algebroid->generators().empty())
      out.push_back("weinstein");
  }
  if (!m.groupoid.empty() || !m.groupoid_file.empty()) out.push_back("finite-groupoid");
  if (!m.psm_model.empty()) out.push_back("psm");
  return out;
}

}  // namespace nlg::cli

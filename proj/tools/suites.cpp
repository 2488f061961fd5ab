#include "suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>

#include "defaults.hpp"
#include "nlg/groupoid_json.hpp"
#include "nlg/models.hpp"
#include "nlg/so3.hpp"
#include "nlg/sweep.hpp"

namespace nlg::cli {
namespace {

namespace dflt = defaults;

template <class T>
T pick(const std::optional<T>& flag, const std::optional<T>& file, T fallback) {
  if (flag) return *flag;
  if (file) return *file;
  return fallback;
}

Json check_max(const std::string& name, double value, double tol, const Point& worst = {}) {
  Json c;
  c["name"] = name;
  c["value"] = value;
  c["tol"] = tol;
  c["pass"] = value <= tol;
  if (!worst.empty()) c["worst_point"] = worst;
  return c;
}

Json check_min(const std::string& name, double value, double min) {
  Json c;
  c["name"] = name;
  c["value"] = value;
  c["min"] = min;
  c["pass"] = value > min;
  return c;
}

Json check_range(const std::string& name, double value, double lo, double hi) {
  Json c;
  c["name"] = name;
  c["value"] = value;
  c["lo"] = lo;
  c["hi"] = hi;
  c["pass"] = value >= lo && value <= hi;
  return c;
}

Json check_count(const std::string& name, std::size_t failures) {
  Json c;
  c["name"] = name;
  c["value"] = failures;
  c["tol"] = 0;
  c["pass"] = failures == 0;
  return c;
}

struct Checks {
  Json list = Json::array();
  bool pass = true;
  void add(Json c) {
    pass = pass && c["pass"].get<bool>();
    list.push_back(std::move(c));
  }
};

struct Worst {
  double value = 0.0;
  Point at;
  void take(const ArgMax& m, const std::vector<Point>& pts) {
    if (m.index >= 0 && (at.empty() || m.value > value)) {
      value = m.value;
      at = pts[static_cast<std::size_t>(m.index)];
    }
  }
};

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

SuiteResult finish(const std::string& name, const ModelConfig& cfg, Checks cs, Json extra = Json::object()) {
  SuiteResult r;
  r.pass = cs.pass;
  r.report["name"] = name;
  r.report["model"] = cfg.name;
  r.report["status"] = cs.pass ? "pass" : "fail";
  r.report["checks"] = std::move(cs.list);
  for (auto& [k, v] : extra.items()) r.report[k] = v;
  return r;
}

const LieAlgebroid& need_algebroid(const ModelConfig& cfg, const std::string& suite) {
  if (!cfg.algebroid) throw ConfigError(cfg.origin + ": suite " + suite + " needs an algebroid");
  return *cfg.algebroid;
}

bool builtin_origin(const ModelConfig& cfg) { return cfg.origin.rfind("builtin:", 0) == 0; }

bool so3_generated(const LieAlgebroid& A) {
  const auto& gens = A.generators();
  if (gens.size() != 3 || A.rank() != 3) return false;
  const auto ref = so3_generators();
  for (std::size_t a = 0; a < 3; ++a)
    if (gens[a].rows != 3 || gens[a].data != ref[a].data) return false;
  return true;
}

std::vector<Point> grid(std::size_t per_axis) {
  std::vector<Point> pts;
  const double h = 2.0 / static_cast<double>(per_axis - 1);
  for (std::size_t i = 0; i < per_axis; ++i)
    for (std::size_t j = 0; j < per_axis; ++j) pts.push_back({-1.0 + h * i, -1.0 + h * j});
  return pts;
}

// Curvature operator identities on one field: F(h) = <dh, T> and the
// decomposition of F on 1-forms.
void identity_checks(Checks& cs, const GaugeField& g, std::uint64_t seed) {
  const auto pts = sample_points(g.source, dflt::kIdentityPoints, seed);
  Worst fw, ow;
  for (std::size_t k = 0; k < dflt::kIdentityForms; ++k) {
    const SmoothMap h = random_function(g.A, seed + 11 * k + 1);
    const AForm lam = random_oneform(g.A, seed + 11 * k + 2);
    fw.take(parallel::max_over(pts.size(), [&](std::size_t i) {
              return max_diff(curvature_on_function(g, h, pts[i]), anchor_contraction(g, h, pts[i]));
            }),
            pts);
    ow.take(parallel::max_over(pts.size(), [&](std::size_t i) {
              return max_diff(curvature_on_oneform(g, lam, pts[i]), curvature_decomposition(g, lam, pts[i]));
            }),
            pts);
  }
  cs.add(check_max("curvature_function_identity", fw.value, dflt::kIdentityTol, fw.at));
  cs.add(check_max("curvature_oneform_identity", ow.value, dflt::kIdentityTol, ow.at));
}

SuiteResult validate_algebroid(const ModelConfig& cfg, const SuiteOptions& o) {
  const LieAlgebroid& A = need_algebroid(cfg, "validate-algebroid");
  const double tol = pick(o.tol, cfg.tol, dflt::kAxiomTol);
  const std::size_t npts = pick(o.points, cfg.points, dflt::kAxiomPoints);
  const std::uint64_t seed = pick(o.seed, cfg.seed, dflt::kSeed);

  const AxiomReport ax = measure_axioms(A, npts, seed, tol);
  Checks cs;
  cs.add(check_max("antisymmetry", ax.antisymmetry, tol));
  cs.add(check_max("anchor_compat_residual", ax.anchor_compat, tol, ax.worst_anchor_compat));
  cs.add(check_max("jacobi_residual", ax.jacobi, tol, ax.worst_jacobi));

  const auto pts = sample_points(A.base(), npts, seed);
  Worst d0, d1;
  for (std::size_t k = 0; k < dflt::kFormSamples; ++k) {
    const AForm dd = d_A(A, d_A(A, make_form(A, 0, random_function(A, seed + 2 * k + 1))));
    d0.take(parallel::max_over(pts.size(), [&](std::size_t i) { return max_abs(dd.coeffs(pts[i])); }), pts);
    const AForm dl = d_A(A, random_oneform(A, seed + 2 * k + 2));
    d1.take(parallel::max_over(pts.size(), [&](std::size_t i) { return max_abs(d_A_on_triples(A, dl, pts[i])); }),
            pts);
  }
  cs.add(check_max("dd_degree0", d0.value, tol, d0.at));
  cs.add(check_max("dd_degree1", d1.value, tol, d1.at));

  Json extra;
  extra["declared_valid"] = cfg.declared_valid;
  extra["points"] = npts;
  extra["seed"] = seed;
  if (cfg.poisson) {
    const SmoothMap& pi = cfg.poisson->pi;
    extra["poisson_jacobiator"] =
        parallel::max_over(pts.size(), [&](std::size_t i) { return max_abs(poisson_jacobiator(pi, pts[i])); }).value;
  }
  return finish("validate-algebroid", cfg, std::move(cs), std::move(extra));
}

SuiteResult check_flat(const ModelConfig& cfg, const SuiteOptions& o) {
  const LieAlgebroid& A = need_algebroid(cfg, "check-flat");
  const double tol = pick(o.tol, cfg.tol, dflt::kFlatTol);
  const std::size_t npts = pick(o.points, cfg.points, dflt::kFlatPoints);
  const std::uint64_t seed = pick(o.seed, cfg.seed, dflt::kSeed);
  Checks cs;
  Json extra;
  extra["tol"] = tol;
  extra["points"] = npts;

  if (cfg.gauge) {
    const GaugeField& g = cfg.gauge->field;
    const auto pts = sample_points(g.source, npts, seed);
    const FlatReport fr = is_flat(g, tol, pts);
    const MorphismReport mr = morphism_residual(g, coordinate_functions(A), basis_covectors(A), pts, tol);
    extra["anchor_residual"] = fr.max_anchor;
    extra["field_strength"] = fr.max_field;
    extra["morphism_residual"] = mr.max();
    extra["flat"] = fr.flat;
    cs.add(check_count("verdict_disagreements", fr.flat == mr.morphism() ? 0 : 1));
    if (cfg.gauge->expect_flat) {
      Json c;
      c["name"] = "expected_flatness";
      c["value"] = std::max(fr.max_anchor, fr.max_field);
      c["tol"] = tol;
      c["expect_flat"] = *cfg.gauge->expect_flat;
      c["pass"] = fr.flat == *cfg.gauge->expect_flat;
      c["worst_point"] = fr.max_anchor >= fr.max_field ? fr.worst_anchor : fr.worst_field;
      cs.add(std::move(c));
    }
    identity_checks(cs, g, seed);
    return finish("check-flat", cfg, std::move(cs), std::move(extra));
  }

  // Seeded fields: closed-form flat ones (when the model has a construction)
  // alternating with random ones.
  std::function<GaugeField(std::size_t, std::uint64_t)> flat_field;
  if (builtin_origin(cfg)) flat_field = builtin_model(cfg.name).flat_field;
  std::size_t disagreements = 0, random_flat = 0;
  double closed_max = 0.0;
  Point closed_worst;
  Json fields = Json::array();
  for (std::size_t k = 0; k < dflt::kFlatFields; ++k) {
    const bool closed = flat_field && k % 2 == 0;
    const GaugeField g = closed ? flat_field(dflt::kSourceDim, seed + k)
                                : random_gauge_field(A, dflt::kSourceDim, seed + k);
    const auto pts = sample_points(g.source, npts, seed + 1000 + k);
    const FlatReport fr = is_flat(g, tol, pts);
    const MorphismReport mr = morphism_residual(g, coordinate_functions(A), basis_covectors(A), pts, tol);
    if (fr.flat != mr.morphism()) ++disagreements;
    const double res = std::max(fr.max_anchor, fr.max_field);
    if (closed && res >= closed_max) {
      closed_max = res;
      closed_worst = fr.max_anchor >= fr.max_field ? fr.worst_anchor : fr.worst_field;
    }
    if (!closed && fr.flat) ++random_flat;
    Json f;
    f["kind"] = closed ? "closed_form" : "random";
    f["anchor_residual"] = fr.max_anchor;
    f["field_strength"] = fr.max_field;
    f["morphism_residual"] = mr.max();
    f["flat"] = fr.flat;
    fields.push_back(std::move(f));
  }
  cs.add(check_count("verdict_disagreements", disagreements));
  if (flat_field) cs.add(check_max("closed_form_flatness", closed_max, dflt::kClosedFormTol, closed_worst));
  identity_checks(cs, random_gauge_field(A, dflt::kSourceDim, seed + 7), seed);
  extra["random_fields_flat"] = random_flat;
  extra["fields"] = std::move(fields);
  return finish("check-flat", cfg, std::move(cs), std::move(extra));
}

SuiteResult gauge_flow(const ModelConfig& cfg, const SuiteOptions& o) {
  const LieAlgebroid& A = need_algebroid(cfg, "gauge-flow");
  const std::uint64_t seed = pick(o.seed, cfg.seed, dflt::kSeed);
  const std::size_t npts = pick(o.points, cfg.points, dflt::kFlowPoints);
  Checks cs;
  Json extra;
  extra["steps"] = dflt::kFlowSteps;
  extra["time"] = dflt::kFlowTime;

  // Flatness is preserved by the flow of a pulled-back parameter.
  std::optional<GaugeField> start;
  if (cfg.gauge && cfg.gauge->expect_flat.value_or(false)) {
    start = cfg.gauge->field;
  } else if (builtin_origin(cfg)) {
    const BuiltinModel bm = builtin_model(cfg.name);
    if (bm.flat_field) start = bm.flat_field(dflt::kSourceDim, seed);
  }
  if (start) {
    const GaugeParameter eps = pulled_back_parameter(*start, random_section(A, seed + 1, dflt::kFlowAmplitude));
    const GaugeField gt = flow_gauge(*start, eps, dflt::kFlowTime, dflt::kFlowSteps);
    const FlatReport fr = is_flat(gt, dflt::kFlowFlatTol, sample_points(gt.source, npts, seed + 2));
    cs.add(check_max("flow_preserves_flatness", std::max(fr.max_anchor, fr.max_field), dflt::kFlowFlatTol,
                     fr.max_anchor >= fr.max_field ? fr.worst_anchor : fr.worst_field));
  } else {
    extra["flatness_flow"] = "no flat field available";
  }

  if (so3_generated(A)) {
    // Finite rotation exp(xi) against the flow of the constant parameter xi.
    const GaugeField g = random_gauge_field(A, dflt::kSourceDim, seed + 3);
    SeededRng rng(seed + 4);
    std::vector<double> xi(3);
    for (auto& v : xi) v = rng.uniform(-1.0, 1.0);
    const SmoothMap xi_map = constant_map(dflt::kSourceDim, xi);
    const GaugeField gf = flow_gauge(g, plain_parameter(g, xi_map), dflt::kFlowTime, dflt::kFlowSteps);
    const GaugeField gg = apply_group_gauge(g, GroupGauge{so3::exp_field(xi_map, dflt::kFlowTime), so3_generators()});
    const auto pts = sample_points(g.source, npts, seed + 5);
    const ArgMax m = parallel::max_over(pts.size(), [&](std::size_t i) {
      return std::max(max_diff(gf.f(pts[i]), gg.f(pts[i])), max_diff(gf.theta(pts[i]), gg.theta(pts[i])));
    });
    cs.add(check_max("flow_vs_group", m.value, dflt::kGroupFlowTol, pts[static_cast<std::size_t>(m.index)]));

    // F' = Ad_{R^-1} F, and T' = R^-1 T for the action on R^3.
    const std::size_t m_dim = dflt::kSourceDim;
    const auto gpts = grid(dflt::kAdjointGrid);
    const bool action = A.kind() == AlgebroidKind::Action;
    Worst w;
    for (std::size_t k = 0; k < dflt::kAdjointFields; ++k) {
      const SmoothMap R = so3::random_rotation_field(m_dim, seed + 100 + k);
      const GaugeField gr = apply_group_gauge(g, GroupGauge{R, so3_generators()});
      w.take(parallel::max_over(gpts.size(),
                                [&](std::size_t i) {
                                  const Point& u = gpts[i];
                                  const Point Rv = R(u);
                                  const auto F0 = field_strength(g, u);
                                  const auto F1 = field_strength(gr, u);
                                  double d = 0.0;
                                  for (std::size_t a = 0; a < 3; ++a)
                                    for (std::size_t mn = 0; mn < m_dim * m_dim; ++mn) {
                                      double s = 0.0;
                                      for (std::size_t b = 0; b < 3; ++b) s += Rv[b * 3 + a] * F0[b * m_dim * m_dim + mn];
                                      d = std::max(d, std::abs(s - F1[a * m_dim * m_dim + mn]));
                                    }
                                  if (action) {
                                    const auto T0 = anchor_residual(g, u);
                                    const auto T1 = anchor_residual(gr, u);
                                    for (std::size_t a = 0; a < 3; ++a)
                                      for (std::size_t mu = 0; mu < m_dim; ++mu) {
                                        double s = 0.0;
                                        for (std::size_t b = 0; b < 3; ++b) s += Rv[b * 3 + a] * T0[b * m_dim + mu];
                                        d = std::max(d, std::abs(s - T1[a * m_dim + mu]));
                                      }
                                  }
                                  return d;
                                }),
             gpts);
    }
    cs.add(check_max("adjoint_covariance", w.value, dflt::kAdjointTol, w.at));
    extra["adjoint_grid"] = dflt::kAdjointGrid;
    extra["adjoint_rotations"] = dflt::kAdjointFields;
  }
  if (cs.list.empty()) throw ConfigError(cfg.origin + ": gauge-flow has nothing to check for this model");
  return finish("gauge-flow", cfg, std::move(cs), std::move(extra));
}

SuiteResult covariance(const ModelConfig& cfg, const SuiteOptions& o) {
  const LieAlgebroid& A = need_algebroid(cfg, "covariance");
  const std::uint64_t seed = pick(o.seed, cfg.seed, dflt::kSeed);
  // A random field: it violates the anchor condition and is not flat.
  const GaugeField g = random_gauge_field(A, dflt::kSourceDim, seed, dflt::kCovAmplitude);
  CovarianceOptions co;
  co.times.assign(std::begin(dflt::kCovTimes), std::end(dflt::kCovTimes));
  co.steps = dflt::kCovSteps;
  co.points = pick(o.points, cfg.points, dflt::kCovPoints);
  co.seed = seed;
  const CovarianceReport rep = covariance_check(g, random_section(A, seed + 1, dflt::kFlowAmplitude),
                                                random_oneform(A, seed + 2), random_function(A, seed + 3), co);
  const auto pts = sample_points(g.source, co.points, seed);
  const double anchor = parallel::max_over(pts.size(), [&](std::size_t i) { return max_abs(anchor_residual(g, pts[i])); }).value;

  Checks cs;
  const double last = rep.residual.back();
  if (last <= dflt::kExactFloor) {
    cs.add(check_max("exact_invariance", *std::max_element(rep.residual.begin(), rep.residual.end()), dflt::kExactFloor));
  } else {
    for (std::size_t i = 0; i < rep.ratios.size(); ++i)
      cs.add(check_range("halving_ratio_" + std::to_string(i + 1), rep.ratios[i], dflt::kRatioLo, dflt::kRatioHi));
  }
  Json extra;
  extra["times"] = rep.times;
  extra["residual"] = rep.residual;
  extra["residual_function"] = rep.residual_function;
  extra["residual_oneform"] = rep.residual_oneform;
  extra["ratios"] = rep.ratios;
  extra["orders"] = rep.orders;
  extra["field_anchor_residual"] = anchor;
  return finish("covariance", cfg, std::move(cs), std::move(extra));
}

double abelian_invariant_defect(std::uint64_t seed) {
  const LieAlgebroid B = from_lie_algebra({0.0}, std::nullopt, {}, "abelian");
  const std::size_t N = dflt::kWeinsteinIntervals;
  const APath p = integrate_base(B, random_trig_map(1, 1, seed), Point{0.0}, N);
  const HomotopyFlowResult fl = homotopy_flow(p, random_homotopy(1, seed + 1), dflt::kWeinsteinSteps);
  double s0 = 0.0, s1 = 0.0;
  for (std::size_t k = 0; k <= N; ++k) {
    const double w = (k == 0 || k == N) ? 0.5 : 1.0;
    s0 += w * p.a[k][0];
    s1 += w * fl.path.a[k][0];
  }
  return std::abs(s1 - s0) / static_cast<double>(N);
}

SuiteResult weinstein(const ModelConfig& cfg, const SuiteOptions& o) {
  const LieAlgebroid& A = need_algebroid(cfg, "weinstein");
  if (A.kind() != AlgebroidKind::Action || A.generators().size() != A.rank())
    throw ConfigError(cfg.origin + ": weinstein needs an action algebroid with matrix generators");
  const std::uint64_t seed = pick(o.seed, cfg.seed, dflt::kSeed);

  WeinsteinOptions wo;
  wo.paths = dflt::kWeinsteinPaths;
  wo.homotopies = dflt::kWeinsteinHomotopies;
  wo.intervals = dflt::kWeinsteinIntervals;
  wo.steps = dflt::kWeinsteinSteps;
  wo.seed = seed;
  WeinsteinReport rep = weinstein_experiment(A, wo);

  TrigSpec spec;
  spec.amplitude = 2.0;
  spec.frequency = 3.0;
  const SmoothMap a = random_trig_map(1, A.rank(), seed + 1, spec);
  Point x0 = base_center(A);
  SeededRng rng(seed + 2);
  for (std::size_t j = 0; j < x0.size(); ++j) {
    const auto& iv = A.base().box()[j];
    x0[j] += rng.uniform(-0.2, 0.2) * (iv.hi - iv.lo);
  }
  const auto rk = integration_orders(A, a, x0, {16, 32, 64});
  const auto res = residual_orders(A, a, x0, {32, 64, 128});

  Checks cs;
  for (std::size_t i = 0; i < rk.size(); ++i)
    cs.add(check_range("rk_order_" + std::to_string(i + 1), rk[i], dflt::kOrderLo, dflt::kOrderHi));
  for (std::size_t i = 0; i < res.size(); ++i)
    cs.add(check_range("residual_order_" + std::to_string(i + 1), res[i], dflt::kOrderLo, dflt::kOrderHi));
  cs.add(check_max("holonomy_consistency", rep.max_consistency, dflt::kConsistencyTol));
  cs.add(check_max("holonomy_orthogonality", rep.max_orthogonality, dflt::kOrthogonalityTol));
  cs.add(check_max("holonomy_drift", rep.max_holonomy_drift, dflt::kDriftTol));
  cs.add(check_max("endpoint_drift", rep.max_endpoint_drift, dflt::kDriftTol));
  cs.add(check_max("flatness_after_flow", rep.max_flatness, dflt::kAPathFlowTol));
  cs.add(check_min("class_separation", rep.min_separation, dflt::kSeparationMin));
  cs.add(check_max("abelian_invariant", abelian_invariant_defect(seed + 3), dflt::kAbelianTol));

  Json extra;
  extra["paths"] = wo.paths;
  extra["homotopies"] = wo.homotopies;
  extra["intervals"] = wo.intervals;
  extra["unprojected_drift"] = rep.max_unprojected_drift;
  Json trials = Json::array();
  for (const auto& t : rep.trials) {
    Json j;
    j["path"] = t.path;
    j["homotopy"] = t.homotopy;
    j["holonomy_drift"] = t.holonomy_drift;
    j["endpoint_drift"] = t.endpoint_drift;
    j["unprojected_drift"] = t.unprojected_drift;
    j["flatness_after"] = t.flatness_after;
    trials.push_back(std::move(j));
  }
  extra["trials"] = std::move(trials);
  SuiteResult r = finish("weinstein", cfg, std::move(cs), std::move(extra));
  r.paths = std::move(rep.sample_paths);
  return r;
}

// Exhaustive checks of one bundle; counts are accumulated under `prefix`.
struct BundleTally {
  std::size_t principality = 0, division = 0, cocycle = 0, isomorphism = 0, bundles = 0;
};

void tally_bundle(BundleTally& t, const fin::FinitePGB& P, std::uint64_t seed) {
  const fin::PrincipalityReport pr = fin::validate_principality(P);
  t.principality += pr.action_violations.size() + pr.failures.size() + (pr.projection_surjective ? 0 : 1);
  const fin::DivisionReport dr = fin::check_division_identities(P);
  t.division += dr.unit_failures + dr.inverse_failures + dr.equivariance_failures + dr.endpoint_failures +
                dr.transport_failures + dr.division_errors;
  if (pr.principal()) {
    const fin::SectionFamily fam = fin::random_section_family(P, dflt::kCoverPieces, seed);
    const fin::CocycleReport cr = fin::check_cocycle(P, fam, fin::transition_cocycle(P, fam));
    t.cocycle += cr.cocycle_failures + cr.section_failures + cr.equivariance_failures;
  }
  ++t.bundles;
}

void add_tally(Checks& cs, const std::string& prefix, const BundleTally& t, bool iso) {
  cs.add(check_count(prefix + ".principality", t.principality));
  cs.add(check_count(prefix + ".division_identities", t.division));
  cs.add(check_count(prefix + ".cocycle", t.cocycle));
  if (iso) cs.add(check_count(prefix + ".section_isomorphism", t.isomorphism));
}

void groupoid_battery(Checks& cs, Json& info, const fin::FiniteGroupoid& G, std::uint64_t seed) {
  const fin::GroupoidReport gr = fin::validate_groupoid(G);
  cs.add(check_count(G.name + ".groupoid_axioms", gr.violations.size()));
  Json j;
  j["name"] = G.name;
  j["objects"] = G.num_objects();
  j["arrows"] = G.num_arrows();
  j["checked_triples"] = gr.checked_triples;
  info.push_back(std::move(j));
  if (!gr.valid()) return;
  BundleTally unit;
  tally_bundle(unit, fin::unit_bundle(G), seed);
  add_tally(cs, G.name + ".unit_bundle", unit, false);
  // A pullback of the unit bundle over a larger base.
  SeededRng rng(seed);
  std::vector<int> f(5);
  for (auto& v : f) v = static_cast<int>(rng.next() % G.num_objects());
  BundleTally pb;
  tally_bundle(pb, fin::relabeled(fin::pullback_trivial_bundle(G, f), seed + 1), seed + 2);
  add_tally(cs, G.name + ".pullback_bundle", pb, false);
}

SuiteResult finite_groupoid(const ModelConfig& cfg, const SuiteOptions& o) {
  const std::uint64_t seed = pick(o.seed, cfg.seed, dflt::kSeed);
  Checks cs;
  Json info = Json::array();
  Json extra;
  if (!cfg.groupoid_file.empty()) {
    std::ifstream in(cfg.groupoid_file);
    if (!in) throw ConfigError(cfg.groupoid_file + ": cannot open groupoid file");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(cfg.groupoid_file + ": byte " + std::to_string(e.byte) + ": " + e.what());
    }
    try {
      if (j.contains("total")) {
        const fin::FinitePGB P = fin::bundle_from_json(j);
        groupoid_battery(cs, info, P.G, seed);
        BundleTally t;
        tally_bundle(t, P, seed);
        add_tally(cs, P.name, t, false);
      } else {
        groupoid_battery(cs, info, fin::groupoid_from_json(j), seed);
      }
    } catch (const std::invalid_argument& e) {
      throw ConfigError(cfg.groupoid_file + ": " + e.what());
    }
  } else if (cfg.groupoid == "pair4") {
    groupoid_battery(cs, info, fin::pair_groupoid(4), seed);
  } else if (cfg.groupoid == "z3") {
    groupoid_battery(cs, info, fin::translation_groupoid(3), seed);
  } else if (cfg.groupoid == "random") {
    BundleTally t;
    for (std::size_t k = 0; k < dflt::kRandomBundles; ++k) {
      const fin::RandomBundle rb = fin::random_principal_bundle(seed + k);
      const fin::GroupoidReport gr = fin::validate_groupoid(rb.P.G);
      t.principality += gr.violations.size();
      tally_bundle(t, rb.P, seed + 1000 + k);
      t.isomorphism += fin::section_isomorphism_defects(rb.P, rb.section);
    }
    add_tally(cs, "random_bundles", t, true);
    extra["bundles"] = t.bundles;
  } else {
    throw ConfigError(cfg.origin + ": finite-groupoid needs a groupoid (pair4, z3, random or a JSON file)");
  }
  extra["groupoids"] = std::move(info);
  return finish("finite-groupoid", cfg, std::move(cs), std::move(extra));
}

SuiteResult psm(const ModelConfig& cfg, const SuiteOptions& o) {
  PoissonStructure ps;
  if (cfg.poisson) {
    ps = *cfg.poisson;
  } else if (!cfg.psm_model.empty()) {
    ps = builtin_poisson(cfg.psm_model);
  } else {
    throw ConfigError(cfg.origin + ": psm needs a Poisson model");
  }
  const double tol = pick(o.tol, cfg.tol, dflt::kTwoRouteTol);
  const std::size_t npts = pick(o.points, cfg.points, dflt::kPsmPoints);
  const std::uint64_t seed = pick(o.seed, cfg.seed, dflt::kSeed);
  const std::size_t n = ps.dim();
  Checks cs;

  const PSMField phi = random_psm_field(ps, seed);
  const auto pts = sample_points(phi.source, npts, seed + 1);
  const ArgMax two = parallel::max_over(pts.size(), [&](std::size_t i) {
    const EOMResidual a = eom_residual(ps, phi, pts[i]);
    const EOMResidual b = eom_components(ps, phi, pts[i]);
    return std::max(max_diff(a.r1, b.r1), max_diff(a.r2, b.r2));
  });
  cs.add(check_max("two_route_agreement", two.value, tol, pts[static_cast<std::size_t>(two.index)]));
  if (ps.declared_poisson) cs.add(check_max("jacobiator", ps.measured_jacobiator, dflt::kJacobiatorTol));

  // Constant invertible bivectors: on-shell fields from eta = -pi^-1 dX.
  const auto cpts = sample_points(ps.chart, 20, seed + 2);
  const double dpi = parallel::max_over(cpts.size(), [&](std::size_t i) {
    return max_abs(jacobian(ps.pi, cpts[i]).data);
  }).value;
  if (dpi == 0.0 && n % 2 == 0) {
    TrigSpec spec;
    spec.amplitude = 1.0;
    const PSMField on = symplectic_on_shell(ps, Chart::cube(2, "u", -1.0, 1.0), random_trig_map(2, n, seed + 3, spec));
    const ArgMax r = parallel::max_over(pts.size(), [&](std::size_t i) {
      const EOMResidual e = eom_residual(ps, on, pts[i]);
      return std::max(max_abs(e.r1), max_abs(e.r2));
    });
    cs.add(check_max("on_shell_residual", r.value, dflt::kOnShellTol, pts[static_cast<std::size_t>(r.index)]));
    const GaugeField g = as_gauge_field(ps, on);
    TrigSpec es;
    es.amplitude = dflt::kFlowAmplitude;
    const GaugeField gt = flow_gauge(g, plain_parameter(g, random_trig_map(2, n, seed + 4, es)), dflt::kFlowTime,
                                     dflt::kFlowSteps);
    const FlatReport fr = is_flat(gt, dflt::kOnShellFlowTol, sample_points(gt.source, dflt::kFlowPoints, seed + 5));
    cs.add(check_max("on_shell_after_flow", std::max(fr.max_anchor, fr.max_field), dflt::kOnShellFlowTol));
  }
  Json extra;
  extra["poisson_model"] = ps.name;
  extra["declared_poisson"] = ps.declared_poisson;
  extra["jacobiator"] = ps.measured_jacobiator;
  extra["points"] = npts;
  return finish("psm", cfg, std::move(cs), std::move(extra));
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"validate-algebroid", "check-flat", "gauge-flow", "covariance", "weinstein", "finite-groupoid", "psm"};
}

bool is_suite(const std::string& name) {
  const auto names = suite_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

SuiteResult run_suite(const std::string& name, const ModelConfig& cfg, const SuiteOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  SuiteResult r;
  try {
    if (name == "validate-algebroid") r = validate_algebroid(cfg, opts);
    else if (name == "check-flat") r = check_flat(cfg, opts);
    else if (name == "gauge-flow") r = gauge_flow(cfg, opts);
    else if (name == "covariance") r = covariance(cfg, opts);
    else if (name == "weinstein") r = weinstein(cfg, opts);
    else if (name == "finite-groupoid") r = finite_groupoid(cfg, opts);
    else if (name == "psm") r = psm(cfg, opts);
    else throw ConfigError("unknown suite: " + name);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    // Numerical failures (a flow leaving the chart, a singular bivector) fail
    // the suite; they are reported rather than propagated.
    r = SuiteResult{};
    r.report["name"] = name;
    r.report["model"] = cfg.name;
    r.report["status"] = "error";
    r.report["checks"] = Json::array();
    r.report["error"] = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace nlg::cli

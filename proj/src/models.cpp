#include "nlg/models.hpp"

#include <algorithm>
#include <stdexcept>

#include "nlg/psm.hpp"
#include "nlg/so3.hpp"

namespace nlg {
namespace {

Chart source_cube(std::size_t m) { return Chart::cube(m, "u", -1.0, 1.0); }

double min_half_width(const Chart& c) {
  double h = 1e300;
  for (const auto& iv : c.box()) h = std::min(h, 0.5 * (iv.hi - iv.lo));
  return h;
}

GroupGauge random_rotation(std::size_t m, std::uint64_t seed) {
  return GroupGauge{so3::random_rotation_field(m, seed), so3_generators()};
}

GaugeField rotated_action_field(const LieAlgebroid& A, std::size_t m, std::uint64_t seed) {
  SeededRng rng(seed);
  Point x0(3);
  for (auto& v : x0) v = rng.uniform(-0.8, 0.8);
  return apply_group_gauge(zero_gauge_field(A, m, x0), random_rotation(m, rng.next()));
}

}  // namespace

std::vector<std::string> builtin_model_names() {
  return {"abelian", "so3", "tangent3", "so3_action", "sympl2", "su2", "quad", "nonpoisson"};
}

Point base_center(const LieAlgebroid& A) {
  Point c;
  for (const auto& iv : A.base().box()) c.push_back(0.5 * (iv.lo + iv.hi));
  return c;
}

BuiltinModel builtin_model(const std::string& name) {
  if (name == "abelian") {
    LieAlgebroid A = from_lie_algebra({0.0}, std::nullopt, {}, "abelian");
    auto flat = [A](std::size_t m, std::uint64_t seed) {
      // theta = d(phi) for a random scalar phi.
      const SmoothMap phi = random_trig_map(m, 1, seed);
      SmoothMap theta(m, m, [phi](auto u, auto y) {
        using T = typename decltype(y)::value_type;
        if constexpr (!liftable_v<T>) {
          throw_depth();
        } else {
          std::vector<T> v(1);
          value_and_jacobian<T>(phi, u, v, y);
        }
      });
      return make_gauge_field(source_cube(m), A, constant_map(m, base_center(A)), std::move(theta));
    };
    return BuiltinModel{name, A, true, flat};
  }
  if (name == "so3") {
    LieAlgebroid A = so3_algebra();
    auto flat = [A](std::size_t m, std::uint64_t seed) {
      return apply_group_gauge(zero_gauge_field(A, m), random_rotation(m, seed));
    };
    return BuiltinModel{name, A, true, flat};
  }
  if (name == "tangent3") {
    const Chart base = Chart::cube(3, "x", -2.0, 2.0);
    LieAlgebroid A = tangent_algebroid(base);
    auto flat = [A, base](std::size_t m, std::uint64_t seed) {
      TrigSpec spec;
      spec.amplitude = 1.0;
      return tangent_pushforward_field(source_cube(m), base, random_trig_map(m, 3, seed, spec));
    };
    return BuiltinModel{name, A, true, flat};
  }
  if (name == "so3_action") {
    LieAlgebroid A = so3_action_r3();
    auto flat = [A](std::size_t m, std::uint64_t seed) { return rotated_action_field(A, m, seed); };
    return BuiltinModel{name, A, true, flat};
  }
  if (name == "sympl2") {
    const PoissonStructure ps = builtin_poisson(name);
    LieAlgebroid A = cotangent_algebroid(ps.chart, ps.pi, "cotangent(sympl2)");
    auto flat = [ps](std::size_t m, std::uint64_t seed) {
      if (m != 2) throw std::invalid_argument("sympl2 flat fields live on a 2-dimensional source");
      TrigSpec spec;
      spec.amplitude = 1.0;
      const Chart src = source_cube(2);
      return as_gauge_field(ps, symplectic_on_shell(ps, src, random_trig_map(2, 2, seed, spec)));
    };
    return BuiltinModel{name, A, true, flat};
  }
  if (name == "su2") {
    const PoissonStructure ps = builtin_poisson(name);
    LieAlgebroid A = cotangent_algebroid(ps.chart, ps.pi, "cotangent(su2)");
    // The cotangent algebroid of su(2)* coincides with the action algebroid of
    // so(3) on R^3 (same anchor and structure constants in the dx_i frame).
    auto flat = [A](std::size_t m, std::uint64_t seed) {
      const GaugeField g = rotated_action_field(so3_action_r3(), m, seed);
      return make_gauge_field(g.source, A, g.f, g.theta);
    };
    return BuiltinModel{name, A, true, flat};
  }
  if (name == "quad" || name == "nonpoisson") {
    const PoissonStructure ps = builtin_poisson(name);
    return BuiltinModel{name, cotangent_algebroid(ps.chart, ps.pi, "cotangent(" + name + ")"),
                        ps.declared_poisson, {}};
  }
  throw std::invalid_argument("unknown model: " + name);
}

GaugeField random_gauge_field(const LieAlgebroid& A, std::size_t m, std::uint64_t seed, double amplitude) {
  SeededRng rng(seed);
  TrigSpec fs;
  fs.offset = base_center(A);
  fs.amplitude = 0.5 * min_half_width(A.base());
  TrigSpec ts;
  ts.amplitude = amplitude;
  return make_gauge_field(source_cube(m), A, random_trig_map(m, A.dim(), rng.next(), fs),
                          random_trig_map(m, A.rank() * m, rng.next(), ts));
}

GaugeField zero_gauge_field(const LieAlgebroid& A, std::size_t m, std::optional<Point> f0) {
  return make_gauge_field(source_cube(m), A, constant_map(m, f0 ? *f0 : base_center(A)),
                          constant_map(m, std::vector<double>(A.rank() * m, 0.0)));
}

SmoothMap random_function(const LieAlgebroid& A, std::uint64_t seed) {
  TrigSpec spec;
  spec.amplitude = 1.0;
  return random_trig_map(A.dim(), 1, seed, spec);
}

AForm random_oneform(const LieAlgebroid& A, std::uint64_t seed) {
  TrigSpec spec;
  spec.amplitude = 1.0;
  return AForm{1, random_trig_map(A.dim(), A.rank(), seed, spec)};
}

ASection random_section(const LieAlgebroid& A, std::uint64_t seed, double amplitude) {
  TrigSpec spec;
  spec.amplitude = amplitude;
  return random_trig_map(A.dim(), A.rank(), seed, spec);
}

}  // namespace nlg

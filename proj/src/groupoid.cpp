#include "nlg/groupoid.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "nlg/smooth.hpp"

namespace nlg::fin {
namespace {

std::string fmt(const char* what, std::initializer_list<int> ids) {
  std::ostringstream os;
  os << what;
  const char* sep = " (";
  for (int i : ids) {
    os << sep << i;
    sep = ", ";
  }
  os << ")";
  return os.str();
}

std::vector<int> permutation(std::size_t n, std::uint64_t seed) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  SeededRng rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.next() % i]);
  return perm;
}

FiniteGroupoid build(std::string name, std::vector<std::string> objects,
                     std::vector<std::string> arrows, std::vector<int> s, std::vector<int> t) {
  FiniteGroupoid G;
  G.name = std::move(name);
  G.objects = std::move(objects);
  G.arrows = std::move(arrows);
  G.s = std::move(s);
  G.t = std::move(t);
  G.inv.assign(G.num_arrows(), kNone);
  G.unit.assign(G.num_objects(), kNone);
  G.comp.assign(G.num_arrows() * G.num_arrows(), kNone);
  return G;
}

}  // namespace

std::vector<int> FiniteGroupoid::arrows_from(int x) const {
  std::vector<int> out;
  for (std::size_t g = 0; g < num_arrows(); ++g)
    if (s[g] == x) out.push_back(static_cast<int>(g));
  return out;
}

GroupoidReport validate_groupoid(const FiniteGroupoid& G) {
  GroupoidReport rep;
  const int na = static_cast<int>(G.num_arrows());
  const int no = static_cast<int>(G.num_objects());
  auto bad = [&](const char* what, std::initializer_list<int> ids) {
    rep.violations.push_back(fmt(what, ids));
  };
  if (G.s.size() != G.num_arrows() || G.t.size() != G.num_arrows() ||
      G.inv.size() != G.num_arrows() || G.unit.size() != G.num_objects() ||
      G.comp.size() != G.num_arrows() * G.num_arrows()) {
    rep.violations.push_back("table sizes inconsistent");
    return rep;
  }
  auto is_arrow = [&](int g) { return g >= 0 && g < na; };
  auto is_object = [&](int x) { return x >= 0 && x < no; };
  for (int g = 0; g < na; ++g) {
    if (!is_object(G.s[g]) || !is_object(G.t[g])) bad("source/target out of range", {g});
    if (!is_arrow(G.inv[g])) bad("inverse out of range", {g});
  }
  for (int x = 0; x < no; ++x) {
    const int e = G.unit[x];
    if (!is_arrow(e)) {
      bad("unit out of range", {x});
      continue;
    }
    if (G.s[e] != x || G.t[e] != x) bad("unit has wrong endpoints", {x});
  }
  if (!rep.violations.empty()) return rep;

  for (int g = 0; g < na; ++g)
    for (int h = 0; h < na; ++h) {
      const int gh = G.product(g, h);
      if (!G.composable(g, h)) {
        if (gh != kNone) bad("product defined on non-composable pair", {g, h});
        continue;
      }
      if (!is_arrow(gh)) {
        bad("product missing on composable pair", {g, h});
        continue;
      }
      if (G.s[gh] != G.s[g] || G.t[gh] != G.t[h]) bad("product has wrong endpoints", {g, h});
    }
  for (int g = 0; g < na; ++g) {
    if (G.product(G.unit[G.s[g]], g) != g) bad("left unit law", {g});
    if (G.product(g, G.unit[G.t[g]]) != g) bad("right unit law", {g});
    const int gi = G.inv[g];
    if (G.s[gi] != G.t[g] || G.t[gi] != G.s[g]) {
      bad("inverse has wrong endpoints", {g});
      continue;
    }
    if (G.product(g, gi) != G.unit[G.s[g]]) bad("g g^-1 is not the unit", {g});
    if (G.product(gi, g) != G.unit[G.t[g]]) bad("g^-1 g is not the unit", {g});
  }
  for (int g = 0; g < na; ++g)
    for (int h = 0; h < na; ++h) {
      if (!G.composable(g, h)) continue;
      const int gh = G.product(g, h);
      for (int k = 0; k < na; ++k) {
        if (!G.composable(h, k)) continue;
        ++rep.checked_triples;
        const int hk = G.product(h, k);
        const int left = is_arrow(gh) && G.composable(gh, k) ? G.product(gh, k) : kNone;
        const int right = is_arrow(hk) && G.composable(g, hk) ? G.product(g, hk) : kNone;
        if (left == kNone || left != right) {
          rep.associativity.push_back({g, h, k});
          bad("associativity", {g, h, k});
        }
      }
    }
  return rep;
}

FiniteGroupoid pair_groupoid(int n) {
  if (n < 1) throw std::invalid_argument("pair_groupoid needs at least one object");
  std::vector<std::string> objects, arrows;
  std::vector<int> s, t;
  for (int x = 0; x < n; ++x) objects.push_back(std::to_string(x + 1));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      arrows.push_back("(" + objects[x] + "," + objects[y] + ")");
      s.push_back(x);
      t.push_back(y);
    }
  FiniteGroupoid G = build("pair" + std::to_string(n), objects, arrows, s, t);
  auto id = [n](int x, int y) { return x * n + y; };
  for (int x = 0; x < n; ++x) {
    G.unit[x] = id(x, x);
    for (int y = 0; y < n; ++y) {
      G.inv[id(x, y)] = id(y, x);
      for (int z = 0; z < n; ++z) G.product_entry(id(x, y), id(y, z)) = id(x, z);
    }
  }
  return G;
}

FiniteGroupoid translation_groupoid(int n) {
  if (n < 1) throw std::invalid_argument("translation_groupoid needs n >= 1");
  std::vector<std::string> objects, arrows;
  std::vector<int> s, t;
  for (int x = 0; x < n; ++x) objects.push_back(std::to_string(x));
  for (int x = 0; x < n; ++x)
    for (int k = 0; k < n; ++k) {
      arrows.push_back("(" + std::to_string(x) + ",+" + std::to_string(k) + ")");
      s.push_back(x);
      t.push_back((x + k) % n);
    }
  FiniteGroupoid G = build("Z" + std::to_string(n) + "xZ" + std::to_string(n), objects, arrows, s, t);
  auto id = [n](int x, int k) { return x * n + ((k % n) + n) % n; };
  for (int x = 0; x < n; ++x) {
    G.unit[x] = id(x, 0);
    for (int k = 0; k < n; ++k) {
      const int y = (x + k) % n;
      G.inv[id(x, k)] = id(y, -k);
      for (int l = 0; l < n; ++l) G.product_entry(id(x, k), id(y, l)) = id(x, k + l);
    }
  }
  return G;
}

FiniteGroupoid transitive_groupoid(int n, int k) {
  if (n < 1 || k < 1) throw std::invalid_argument("transitive_groupoid needs n, k >= 1");
  std::vector<std::string> objects, arrows;
  std::vector<int> s, t;
  for (int x = 0; x < n; ++x) objects.push_back(std::to_string(x + 1));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int a = 0; a < k; ++a) {
        arrows.push_back("(" + objects[x] + "," + objects[y] + ";" + std::to_string(a) + ")");
        s.push_back(x);
        t.push_back(y);
      }
  FiniteGroupoid G = build("pair" + std::to_string(n) + "xZ" + std::to_string(k), objects, arrows, s, t);
  auto id = [n, k](int x, int y, int a) { return (x * n + y) * k + ((a % k) + k) % k; };
  for (int x = 0; x < n; ++x) {
    G.unit[x] = id(x, x, 0);
    for (int y = 0; y < n; ++y)
      for (int a = 0; a < k; ++a) {
        G.inv[id(x, y, a)] = id(y, x, -a);
        for (int z = 0; z < n; ++z)
          for (int b = 0; b < k; ++b) G.product_entry(id(x, y, a), id(y, z, b)) = id(x, z, a + b);
      }
  }
  return G;
}

FiniteGroupoid shuffled(const FiniteGroupoid& G, std::uint64_t seed) {
  const std::size_t na = G.num_arrows();
  const std::vector<int> perm = permutation(na, seed);  // old -> new
  FiniteGroupoid H = G;
  for (std::size_t g = 0; g < na; ++g) {
    const int ng = perm[g];
    H.arrows[ng] = G.arrows[g];
    H.s[ng] = G.s[g];
    H.t[ng] = G.t[g];
    H.inv[ng] = perm[G.inv[g]];
  }
  for (std::size_t x = 0; x < G.num_objects(); ++x) H.unit[x] = perm[G.unit[x]];
  for (std::size_t g = 0; g < na; ++g)
    for (std::size_t h = 0; h < na; ++h) {
      const int gh = G.comp[g * na + h];
      H.comp[static_cast<std::size_t>(perm[g]) * na + perm[h]] = gh == kNone ? kNone : perm[gh];
    }
  return H;
}

std::vector<int> FinitePGB::fiber(int m) const {
  std::vector<int> out;
  for (std::size_t p = 0; p < size(); ++p)
    if (proj[p] == m) out.push_back(static_cast<int>(p));
  return out;
}

bool PrincipalityReport::injective() const {
  return std::none_of(failures.begin(), failures.end(),
                      [](const PrincipalityFailure& f) { return !f.duplicated.empty(); });
}

bool PrincipalityReport::surjective() const {
  return std::none_of(failures.begin(), failures.end(), [](const PrincipalityFailure& f) {
    return !f.missing.empty() || !f.off_fiber.empty();
  });
}

PrincipalityReport validate_principality(const FinitePGB& P) {
  PrincipalityReport rep;
  const FiniteGroupoid& G = P.G;
  const int na = static_cast<int>(G.num_arrows());
  const int np = static_cast<int>(P.size());
  auto bad = [&](const char* what, std::initializer_list<int> ids) {
    rep.action_violations.push_back(fmt(what, ids));
  };
  std::vector<bool> covered(P.base.size(), false);
  for (int p = 0; p < np; ++p) {
    if (P.proj[p] < 0 || P.proj[p] >= static_cast<int>(P.base.size())) {
      bad("projection out of range", {p});
      continue;
    }
    covered[P.proj[p]] = true;
  }
  rep.projection_surjective = std::all_of(covered.begin(), covered.end(), [](bool b) { return b; });
  if (!rep.action_violations.empty()) return rep;

  auto in_range = [np](int q) { return q >= 0 && q < np; };
  for (int p = 0; p < np; ++p)
    for (int g = 0; g < na; ++g) {
      const int pg = P.action(p, g);
      if (P.moment[p] != G.s[g]) {
        if (pg != kNone) bad("action defined with eps(p) != s(g)", {p, g});
        continue;
      }
      if (!in_range(pg)) {
        bad("action missing", {p, g});
        continue;
      }
      if (P.moment[pg] != G.t[g]) bad("eps(pg) != t(g)", {p, g});
    }
  for (int p = 0; p < np; ++p) {
    if (P.action(p, G.unit[P.moment[p]]) != p) bad("p 1 != p", {p});
    for (int g = 0; g < na; ++g) {
      const int pg = P.action(p, g);
      if (!in_range(pg)) continue;
      for (int h = 0; h < na; ++h) {
        if (!G.composable(g, h)) continue;
        const int pgh = P.moment[pg] == G.s[h] ? P.action(pg, h) : kNone;
        if (pgh == kNone || P.action(p, G.product(g, h)) != pgh) bad("p(gh) != (pg)h", {p, g, h});
      }
    }
  }

  for (int p = 0; p < np; ++p) {
    PrincipalityFailure f;
    f.p = p;
    std::vector<int> hits(np, 0);
    for (int g = 0; g < na; ++g) {
      if (G.s[g] != P.moment[p]) continue;
      const int q = P.action(p, g);
      if (!in_range(q) || P.proj[q] != P.proj[p]) {
        f.off_fiber.push_back(g);
        continue;
      }
      ++hits[q];
    }
    for (int q : P.fiber(P.proj[p])) {
      if (hits[q] == 0) f.missing.push_back(q);
      if (hits[q] > 1) f.duplicated.push_back(q);
    }
    if (!f.missing.empty() || !f.duplicated.empty() || !f.off_fiber.empty())
      rep.failures.push_back(std::move(f));
  }
  return rep;
}

DivisionError::DivisionError(Kind kind, int p, int q)
    : std::runtime_error([&] {
        const char* what = kind == Kind::DifferentFibers ? "points lie in different fibers"
                           : kind == Kind::NoArrow       ? "no arrow carries p to q (not transitive)"
                                                         : "several arrows carry p to q (not free)";
        return fmt(what, {p, q});
      }()),
      kind_(kind) {}

int division(const FinitePGB& P, int p, int q) {
  if (P.proj[p] != P.proj[q]) throw DivisionError(DivisionError::Kind::DifferentFibers, p, q);
  int found = kNone;
  for (int g : P.G.arrows_from(P.moment[p])) {
    if (P.action(p, g) != q) continue;
    if (found != kNone) throw DivisionError(DivisionError::Kind::MultipleArrows, p, q);
    found = g;
  }
  if (found == kNone) throw DivisionError(DivisionError::Kind::NoArrow, p, q);
  return found;
}

DivisionReport check_division_identities(const FinitePGB& P) {
  DivisionReport rep;
  const FiniteGroupoid& G = P.G;
  const int np = static_cast<int>(P.size());
  auto safe_div = [&](int p, int q) {
    try {
      return division(P, p, q);
    } catch (const DivisionError&) {
      ++rep.division_errors;
      return kNone;
    }
  };
  for (int p = 0; p < np; ++p) {
    const int dpp = safe_div(p, p);
    if (dpp != kNone && dpp != G.unit[P.moment[p]]) ++rep.unit_failures;
    for (int q : P.fiber(P.proj[p])) {
      ++rep.pairs;
      const int d = safe_div(p, q);
      const int dq = safe_div(q, p);
      if (d == kNone || dq == kNone) continue;
      if (G.inv[d] != dq) ++rep.inverse_failures;
      if (G.s[d] != P.moment[p] || G.t[d] != P.moment[q]) ++rep.endpoint_failures;
      if (P.action(p, d) != q) ++rep.transport_failures;
      for (int g : G.arrows_from(P.moment[q])) {
        const int dg = safe_div(p, P.action(q, g));
        if (dg == kNone) continue;
        if (!G.composable(d, g) || G.product(d, g) != dg) ++rep.equivariance_failures;
      }
    }
  }
  return rep;
}

FinitePGB unit_bundle(const FiniteGroupoid& G) {
  FinitePGB P;
  P.name = "unit(" + G.name + ")";
  P.G = G;
  P.base = G.objects;
  P.total = G.arrows;
  P.proj = G.s;
  P.moment = G.t;
  P.act = G.comp;
  return P;
}

FinitePGB pullback_trivial_bundle(const FiniteGroupoid& G, const std::vector<int>& f,
                                  std::vector<std::string> base) {
  if (base.empty())
    for (std::size_t m = 0; m < f.size(); ++m) base.push_back("m" + std::to_string(m + 1));
  if (base.size() != f.size()) throw std::invalid_argument("pullback: base labels and f differ in size");
  FinitePGB P;
  P.G = G;
  P.name = "pullback(" + G.name + ")";
  P.base = std::move(base);
  const std::size_t na = G.num_arrows();
  std::vector<int> index(f.size() * na, kNone);
  for (std::size_t m = 0; m < f.size(); ++m) {
    if (f[m] < 0 || f[m] >= static_cast<int>(G.num_objects()))
      throw std::invalid_argument("pullback: f maps outside the objects");
    for (int g : G.arrows_from(f[m])) {
      index[m * na + g] = static_cast<int>(P.total.size());
      P.total.push_back("(" + P.base[m] + "," + G.arrows[g] + ")");
      P.proj.push_back(static_cast<int>(m));
      P.moment.push_back(G.t[g]);
    }
  }
  P.act.assign(P.size() * na, kNone);
  for (std::size_t m = 0; m < f.size(); ++m)
    for (int g : G.arrows_from(f[m]))
      for (std::size_t h = 0; h < na; ++h)
        if (G.composable(g, static_cast<int>(h)))
          P.action_entry(index[m * na + g], static_cast<int>(h)) =
              index[m * na + G.product(g, static_cast<int>(h))];
  return P;
}

FinitePGB relabeled(const FinitePGB& P, std::uint64_t seed) {
  const std::vector<int> perm = permutation(P.size(), seed);
  const std::size_t na = P.G.num_arrows();
  FinitePGB Q = P;
  for (std::size_t p = 0; p < P.size(); ++p) {
    Q.total[perm[p]] = P.total[p];
    Q.proj[perm[p]] = P.proj[p];
    Q.moment[perm[p]] = P.moment[p];
    for (std::size_t g = 0; g < na; ++g) {
      const int pg = P.act[p * na + g];
      Q.act[static_cast<std::size_t>(perm[p]) * na + g] = pg == kNone ? kNone : perm[pg];
    }
  }
  return Q;
}

RandomBundle random_principal_bundle(std::uint64_t seed) {
  SeededRng rng(seed);
  const int n = 1 + static_cast<int>(rng.next() % 3);
  const int k = 1 + static_cast<int>(rng.next() % 3);
  const FiniteGroupoid G = shuffled(transitive_groupoid(n, k), rng.next());
  const int nb = 2 + static_cast<int>(rng.next() % 4);
  std::vector<int> f(nb);
  for (auto& x : f) x = static_cast<int>(rng.next() % n);
  FinitePGB trivial = pullback_trivial_bundle(G, f);
  // A global section of the pullback bundle: m -> (m, g_m) with s(g_m) = f(m).
  std::vector<int> section(nb);
  for (int m = 0; m < nb; ++m) {
    const auto fib = trivial.fiber(m);
    section[m] = fib[rng.next() % fib.size()];
  }
  const std::uint64_t relabel_seed = rng.next();
  FinitePGB P = relabeled(trivial, relabel_seed);
  const std::vector<int> perm = permutation(trivial.size(), relabel_seed);
  for (auto& p : section) p = perm[p];
  P.name = "random" + std::to_string(seed);
  return RandomBundle{std::move(P), std::move(f), std::move(section)};
}

std::size_t section_isomorphism_defects(const FinitePGB& P, const std::vector<int>& sigma) {
  const FiniteGroupoid& G = P.G;
  std::size_t defects = 0;
  std::vector<int> f(sigma.size());
  for (std::size_t m = 0; m < sigma.size(); ++m) {
    if (P.proj[sigma[m]] != static_cast<int>(m)) ++defects;
    f[m] = P.moment[sigma[m]];
  }
  const FinitePGB T = pullback_trivial_bundle(G, f);
  // Elements of T are enumerated as (m, g) in order of m, then g.
  std::vector<int> phi(T.size(), kNone), hits(P.size(), 0);
  int q = 0;
  for (std::size_t m = 0; m < sigma.size(); ++m) {
    for (int g : G.arrows_from(f[m])) {
      const int image = P.action(sigma[m], g);
      phi[q] = image;
      if (image == kNone) {
        ++defects;
        ++q;
        continue;
      }
      ++hits[image];
      if (P.proj[image] != static_cast<int>(m)) ++defects;
      if (P.moment[image] != T.moment[q]) ++defects;
      ++q;
    }
  }
  for (int h : hits)
    if (h != 1) ++defects;
  for (std::size_t q = 0; q < T.size(); ++q)
    for (int h : G.arrows_from(T.moment[q])) {
      const int lhs = phi[T.action(static_cast<int>(q), h)];
      const int rhs = phi[q] == kNone ? kNone : P.action(phi[q], h);
      if (lhs == kNone || lhs != rhs) ++defects;
    }
  return defects;
}

void validate_sections(const FinitePGB& P, const SectionFamily& fam) {
  if (fam.cover.size() != fam.sections.size())
    throw std::invalid_argument("section family: cover and sections differ in size");
  for (std::size_t i = 0; i < fam.cover.size(); ++i) {
    if (fam.sections[i].size() != P.base.size())
      throw std::invalid_argument("section family: section table has wrong size");
    for (int m : fam.cover[i]) {
      const int p = fam.sections[i][m];
      if (p == kNone || P.proj[p] != m)
        throw std::invalid_argument(fmt("section family: not a section", {static_cast<int>(i), m}));
    }
  }
}

Cocycle transition_cocycle(const FinitePGB& P, const SectionFamily& fam) {
  validate_sections(P, fam);
  const std::size_t k = fam.cover.size();
  Cocycle phi(k, std::vector<std::vector<int>>(k, std::vector<int>(P.base.size(), kNone)));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      for (int m : fam.cover[i]) {
        const int sj = fam.sections[j][m];
        if (sj == kNone) continue;
        phi[j][i][m] = division(P, sj, fam.sections[i][m]);
      }
  return phi;
}

CocycleReport check_cocycle(const FinitePGB& P, const SectionFamily& fam, const Cocycle& phi) {
  CocycleReport rep;
  const FiniteGroupoid& G = P.G;
  const std::size_t k = fam.cover.size();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t m = 0; m < P.base.size(); ++m) {
        const int pij = phi[i][j][m];
        if (pij == kNone) continue;
        const int sigma_i = fam.sections[i][m];
        const int sigma_j = fam.sections[j][m];
        if (P.action(sigma_j, phi[j][i][m]) != sigma_i) ++rep.section_failures;
        for (std::size_t l = 0; l < k; ++l) {
          const int pjl = phi[j][l][m];
          const int pil = phi[i][l][m];
          if (pjl == kNone || pil == kNone) continue;
          ++rep.triple_points;
          if (!G.composable(pij, pjl) || G.product(pij, pjl) != pil) ++rep.cocycle_failures;
        }
      }
  for (std::size_t i = 0; i < k; ++i)
    for (int m : fam.cover[i]) {
      const int sigma = fam.sections[i][m];
      for (int g : G.arrows_from(P.moment[sigma]))
        for (int h : G.arrows_from(G.t[g]))
          if (P.action(sigma, G.product(g, h)) != P.action(P.action(sigma, g), h))
            ++rep.equivariance_failures;
    }
  return rep;
}

SectionFamily random_section_family(const FinitePGB& P, std::size_t pieces, std::uint64_t seed) {
  if (pieces == 0) throw std::invalid_argument("random_section_family needs a nonempty cover");
  SeededRng rng(seed);
  const std::size_t nb = P.base.size();
  SectionFamily fam;
  fam.cover.assign(pieces, {});
  fam.sections.assign(pieces, std::vector<int>(nb, kNone));
  for (std::size_t m = 0; m < nb; ++m) {
    // Each point lies in at least one piece; each piece takes it with probability 2/3.
    std::vector<bool> in(pieces, false);
    in[rng.next() % pieces] = true;
    for (std::size_t i = 0; i < pieces; ++i)
      if (rng.uniform() < 2.0 / 3.0) in[i] = true;
    const auto fib = P.fiber(static_cast<int>(m));
    for (std::size_t i = 0; i < pieces; ++i) {
      if (!in[i]) continue;
      fam.cover[i].push_back(static_cast<int>(m));
      fam.sections[i][m] = fib[rng.next() % fib.size()];
    }
  }
  return fam;
}

}  // namespace nlg::fin

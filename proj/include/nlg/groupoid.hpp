#pragma once

// Finite groupoids and principal groupoid bundles as explicit tables.
//
// Composition is diagrammatic: g*h is defined when t(g) == s(h), with
// s(gh) = s(g) and t(gh) = t(h). A bundle P -> M carries a right action
// p*g defined when eps(p) == s(g).

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nlg::fin {

inline constexpr int kNone = -1;

struct FiniteGroupoid {
  std::string name;
  std::vector<std::string> objects;
  std::vector<std::string> arrows;  // labels, one per arrow
  std::vector<int> s, t, inv;       // per arrow
  std::vector<int> unit;            // per object
  std::vector<int> comp;            // arrows x arrows, kNone where not composable

  std::size_t num_objects() const { return objects.size(); }
  std::size_t num_arrows() const { return arrows.size(); }
  int product(int g, int h) const { return comp[static_cast<std::size_t>(g) * num_arrows() + h]; }
  int& product_entry(int g, int h) { return comp[static_cast<std::size_t>(g) * num_arrows() + h]; }
  bool composable(int g, int h) const { return t[g] == s[h]; }
  /// Arrows with the given source.
  std::vector<int> arrows_from(int x) const;
};

struct GroupoidReport {
  std::vector<std::string> violations;          // every failed axiom instance, human readable
  std::vector<std::array<int, 3>> associativity;  // triples (g, h, k) with (gh)k != g(hk)
  std::size_t checked_triples = 0;
  bool valid() const { return violations.empty(); }
};

GroupoidReport validate_groupoid(const FiniteGroupoid& G);

/// Pair groupoid over n objects: arrows (x, y), (x, y)(y, z) = (x, z).
FiniteGroupoid pair_groupoid(int n);
/// Action groupoid Z_n x Z_n for translation: arrow (x, k) from x to x + k.
FiniteGroupoid translation_groupoid(int n);
/// Transitive groupoid over n objects with cyclic isotropy Z_k:
/// arrows (x, y, a), (x, y, a)(y, z, b) = (x, z, a + b).
FiniteGroupoid transitive_groupoid(int n, int k);
/// Copy of G with arrows renumbered by a seeded permutation.
FiniteGroupoid shuffled(const FiniteGroupoid& G, std::uint64_t seed);

struct FinitePGB {
  std::string name;
  FiniteGroupoid G;
  std::vector<std::string> base;
  std::vector<std::string> total;
  std::vector<int> proj;    // per element of P
  std::vector<int> moment;  // per element of P
  std::vector<int> act;     // |P| x |G|, kNone where eps(p) != s(g)

  std::size_t size() const { return total.size(); }
  int action(int p, int g) const { return act[static_cast<std::size_t>(p) * G.num_arrows() + g]; }
  int& action_entry(int p, int g) { return act[static_cast<std::size_t>(p) * G.num_arrows() + g]; }
  std::vector<int> fiber(int m) const;
};

/// A bundle element whose action map g -> p*g (over arrows with s(g) = eps(p))
/// is not a bijection onto the fiber of p.
struct PrincipalityFailure {
  int p = kNone;
  std::vector<int> missing;     // fiber elements not of the form p*g
  std::vector<int> duplicated;  // fiber elements hit more than once
  std::vector<int> off_fiber;   // arrows g with p*g outside the fiber of p
};

struct PrincipalityReport {
  std::vector<std::string> action_violations;  // eps(pg) = t(g), p 1 = p, p(gh) = (pg)h, table domain
  std::vector<PrincipalityFailure> failures;
  bool projection_surjective = true;
  bool injective() const;
  bool surjective() const;
  bool principal() const {
    return action_violations.empty() && failures.empty() && projection_surjective;
  }
};

PrincipalityReport validate_principality(const FinitePGB& P);

class DivisionError : public std::runtime_error {
 public:
  enum class Kind { DifferentFibers, NoArrow, MultipleArrows };
  DivisionError(Kind kind, int p, int q);
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Unique g with s(g) = eps(p) and p*g = q, found by exhaustive search.
int division(const FinitePGB& P, int p, int q);

/// Exhaustive check of the division-map identities.
struct DivisionReport {
  std::size_t pairs = 0;
  std::size_t unit_failures = 0;         // d(p,p) = 1_eps(p)
  std::size_t inverse_failures = 0;      // d(p,q)^-1 = d(q,p)
  std::size_t equivariance_failures = 0; // d(p,qg) = d(p,q) g
  std::size_t endpoint_failures = 0;     // s d(p,q) = eps(p), t d(p,q) = eps(q)
  std::size_t transport_failures = 0;    // p d(p,q) = q
  std::size_t division_errors = 0;
  bool ok() const {
    return unit_failures + inverse_failures + equivariance_failures + endpoint_failures +
               transport_failures + division_errors ==
           0;
  }
};

DivisionReport check_division_identities(const FinitePGB& P);

/// P = G, pi = s, eps = t, action by composition.
FinitePGB unit_bundle(const FiniteGroupoid& G);
/// f*U_G = {(m, g) : f(m) = s(g)}, eps(m, g) = t(g), (m, g) h = (m, gh).
FinitePGB pullback_trivial_bundle(const FiniteGroupoid& G, const std::vector<int>& f,
                                  std::vector<std::string> base = {});
/// Copy of P with total-space elements renumbered by a seeded permutation.
FinitePGB relabeled(const FinitePGB& P, std::uint64_t seed);

/// Seeded principal bundle with a global section: a pullback trivial bundle
/// of a random transitive groupoid, relabeled. Returns the bundle, the base
/// map f and a global section.
struct RandomBundle {
  FinitePGB P;
  std::vector<int> f;
  std::vector<int> section;
};
RandomBundle random_principal_bundle(std::uint64_t seed);

/// Checks that (m, g) -> sigma(m) g is an isomorphism from f*U_G onto P
/// (bijective, fiber and moment preserving, equivariant), f = eps o sigma.
/// Returns the number of failed conditions.
std::size_t section_isomorphism_defects(const FinitePGB& P, const std::vector<int>& sigma);

struct SectionFamily {
  std::vector<std::vector<int>> cover;     // subsets U_i of the base
  std::vector<std::vector<int>> sections;  // sigma_i: base -> P, kNone outside U_i
};

/// Throws std::invalid_argument when a sigma_i is not a section on U_i.
void validate_sections(const FinitePGB& P, const SectionFamily& fam);

/// phi[j][i][m] = d(sigma_j(m), sigma_i(m)) on U_i n U_j, kNone elsewhere.
using Cocycle = std::vector<std::vector<std::vector<int>>>;
Cocycle transition_cocycle(const FinitePGB& P, const SectionFamily& fam);

struct CocycleReport {
  std::size_t triple_points = 0;
  std::size_t cocycle_failures = 0;      // phi_ij phi_jk = phi_ik
  std::size_t section_failures = 0;      // sigma_i = sigma_j phi_ji
  std::size_t equivariance_failures = 0; // Phi_i(m, gh) = Phi_i(m, g) h
  bool ok() const { return cocycle_failures + section_failures + equivariance_failures == 0; }
};

CocycleReport check_cocycle(const FinitePGB& P, const SectionFamily& fam, const Cocycle& phi);

/// Random cover of the base by `pieces` subsets (overlapping, union = base)
/// with random sections on each.
SectionFamily random_section_family(const FinitePGB& P, std::size_t pieces, std::uint64_t seed);

}  // namespace nlg::fin

#pragma once

#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "npi/ice.hpp"

namespace npi {

/// chi = OR of atoms; no atoms means `false`.
struct DisjunctionConstraint {
  HoleId hole;
  std::set<std::size_t> atoms;
  friend bool operator==(const DisjunctionConstraint &, const DisjunctionConstraint &) = default;
  friend auto operator<=>(const DisjunctionConstraint &, const DisjunctionConstraint &) = default;
};

/// eta = AND of atoms; no atoms means `true`.
struct ConjunctionConstraint {
  HoleId hole;
  std::set<std::size_t> atoms;
  friend bool operator==(const ConjunctionConstraint &, const ConjunctionConstraint &) = default;
  friend auto operator<=>(const ConjunctionConstraint &, const ConjunctionConstraint &) = default;
};

/// Rules out candidates that are both weaker than lhs and stronger than rhs.
/// The two sides may constrain different holes.
struct InductivityConstraint {
  ConjunctionConstraint lhs;
  DisjunctionConstraint rhs;
  friend bool operator==(const InductivityConstraint &, const InductivityConstraint &) = default;
  friend auto operator<=>(const InductivityConstraint &, const InductivityConstraint &) = default;
};

struct CDNPISample {
  std::set<DisjunctionConstraint> weakening;
  std::set<ConjunctionConstraint> strengthening;
  std::set<InductivityConstraint> inductivity;

  bool empty() const { return weakening.empty() && strengthening.empty() && inductivity.empty(); }
  std::size_t size() const { return weakening.size() + strengthening.size() + inductivity.size(); }
};

// Propositional entailment between a conjunction and a disjunction/conjunction
// of independent atoms.

/// |- gamma => chi  iff the atom sets intersect.
bool entails_conj_disj(const Conjunction &gamma, const DisjunctionConstraint &chi);
/// |- eta => gamma  iff atoms(gamma) is a subset of atoms(eta).
bool entails_conj_conj(const ConjunctionConstraint &eta, const Conjunction &gamma);

bool is_consistent(const ConjunctionMap &candidate, const CDNPISample &sample);

Valuation c_of(const ConjunctionConstraint &eta, const Universes &universes);
Valuation d_of(const DisjunctionConstraint &chi, const Universes &universes);
ICESample to_ice(const CDNPISample &sample, const Universes &universes);

/// All per-hole conjunction maps consistent with `sample`, by enumeration.
/// Throws when the summed universe size exceeds `max_total` (default 20).
std::vector<ConjunctionMap> brute_force_consistent(const CDNPISample &sample, const Universes &universes,
                                                   std::size_t max_total = 20);

/// Enumerate every per-hole conjunction map over `universes` (used by the
/// brute-force oracles).
std::vector<ConjunctionMap> all_conjunction_maps(const Universes &universes, std::size_t max_total = 20);

// ---- text format ------------------------------------------------------------
//   W hole p3|p7
//   S hole p1&p2
//   I holeA p1&p2 -> holeB p3|p4
// An empty disjunction is written `false`, an empty conjunction `true`.

std::string to_line(const DisjunctionConstraint &chi);
std::string to_line(const ConjunctionConstraint &eta);
std::string to_line(const InductivityConstraint &ind);
void write_sample(std::ostream &os, const CDNPISample &sample);
CDNPISample read_sample(std::istream &is);

} // namespace npi

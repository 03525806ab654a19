#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "npi/ast.hpp"

namespace npi {

using HoleId = std::string;

/// Size of each hole's predicate universe.
using Universes = std::map<HoleId, std::size_t>;

class HoleMismatch : public Error {
public:
  using Error::Error;
};

/// Total truth assignment to one hole's predicate universe.
struct Valuation {
  HoleId hole;
  std::vector<bool> bits;

  bool operator[](std::size_t i) const { return bits[i]; }
  std::string str() const; // "(t,f,t)"
  friend bool operator==(const Valuation &, const Valuation &) = default;
  friend auto operator<=>(const Valuation &, const Valuation &) = default;
};

struct Implication {
  Valuation from;
  Valuation to; // may belong to a different hole
  friend bool operator==(const Implication &, const Implication &) = default;
  friend auto operator<=>(const Implication &, const Implication &) = default;
};

struct ICESample {
  std::set<Valuation> positives;
  std::set<Valuation> negatives;
  std::set<Implication> implications;

  bool empty() const { return positives.empty() && negatives.empty() && implications.empty(); }
};

/// Conjunction of predicates of one hole; no atoms means `true`.
struct Conjunction {
  HoleId hole;
  std::set<std::size_t> atoms;

  std::string str() const; // "{0,3}"
  friend bool operator==(const Conjunction &, const Conjunction &) = default;
  friend auto operator<=>(const Conjunction &, const Conjunction &) = default;
};

using ConjunctionMap = std::map<HoleId, Conjunction>;

/// True iff every atom of `c` is true under `v`.
bool satisfies(const Valuation &v, const Conjunction &c);

/// Throws if a valuation is not total over its declared hole universe.
void check_sample(const ICESample &sample, const Universes &universes);

/// Consistency by direct valuation semantics.
bool ice_consistent(const ConjunctionMap &candidate, const ICESample &sample);

/// Houdini as a passive ICE learner: the unique strongest per-hole
/// conjunction consistent with `sample`, or nullopt when no conjunction is
/// consistent (some negative satisfies the positive/implication fixpoint).
std::optional<ConjunctionMap> houdini_passive(const ICESample &sample, const Universes &universes);

Conjunction full_conjunction(const HoleId &hole, std::size_t n);

} // namespace npi

#pragma once

#include <map>
#include <vector>

#include "npi/ast.hpp"
#include "npi/ice.hpp"

namespace npi {

class UnboundHole : public Error {
public:
  using Error::Error;
};

/// Per-hole predicate universes, index-aligned with PredicateId::index.
using PredicateSets = std::map<HoleId, std::vector<Predicate>>;

Universes universes_of(const PredicateSets &preds);

/// Replace every HoleRef(h) by `replacement.at(h)`.
Expr substitute_holes(const Expr &f, const std::map<HoleId, Expr> &replacement);

/// Replace HoleRef(h) by the conjunction of the bodies of candidate(h)'s
/// predicates (empty conjunction: `true`).
Expr substitute_holes(const Expr &f, const ConjunctionMap &candidate, const PredicateSets &preds);

/// Negation normal form: implications and biconditionals eliminated,
/// negations pushed onto atoms, quantifiers flipped under negation.
/// Triggers survive only on universals that stay universal.
Expr nnf(const Expr &f);

/// Conjuncts of a top-level conjunction (a non-And formula is its own single conjunct).
std::vector<Expr> conjuncts(const Expr &f);

} // namespace npi

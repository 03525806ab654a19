#pragma once

#include <map>
#include <string>
#include <vector>

#include "npi/ast.hpp"

namespace npi {

/// Ground terms used to instantiate universals, grouped by sort.
struct GroundTermPool {
  std::map<Sort, ExprSet> terms;
  int depth = 0;

  const ExprSet &of(const Sort &s) const;
  std::size_t size() const;
  bool contains(const Expr &t) const;
};

/// A symbol introduced by skolemization.
struct SkolemDecl {
  std::string name;
  std::vector<Sort> args; // empty: constant
  Sort result;
};

struct Instance {
  Expr source;               // the universal that was instantiated
  std::vector<Expr> tuple;   // one term per binder
  Expr result;               // body[binders := tuple] (before nested instantiation)
};

struct ApproxResult {
  Expr qf;                         // quantifier-free, labels stripped
  std::vector<SkolemDecl> skolems;
  std::vector<Instance> instance_log;
};

/// Interpreted symbols the pool builder and printer must know about.
struct Signature {
  std::vector<FunDecl> functions;             // uninterpreted program functions
  std::vector<std::pair<std::string, Sort>> vars; // program variables
  std::vector<std::string> sorts;             // uninterpreted sort names
};

/// Replace every existential (formula must be in NNF) by a skolem constant,
/// or a skolem function over the universals in scope. Existentials under a
/// Labeled node are named `<label>!<binder>` (with `!<n>` on clashes), so the
/// same labeled subformula skolemizes identically wherever it is translated.
/// Unlabeled existentials get `sk0`, `sk1`, ... Identical existentials in
/// the same scope share one symbol.
Expr skolemize(const Expr &nnf_formula, std::vector<SkolemDecl> *decls = nullptr);

/// Depth 0: free constants of `f` (program variables, skolem and havoc
/// constants), integer literals of `f`, and 0. Each further step adds
/// g(t...) for every uninterpreted or skolem function g, a[t] for array
/// terms a, and t-1 for integer terms t, with arguments from the previous
/// step. Sorts with no term at all receive one placeholder constant.
GroundTermPool collect_terms(const Expr &f, int depth, const Signature &sig = {},
                             const std::vector<SkolemDecl> &skolems = {});

/// Ground (binder-free) subterms of `f`.
void ground_subterms(const Expr &f, ExprSet &out);

/// Terms that triggered universals may be matched against. Empty means
/// "no trigger base": triggered universals then get no instances.
using TriggerBase = ExprSet;

/// Replace each universal by the conjunction of its instances over `pool`
/// (innermost-out). A universal carrying a trigger is only instantiated
/// with tuples whose trigger instances all occur in `base`.
Expr instantiate(const Expr &f, const GroundTermPool &pool, const TriggerBase &base = {},
                 std::vector<Instance> *log = nullptr);

/// Saturate the ground terms of `f` under instantiation: start from the
/// ground subterms of `f`, and repeatedly add the ground subterms of every
/// instance admitted by the current base, until nothing changes.
TriggerBase saturate_base(const Expr &skolemized, const GroundTermPool &pool, int max_rounds = 16);

/// Per-triple grounding: pool and trigger base computed once (from a
/// reference formula) and reused for every translation of that triple.
struct GroundingContext {
  GroundTermPool pool;
  TriggerBase base;
  std::vector<SkolemDecl> skolems; // of the reference formula
};

/// Build a context from `reference` (a formula whose negation is being
/// refuted; typically the VC under the full predicate universes).
GroundingContext make_context(const Expr &reference, int depth, const Signature &sig);

/// qf = instantiate(skolemize(nnf(f))) under `ctx`, labels stripped.
ApproxResult approx_formula(const Expr &f, const GroundingContext &ctx);

/// approx of a VC formula: translate its negation.
ApproxResult approx(const Expr &vc_formula, const GroundingContext &ctx);
/// Standalone variant: the context is built from the VC itself.
ApproxResult approx(const Expr &vc_formula, int depth, const Signature &sig = {});

/// SMT-LIB 2 script asserting `qf` (declarations included, no check-sat).
std::string to_smtlib(const Expr &qf, const Signature &sig, const std::vector<SkolemDecl> &skolems);
/// SMT-LIB 2 rendering of a single term or formula.
std::string smt_term(const Expr &e);
/// Quote a symbol if it is not a simple SMT-LIB symbol.
std::string smt_symbol(const std::string &name);

} // namespace npi

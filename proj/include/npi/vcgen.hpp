#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "npi/ast.hpp"
#include "npi/logic.hpp"

namespace npi {

enum class TripleKind { PreToInv, InvToPost, InvToInv, Plain };

std::string to_string(TripleKind k);

/// {pre} body {post} over a loop-free body; holes appear as HoleRef.
struct HoareTriple {
  int id = 0; // position in cut_loops output
  Expr pre;
  std::vector<StmtPtr> body;
  Expr post;
  TripleKind kind = TripleKind::Plain;
  std::optional<HoleId> pre_hole;
  std::optional<HoleId> post_hole;

  std::string describe() const; // "#2 InvToInv L->R"
};

/// Inductive cut of the procedure at every annotation hole. Every statement
/// is covered by exactly one triple. Loops and cut points nested inside
/// if-branches are rejected.
std::vector<HoareTriple> cut_loops(const Program &p);

/// Triples in checking order: Plain, PreToInv, InvToInv, InvToPost (each in
/// program order).
std::vector<HoareTriple> checking_order(std::vector<HoareTriple> triples);

/// Weakest precondition for loop-free code. Havoc introduces a universal
/// over `x!h<stmt-id>`; asserts are wrapped in an `assert<stmt-id>` label.
Expr wp(const StmtPtr &s, const Expr &post);
Expr wp(const std::vector<StmtPtr> &body, const Expr &post);

/// Final value of every program variable after `body`, as terms over the
/// pre-state (branches merged with ite, havoc as `x!h<stmt-id>`).
std::map<std::string, Expr> symbolic_post_state(const Program &p, const std::vector<StmtPtr> &body);

/// Symbolic execution of a loop-free body from the identity state.
struct SymbolicRun {
  std::map<std::string, Expr> state;
  Expr path;
  std::vector<Expr> obligations;
};
SymbolicRun symbolic_run(const Program &p, const std::vector<StmtPtr> &body);

/// What to plug into a hole: a conjunction (the usual case) or a disjunction
/// (used when re-checking a weakening constraint).
struct HoleBinding {
  std::vector<std::size_t> atoms;
  bool disjunctive = false;
};
using HoleBindings = std::map<HoleId, HoleBinding>;

HoleBindings bindings_of(const ConjunctionMap &candidate);
/// Every predicate of every hole, conjunctively.
HoleBindings full_bindings(const PredicateSets &preds);

std::string predicate_label(const HoleId &hole, const Predicate &p, bool post_state);

/// Verification condition of a triple. The formula is equivalent to
/// (axioms && pre) ==> wp(body, post) but is built by symbolic execution so
/// that the postcondition occurs exactly once:
///   hyp ==> (obligation_1 && ... && (path ==> post[post_state])).
struct VC {
  Expr formula;
  HoareTriple origin;
  Expr hypotheses;                        // labeled axioms && pre
  Expr path;                              // path condition at the end of the body
  std::vector<Expr> obligations;          // labeled `path_i ==> assert_i` checks
  std::map<std::string, Expr> pre_state;  // identity
  std::map<std::string, Expr> post_state; // symbolic final state
};

/// `path ==> f[post_state]`: the obligation a post-state formula induces.
Expr post_obligation(const VC &vc, const Expr &f);

VC vc_of(const Program &p, const HoareTriple &t, const HoleBindings &bindings, const PredicateSets &preds);
/// Separate bindings for the pre-state and post-state occurrences of holes
/// (they differ when a constraint on a self-loop triple is re-checked).
VC vc_of(const Program &p, const HoareTriple &t, const HoleBindings &pre_bindings, const HoleBindings &post_bindings,
         const PredicateSets &preds);
VC vc_of(const Program &p, const HoareTriple &t, const ConjunctionMap &candidate, const PredicateSets &preds);

} // namespace npi

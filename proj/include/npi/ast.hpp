#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace npi {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class SortError : public Error {
public:
  using Error::Error;
};

enum class SortKind { Int, Bool, Array, Uninterpreted };

/// Arrays are fixed to Int -> Int.
struct Sort {
  SortKind kind = SortKind::Int;
  std::string name; // only for Uninterpreted

  static Sort integer() { return {SortKind::Int, {}}; }
  static Sort boolean() { return {SortKind::Bool, {}}; }
  static Sort array() { return {SortKind::Array, {}}; }
  static Sort uninterpreted(std::string n) {
    return {SortKind::Uninterpreted, std::move(n)};
  }

  bool is_int() const { return kind == SortKind::Int; }
  bool is_bool() const { return kind == SortKind::Bool; }
  bool is_array() const { return kind == SortKind::Array; }

  std::string str() const;
  friend bool operator==(const Sort &, const Sort &) = default;
  friend auto operator<=>(const Sort &, const Sort &) = default;
};

enum class Op {
  // terms
  Var,
  IntLit,
  Neg,
  Add,
  Sub,
  Mul, // coefficient * term
  App,
  Select,
  Store,
  Ite,
  // formulas
  BoolLit,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Forall,
  Exists,
  HoleRef,
  Labeled, // transparent wrapper that scopes skolem names
};

struct Node;
/// Terms and formulas share one immutable node type; formulas are
/// Bool-sorted expressions.
using Expr = std::shared_ptr<const Node>;

struct Binder {
  std::string name;
  Sort sort;
  friend bool operator==(const Binder &, const Binder &) = default;
};

struct Node {
  Op op;
  Sort sort;
  std::string name;    // Var, App, HoleRef, Labeled
  std::int64_t value = 0; // IntLit, BoolLit (0/1), Mul coefficient
  std::vector<Expr> kids;
  std::vector<Binder> binders; // Forall / Exists
  std::vector<Expr> triggers;  // Forall only; empty means "instantiate over the whole pool"
};

// ---- construction ---------------------------------------------------------

Expr mk_var(std::string name, Sort sort);
Expr mk_int(std::int64_t v);
Expr mk_bool(bool b);
Expr mk_true();
Expr mk_false();
Expr mk_neg(Expr t);
Expr mk_add(Expr a, Expr b);
Expr mk_sub(Expr a, Expr b);
Expr mk_mul(std::int64_t coeff, Expr t);
Expr mk_app(std::string fn, std::vector<Expr> args, Sort result);
Expr mk_select(Expr arr, Expr idx);
Expr mk_store(Expr arr, Expr idx, Expr val);
Expr mk_ite(Expr c, Expr t, Expr e);
Expr mk_cmp(Op op, Expr a, Expr b);
Expr mk_eq(Expr a, Expr b);
Expr mk_not(Expr f);
/// n-ary; flattens nested And, drops `true`, collapses to `false`.
Expr mk_and(std::vector<Expr> fs);
Expr mk_and(Expr a, Expr b);
/// n-ary; flattens nested Or, drops `false`, collapses to `true`.
Expr mk_or(std::vector<Expr> fs);
Expr mk_or(Expr a, Expr b);
Expr mk_implies(Expr a, Expr b);
Expr mk_iff(Expr a, Expr b);
Expr mk_forall(std::vector<Binder> bs, Expr body, std::vector<Expr> triggers = {});
Expr mk_exists(std::vector<Binder> bs, Expr body);
Expr mk_hole(std::string hole);
Expr mk_labeled(std::string label, Expr body);

/// Rebuild `e` with new children, keeping everything else.
Expr with_kids(const Expr &e, std::vector<Expr> kids);

// ---- queries --------------------------------------------------------------

bool is_formula(const Expr &e);
bool is_quantifier(const Expr &e);
bool is_comparison(Op op);
bool has_quantifier(const Expr &e);
bool has_hole(const Expr &e);
void collect_holes(const Expr &e, std::set<std::string> &out);

/// Free variables (Var nodes not captured by a binder), by name.
std::map<std::string, Sort> free_vars(const Expr &e);
/// Integer literals occurring anywhere in `e`.
void collect_int_literals(const Expr &e, std::set<std::int64_t> &out);

/// Structural total order; used for canonical sets and deterministic output.
int compare(const Expr &a, const Expr &b);
bool equal(const Expr &a, const Expr &b);
struct ExprLess {
  bool operator()(const Expr &a, const Expr &b) const { return compare(a, b) < 0; }
};
using ExprSet = std::set<Expr, ExprLess>;

/// Capture-avoiding simultaneous substitution of free variables.
Expr substitute(const Expr &e, const std::map<std::string, Expr> &sub);

/// Remove Labeled wrappers.
Expr strip_labels(const Expr &e);

// ---- program --------------------------------------------------------------

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

enum class StmtKind { Assign, ArrayAssign, Havoc, Assume, Assert, If, While, Cut };

struct Stmt {
  StmtKind kind;
  int id = 0;   // unique within a program, in source order
  int line = 0;
  std::string target; // Assign / ArrayAssign / Havoc
  Expr index;         // ArrayAssign
  Expr value;         // Assign / ArrayAssign
  Expr cond;          // Assume / Assert / If / While
  std::string hole;   // While / Cut
  std::vector<StmtPtr> then_body; // If then-branch, While body
  std::vector<StmtPtr> else_body;
};

struct FunDecl {
  std::string name;
  std::vector<Sort> args;
  Sort result;
};

struct PredicateId {
  std::string hole;
  std::size_t index = 0;
  friend bool operator==(const PredicateId &, const PredicateId &) = default;
  friend auto operator<=>(const PredicateId &, const PredicateId &) = default;
};

struct Predicate {
  PredicateId id;
  std::string name; // display name, e.g. "b1" or "p12"
  Expr body;
};

/// Predicate declared in the source file (`predicate ?H name : f;`).
struct PinnedPredicate {
  std::string hole;
  std::string name;
  Expr body;
};

struct Program {
  std::vector<std::string> sorts; // uninterpreted sort names
  std::vector<std::pair<std::string, Sort>> vars;
  std::vector<FunDecl> functions;
  std::vector<Expr> axioms;
  std::string proc_name;
  std::vector<Expr> requires_;
  std::vector<Expr> ensures;
  std::vector<StmtPtr> body;
  std::vector<std::string> holes; // in source order
  std::vector<PinnedPredicate> pinned;

  // `// key: value` pragmas found in comments (depth, oracle, ...).
  std::multimap<std::string, std::string> pragmas;

  std::optional<Sort> var_sort(const std::string &name) const;
  const FunDecl *function(const std::string &name) const;
};

} // namespace npi

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "npi/ast.hpp"
#include "npi/quant.hpp"

namespace npi {

class EvalError : public Error {
public:
  using Error::Error;
};

/// Parsed S-expression (SMT-LIB output).
struct SExpr {
  bool atom = true;
  std::string text; // atom text (quotes stripped)
  std::vector<SExpr> list;

  std::string str() const;
};

std::vector<SExpr> parse_sexprs(const std::string &text);

struct ArrayValue;

/// A value of Int, Bool, array or uninterpreted sort.
struct Value {
  enum class Kind { Int, Bool, Array, Elem } kind = Kind::Int;
  std::int64_t i = 0;
  bool b = false;
  std::shared_ptr<const ArrayValue> arr;
  std::string elem;

  static Value integer(std::int64_t v);
  static Value boolean(bool v);
  static Value element(std::string name);
  static Value array(std::shared_ptr<const ArrayValue> a);

  std::string str() const;
};

/// Interpretation of a symbol in a model: parameters and a body in SMT-LIB.
struct Definition {
  std::vector<std::string> params;
  SExpr body;
};

/// A model returned by the solver. Symbols without a definition evaluate to
/// a default value of their sort (0, false, the all-zero array, or the
/// placeholder element of the sort).
class Model {
public:
  Model() = default;
  /// Parse the response to (get-model).
  static Model parse(const std::string &text);

  void define(const std::string &name, Definition d);
  bool defines(const std::string &name) const;
  const std::map<std::string, Definition> &definitions() const { return defs_; }

  /// Evaluate a quantifier-free term or formula.
  Value eval(const Expr &e) const;
  bool holds(const Expr &f) const;

  /// Value of a constant / application of a model symbol.
  Value apply(const std::string &name, const std::vector<Value> &args, const Sort &result) const;
  /// Evaluate SMT-LIB text under this model (for tests and diagnostics).
  Value eval_smt(const SExpr &e) const;

  std::string str() const;

private:
  std::map<std::string, Definition> defs_;
  // Values of nullary definitions, computed on first use. Shared between
  // copies of the model; reset whenever a definition changes.
  mutable std::shared_ptr<std::map<std::string, Value>> constants_ = std::make_shared<std::map<std::string, Value>>();
};

Value default_value(const Sort &s);
bool values_equal(const Value &a, const Value &b);

enum class SolverOutcome { Proved, Refuted, EngineFailure };
std::string to_string(SolverOutcome o);

struct SolverResult {
  SolverOutcome outcome = SolverOutcome::EngineFailure;
  Model model;            // Refuted only
  std::string reason;     // EngineFailure only
  std::string transcript; // script sent and raw response
};

struct SolverConfig {
  std::string path;       // executable; empty: $NPI_SOLVER, then `z3` on PATH
  double timeout_s = 10.0;
};

/// Resolve the solver executable: explicit path, then $NPI_SOLVER, then z3.
std::string resolve_solver_path(const std::string &explicit_path);

/// Result of running a child process.
struct ProcessResult {
  int exit_code = -1;
  bool timed_out = false;
  std::string output; // stdout and stderr
};
ProcessResult run_process(const std::vector<std::string> &argv, const std::string &input, double timeout_s);

/// One solver process per query, spoken to in SMT-LIB 2 (QF_AUFLIA with
/// models). A returned model is checked against the query before it is
/// reported; a model that does not satisfy the query is an engine failure.
class SmtSolver {
public:
  explicit SmtSolver(SolverConfig cfg = {});

  SolverResult check(const Expr &qf, const Signature &sig, const std::vector<SkolemDecl> &skolems) const;
  SolverResult check_script(const std::string &declarations_and_asserts) const;

  const SolverConfig &config() const { return cfg_; }
  std::size_t queries() const { return queries_; }
  /// Satisfiable answers whose model was re-evaluated against the query.
  std::size_t models_checked() const { return models_checked_; }
  /// Of those, models that did not satisfy the query (reported as EngineFailure).
  std::size_t models_rejected() const { return models_rejected_; }

private:
  SolverConfig cfg_;
  mutable std::size_t queries_ = 0;
  mutable std::size_t models_checked_ = 0;
  mutable std::size_t models_rejected_ = 0;
};

} // namespace npi

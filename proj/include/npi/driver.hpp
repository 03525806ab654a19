#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "npi/cdnpi.hpp"
#include "npi/logic.hpp"
#include "npi/teacher.hpp"

namespace npi {

struct PredicateOptions {
  bool negation_closure = false;
  bool array_octagons = false; // also build octagons over array reads a[t]
};

/// Per-hole candidate predicates. A hole with pinned predicates uses exactly
/// those. Otherwise: conjuncts harvested from requires / ensures / asserts,
/// re-instantiated over every injective same-sort renaming of their program
/// variables; octagons +-x <= c and +-x +-y <= c over integer variables with
/// c ranging over the program's literals and 0; optionally octagons over
/// array reads; optionally the negation of every predicate. Duplicates (by
/// printed form) are dropped; order is deterministic.
PredicateSets gen_predicates(const Program &p, const PredicateOptions &opts = {});

/// `// oracle: ?H atom; atom` pragmas resolved against the predicate sets.
/// Returns nullopt when the program carries no oracle. Throws when an atom
/// is not among the hole's predicates.
std::optional<ConjunctionMap> resolve_oracle(const Program &p, const PredicateSets &preds);

/// `// depth: k` pragma, if present.
std::optional<int> pragma_depth(const Program &p);

enum class Outcome { Invariant, NoConsistentInvariant, Unprovable, RoundLimit, EngineFailure };
std::string to_string(Outcome o);
/// Process exit code for an outcome (0..4).
int exit_code(Outcome o);

struct SynthesisConfig {
  std::optional<int> depth;      // default: `// depth:` pragma, then 1
  std::optional<int> max_rounds; // default: sum of |P_h| + 1
  SolverConfig solver;
  PredicateOptions predicates;
  bool check_normality = false;  // re-check every emitted constraint
  std::ostream *trace = nullptr;
  std::ostream *dump_vcs = nullptr;
  std::ostream *dump_approx = nullptr;
};

/// A constraint in the order the teacher emitted it.
struct EmittedConstraint {
  int round = 0;
  HoareTriple triple;
  Constraint constraint;
};

struct SynthesisReport {
  std::string name;
  Outcome outcome = Outcome::EngineFailure;
  int rounds = 0;
  int max_rounds = 0;
  int depth = 1;
  PredicateSets predicates;
  std::size_t predicate_count = 0;
  std::optional<ConjunctionMap> invariant;
  std::size_t invariant_size = 0; // atoms over all holes
  double time_ms = 0;
  std::string detail;             // failure description
  TeacherVerdict final_verdict;   // re-validation of an Invariant, or the failing verdict
  CDNPISample sample;
  std::vector<ConjunctionMap> conjectures;
  std::vector<EmittedConstraint> constraints;
  std::optional<ConjunctionMap> oracle;
  std::size_t solver_queries = 0;
  std::size_t models_checked = 0;  // satisfiable answers re-evaluated against their query
  std::size_t models_rejected = 0; // of those, models that failed the query
  std::size_t constraints_rechecked = 0;
  std::vector<std::string> honesty_violations;
  std::vector<std::string> normality_violations;
  std::vector<std::string> progress_violations;

  /// Invariant rendered per hole with predicate text.
  std::string describe_invariant() const;
};

SynthesisReport synthesize(const Program &p, const SynthesisConfig &cfg, const std::string &name = "program");

/// Parse and synthesize; parse errors are reported as an exception.
SynthesisReport synthesize_file(const std::string &path, const SynthesisConfig &cfg);

struct SuiteRow {
  std::string name;
  std::size_t predicates = 0;
  int rounds = 0;
  std::size_t invariant_size = 0;
  double time_ms = 0;
  std::string outcome; // Outcome name, or "Error" for files that fail to load
  std::string detail;
};

/// Run every `.npl` file of `dir` (sorted by name). Per-file errors become
/// rows with outcome "Error"; the suite continues.
std::vector<SuiteRow> run_suite(const std::string &dir, const SynthesisConfig &cfg,
                                std::vector<SynthesisReport> *reports = nullptr);

SuiteRow to_row(const SynthesisReport &r);
std::string stats_json(const SuiteRow &row);
std::string stats_json(const std::vector<SuiteRow> &rows);
std::string stats_text(const std::vector<SuiteRow> &rows);

} // namespace npi

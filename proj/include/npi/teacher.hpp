#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "npi/cdnpi.hpp"
#include "npi/logic.hpp"
#include "npi/quant.hpp"
#include "npi/smt.hpp"
#include "npi/vcgen.hpp"

namespace npi {

/// Raised when a countermodel cannot be explained by the predicate values it
/// assigns (an internal consistency failure of the engine).
class EngineMismatch : public Error {
public:
  using Error::Error;
};

/// Values of every predicate of the triple's holes under a countermodel.
struct GhostReadout {
  std::optional<Valuation> pre;  // at the pre-state hole
  std::optional<Valuation> post; // at the post-state hole
};

using Constraint = std::variant<DisjunctionConstraint, ConjunctionConstraint, InductivityConstraint>;

std::string to_line(const Constraint &c);
void add_to(CDNPISample &sample, const Constraint &c);
/// Whether `candidate` already respects `c` (a rejected conjecture must not).
bool satisfies(const ConjunctionMap &candidate, const Constraint &c);

DisjunctionConstraint extract_weakening(const GhostReadout &r);
ConjunctionConstraint extract_strengthening(const GhostReadout &r);
InductivityConstraint extract_inductivity(const GhostReadout &r);

/// Evaluate each predicate's translation under `m`: hypothesis side over the
/// pre-state, obligation side over the symbolic post-state.
GhostReadout ghost_readout(const VC &vc, const Model &m, const PredicateSets &preds, const GroundingContext &ctx);

struct TeacherVerdict {
  enum class Kind { Verified, Rejected, PlainFailure, EngineFailure } kind = Kind::Verified;
  std::optional<Constraint> constraint; // Rejected
  std::optional<HoareTriple> triple;    // Rejected / PlainFailure / EngineFailure (when tied to a triple)
  GhostReadout readout;
  Model witness;
  std::string reason;     // EngineFailure / PlainFailure description
  std::string transcript; // solver transcript of the failing query
};

std::string to_string(TeacherVerdict::Kind k);

struct TeacherConfig {
  int depth = 1;
  SolverConfig solver;
  std::ostream *trace = nullptr;       // one line per triple check
  std::ostream *dump_vcs = nullptr;    // every VC before approximation
  std::ostream *dump_approx = nullptr; // every quantifier-free query in SMT-LIB
};

/// The verification engine for one program and fixed predicate universes.
/// Grounding (pool and trigger base) is computed from the VC being checked.
/// A constraint is re-checked under the grounding of the check that
/// produced it, so a countermodel of the original check is a countermodel
/// of the re-check.
class Teacher {
public:
  Teacher(Program program, PredicateSets preds, TeacherConfig cfg = {});

  /// Check every triple (Plain, PreToInv, InvToInv, InvToPost; program
  /// order within each kind) and report the first failure.
  TeacherVerdict check(const ConjunctionMap &candidate);

  /// Re-run the engine on the triple with the constraint's formulas in place
  /// of the holes; a normal engine answers Refuted. Constraints this teacher
  /// did not emit are grounded from their own verification condition.
  SolverOutcome recheck(const HoareTriple &t, const Constraint &c);

  const std::vector<HoareTriple> &triples() const { return triples_; }
  const PredicateSets &predicates() const { return preds_; }
  const Program &program() const { return program_; }
  const Signature &signature() const { return sig_; }
  std::size_t solver_queries() const { return solver_.queries(); }
  const SmtSolver &solver() const { return solver_; }

private:
  struct Check {
    SolverResult result;
    ApproxResult approx;
  };
  Check run(const VC &vc, const HoareTriple &t, const GroundingContext &ctx);
  std::string cache_key(const HoareTriple &t, const ConjunctionMap &candidate) const;

  Program program_;
  PredicateSets preds_;
  TeacherConfig cfg_;
  Signature sig_;
  SmtSolver solver_;
  std::vector<HoareTriple> triples_;
  std::map<std::string, GroundingContext> emitted_; // triple id + constraint line -> grounding
  std::map<std::string, bool> proved_;
};

/// One-shot convenience wrapper around Teacher::check.
TeacherVerdict check_conjecture(const Program &p, const ConjunctionMap &candidate, const PredicateSets &preds,
                                int depth, const SolverConfig &solver = {});

} // namespace npi

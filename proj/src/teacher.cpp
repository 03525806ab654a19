#include "npi/teacher.hpp"

#include <ostream>

#include "npi/syntax.hpp"

namespace npi {

// ---- constraints -----------------------------------------------------------------

std::string to_line(const Constraint &c) {
  return std::visit([](const auto &x) { return npi::to_line(x); }, c);
}

void add_to(CDNPISample &sample, const Constraint &c) {
  if (auto *w = std::get_if<DisjunctionConstraint>(&c))
    sample.weakening.insert(*w);
  else if (auto *s = std::get_if<ConjunctionConstraint>(&c))
    sample.strengthening.insert(*s);
  else
    sample.inductivity.insert(std::get<InductivityConstraint>(c));
}

bool satisfies(const ConjunctionMap &candidate, const Constraint &c) {
  CDNPISample one;
  add_to(one, c);
  return is_consistent(candidate, one);
}

namespace {

const Valuation &require_vals(const std::optional<Valuation> &v, const char *which) {
  if (!v)
    throw EngineMismatch(std::string("ghost readout has no ") + which + "-state valuation");
  return *v;
}

std::set<std::size_t> indices(const Valuation &v, bool value) {
  std::set<std::size_t> out;
  for (std::size_t i = 0; i < v.bits.size(); ++i)
    if (v.bits[i] == value)
      out.insert(i);
  return out;
}

bool all_true(const Valuation &v) {
  for (bool b : v.bits)
    if (!b)
      return false;
  return true;
}

} // namespace

DisjunctionConstraint extract_weakening(const GhostReadout &r) {
  const Valuation &post = require_vals(r.post, "post");
  if (all_true(post))
    throw EngineMismatch("every predicate holds at the post-state of a refuted triple");
  return DisjunctionConstraint{post.hole, indices(post, false)};
}

ConjunctionConstraint extract_strengthening(const GhostReadout &r) {
  const Valuation &pre = require_vals(r.pre, "pre");
  return ConjunctionConstraint{pre.hole, indices(pre, true)};
}

InductivityConstraint extract_inductivity(const GhostReadout &r) {
  return InductivityConstraint{extract_strengthening(r), extract_weakening(r)};
}

// ---- ghost readout ---------------------------------------------------------------

namespace {

bool holds_under(const Expr &f, const Model &m, const GroundingContext &ctx) {
  ApproxResult r = approx_formula(f, ctx);
  return m.holds(r.qf);
}

const std::vector<Predicate> &hole_preds(const PredicateSets &preds, const HoleId &h) {
  auto it = preds.find(h);
  if (it == preds.end())
    throw UnboundHole("no predicates for hole ?" + h);
  return it->second;
}

} // namespace

GhostReadout ghost_readout(const VC &vc, const Model &m, const PredicateSets &preds, const GroundingContext &ctx) {
  GhostReadout r;
  const HoareTriple &t = vc.origin;
  if (t.pre_hole) {
    Valuation v{*t.pre_hole, {}};
    for (const auto &p : hole_preds(preds, *t.pre_hole))
      v.bits.push_back(holds_under(mk_labeled(predicate_label(*t.pre_hole, p, false), p.body), m, ctx));
    r.pre = std::move(v);
  }
  if (t.post_hole) {
    Valuation v{*t.post_hole, {}};
    for (const auto &p : hole_preds(preds, *t.post_hole)) {
      Expr obligation = post_obligation(vc, mk_labeled(predicate_label(*t.post_hole, p, true), p.body));
      v.bits.push_back(!holds_under(mk_not(obligation), m, ctx));
    }
    r.post = std::move(v);
  }
  return r;
}

std::string to_string(TeacherVerdict::Kind k) {
  switch (k) {
  case TeacherVerdict::Kind::Verified:
    return "Verified";
  case TeacherVerdict::Kind::Rejected:
    return "Rejected";
  case TeacherVerdict::Kind::PlainFailure:
    return "PlainFailure";
  case TeacherVerdict::Kind::EngineFailure:
    return "EngineFailure";
  }
  return "?";
}

// ---- teacher ------------------------------------------------------------------------

Teacher::Teacher(Program program, PredicateSets preds, TeacherConfig cfg)
    : program_(std::move(program)), preds_(std::move(preds)), cfg_(std::move(cfg)),
      sig_{program_.functions, program_.vars, program_.sorts}, solver_(cfg_.solver) {
  triples_ = checking_order(cut_loops(program_));
  for (const auto &h : program_.holes)
    if (!preds_.count(h))
      throw UnboundHole("no predicates for hole ?" + h);
}

std::string Teacher::cache_key(const HoareTriple &t, const ConjunctionMap &candidate) const {
  std::string key = std::to_string(t.id);
  for (const auto &h : {t.pre_hole, t.post_hole})
    if (h)
      key += "|" + *h + candidate.at(*h).str();
  return key;
}

Teacher::Check Teacher::run(const VC &vc, const HoareTriple &t, const GroundingContext &ctx) {
  if (cfg_.dump_vcs)
    *cfg_.dump_vcs << "; VC " << t.describe() << "\n" << to_string(vc.formula) << "\n";
  Check c;
  c.approx = approx(vc.formula, ctx);
  if (cfg_.dump_approx)
    *cfg_.dump_approx << "; approx " << t.describe() << "\n" << to_smtlib(c.approx.qf, sig_, c.approx.skolems);
  c.result = solver_.check(c.approx.qf, sig_, c.approx.skolems);
  return c;
}

namespace {

bool some_assert_fails(const VC &vc, const Model &m, const GroundingContext &ctx) {
  for (const auto &o : vc.obligations)
    if (holds_under(mk_not(o), m, ctx))
      return true;
  return false;
}

} // namespace

TeacherVerdict Teacher::check(const ConjunctionMap &candidate) {
  for (const auto &t : triples_) {
    std::string key = cache_key(t, candidate);
    if (proved_.count(key)) {
      if (cfg_.trace)
        *cfg_.trace << "triple " << t.describe() << ": Proved (cached)\n";
      continue;
    }
    VC vc = vc_of(program_, t, candidate, preds_);
    GroundingContext ctx = make_context(vc.formula, cfg_.depth, sig_);
    Check c = run(vc, t, ctx);
    TeacherVerdict v;
    v.triple = t;
    v.transcript = c.result.transcript;
    switch (c.result.outcome) {
    case SolverOutcome::Proved:
      proved_[key] = true;
      if (cfg_.trace)
        *cfg_.trace << "triple " << t.describe() << ": Proved\n";
      continue;
    case SolverOutcome::EngineFailure:
      v.kind = TeacherVerdict::Kind::EngineFailure;
      v.reason = c.result.reason;
      break;
    case SolverOutcome::Refuted:
      v.witness = c.result.model;
      try {
        v.readout = ghost_readout(vc, v.witness, preds_, ctx);
        bool post_all_true = v.readout.post && all_true(*v.readout.post);
        switch (t.kind) {
        case TripleKind::Plain:
          v.kind = TeacherVerdict::Kind::PlainFailure;
          v.reason = "hole-free verification condition is not provable";
          break;
        case TripleKind::PreToInv:
          if (post_all_true && some_assert_fails(vc, v.witness, ctx)) {
            v.kind = TeacherVerdict::Kind::PlainFailure;
            v.reason = "an assertion before the first cut point is not provable";
          } else {
            v.kind = TeacherVerdict::Kind::Rejected;
            v.constraint = extract_weakening(v.readout);
          }
          break;
        case TripleKind::InvToPost:
          v.kind = TeacherVerdict::Kind::Rejected;
          v.constraint = extract_strengthening(v.readout);
          break;
        case TripleKind::InvToInv:
          v.kind = TeacherVerdict::Kind::Rejected;
          if (post_all_true && some_assert_fails(vc, v.witness, ctx))
            v.constraint = extract_strengthening(v.readout);
          else
            v.constraint = extract_inductivity(v.readout);
          break;
        }
        if (v.constraint && satisfies(candidate, *v.constraint))
          throw EngineMismatch("constraint " + to_line(*v.constraint) + " does not rule out the conjecture");
        if (v.constraint)
          emitted_[std::to_string(t.id) + "|" + to_line(*v.constraint)] = ctx;
      } catch (const Error &e) {
        v.kind = TeacherVerdict::Kind::EngineFailure;
        v.constraint.reset();
        v.reason = std::string("engine mismatch: ") + e.what();
      }
      break;
    }
    if (cfg_.trace) {
      *cfg_.trace << "triple " << t.describe() << ": " << to_string(c.result.outcome);
      if (v.constraint)
        *cfg_.trace << " " << to_line(*v.constraint);
      else if (!v.reason.empty())
        *cfg_.trace << " (" << v.reason << ")";
      *cfg_.trace << "\n";
    }
    return v;
  }
  return TeacherVerdict{};
}

SolverOutcome Teacher::recheck(const HoareTriple &t, const Constraint &c) {
  HoleBindings pre, post;
  auto conj = [](const std::set<std::size_t> &atoms) {
    return HoleBinding{std::vector<std::size_t>(atoms.begin(), atoms.end()), false};
  };
  auto disj = [](const std::set<std::size_t> &atoms) {
    return HoleBinding{std::vector<std::size_t>(atoms.begin(), atoms.end()), true};
  };
  if (auto *w = std::get_if<DisjunctionConstraint>(&c)) {
    post[w->hole] = disj(w->atoms);
  } else if (auto *s = std::get_if<ConjunctionConstraint>(&c)) {
    pre[s->hole] = conj(s->atoms);
    if (t.post_hole)
      post[*t.post_hole] = HoleBinding{};
  } else {
    const auto &ind = std::get<InductivityConstraint>(c);
    pre[ind.lhs.hole] = conj(ind.lhs.atoms);
    post[ind.rhs.hole] = disj(ind.rhs.atoms);
  }
  VC vc = vc_of(program_, t, pre, post, preds_);
  auto it = emitted_.find(std::to_string(t.id) + "|" + to_line(c));
  if (it != emitted_.end())
    return run(vc, t, it->second).result.outcome;
  return run(vc, t, make_context(vc.formula, cfg_.depth, sig_)).result.outcome;
}

TeacherVerdict check_conjecture(const Program &p, const ConjunctionMap &candidate, const PredicateSets &preds,
                                int depth, const SolverConfig &solver) {
  TeacherConfig cfg;
  cfg.depth = depth;
  cfg.solver = solver;
  Teacher t(p, preds, cfg);
  return t.check(candidate);
}

} // namespace npi

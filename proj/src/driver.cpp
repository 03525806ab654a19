#include "npi/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <set>
#include <sstream>

#include "json.hpp"

#include "npi/syntax.hpp"

namespace npi {

// ---- predicate generation -----------------------------------------------------

namespace {

void collect_stmt_exprs(const std::vector<StmtPtr> &body, std::vector<Expr> &asserts, std::vector<Expr> &all) {
  for (const auto &s : body) {
    for (const auto &e : {s->index, s->value, s->cond})
      if (e)
        all.push_back(e);
    if (s->kind == StmtKind::Assert)
      asserts.push_back(s->cond);
    collect_stmt_exprs(s->then_body, asserts, all);
    collect_stmt_exprs(s->else_body, asserts, all);
  }
}

// Every injective same-sort renaming of the program variables free in `f`.
void renamings(const Expr &f, const Program &p, std::vector<Expr> &out) {
  std::vector<std::pair<std::string, Sort>> free;
  for (const auto &[name, sort] : free_vars(f))
    if (p.var_sort(name))
      free.emplace_back(name, sort);
  std::map<std::string, Expr> sub;
  std::set<std::string> used;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == free.size()) {
      out.push_back(substitute(f, sub));
      return;
    }
    for (const auto &[name, sort] : p.vars) {
      if (sort != free[i].second || used.count(name))
        continue;
      used.insert(name);
      sub[free[i].first] = mk_var(name, sort);
      rec(i + 1);
      used.erase(name);
    }
  };
  rec(0);
}

void octagons(const std::vector<Expr> &terms, const std::set<std::int64_t> &consts, std::vector<Expr> &out) {
  for (auto c : consts) {
    Expr k = mk_int(c);
    for (const auto &x : terms) {
      out.push_back(mk_cmp(Op::Le, x, k));
      out.push_back(mk_cmp(Op::Le, mk_neg(x), k));
    }
    for (std::size_t i = 0; i < terms.size(); ++i)
      for (std::size_t j = i + 1; j < terms.size(); ++j) {
        const Expr &x = terms[i];
        const Expr &y = terms[j];
        out.push_back(mk_cmp(Op::Le, mk_add(x, y), k));
        out.push_back(mk_cmp(Op::Le, mk_sub(x, y), k));
        out.push_back(mk_cmp(Op::Le, mk_add(mk_neg(x), y), k));
        out.push_back(mk_cmp(Op::Le, mk_sub(mk_neg(x), y), k));
      }
  }
}

void array_reads(const Expr &e, ExprSet &out) {
  if (e->op == Op::Select)
    out.insert(e);
  if (is_quantifier(e))
    return; // reads under binders are not ground
  for (const auto &k : e->kids)
    array_reads(k, out);
}

bool pragma_flag(const Program &p, const std::string &flag) {
  auto [b, e] = p.pragmas.equal_range("predicates");
  for (auto it = b; it != e; ++it)
    if (it->second.find(flag) != std::string::npos)
      return true;
  return false;
}

} // namespace

PredicateSets gen_predicates(const Program &p, const PredicateOptions &opts) {
  std::vector<Expr> asserts, stmt_exprs;
  collect_stmt_exprs(p.body, asserts, stmt_exprs);

  std::vector<Expr> generated;
  auto harvest = [&](const std::vector<Expr> &clauses) {
    for (const auto &c : clauses)
      for (const auto &atom : conjuncts(c))
        renamings(atom, p, generated);
  };
  harvest(p.requires_);
  harvest(p.ensures);
  harvest(asserts);

  std::set<std::int64_t> consts{0};
  for (const auto &group : {p.requires_, p.ensures, p.axioms, stmt_exprs})
    for (const auto &e : group)
      collect_int_literals(e, consts);

  std::vector<Expr> ints;
  for (const auto &[name, sort] : p.vars)
    if (sort.is_int())
      ints.push_back(mk_var(name, sort));
  if (opts.array_octagons || pragma_flag(p, "array-octagons")) {
    ExprSet reads;
    for (const auto &e : stmt_exprs)
      array_reads(e, reads);
    ints.insert(ints.end(), reads.begin(), reads.end());
  }
  octagons(ints, consts, generated);

  if (opts.negation_closure || pragma_flag(p, "negation-closure")) {
    std::size_t n = generated.size();
    for (std::size_t i = 0; i < n; ++i)
      generated.push_back(nnf(mk_not(generated[i])));
  }

  std::vector<Expr> unique;
  std::set<std::string> seen;
  for (const auto &g : generated)
    if (seen.insert(to_string(g)).second)
      unique.push_back(g);

  PredicateSets out;
  for (const auto &h : p.holes) {
    std::vector<Predicate> ps;
    bool pinned = false;
    for (const auto &pp : p.pinned)
      if (pp.hole == h) {
        pinned = true;
        ps.push_back(Predicate{PredicateId{h, ps.size()}, pp.name, pp.body});
      }
    if (!pinned)
      for (const auto &g : unique)
        ps.push_back(Predicate{PredicateId{h, ps.size()}, "p" + std::to_string(ps.size()), g});
    out[h] = std::move(ps);
  }
  return out;
}

namespace {

std::string trim(std::string s) {
  auto b = s.find_first_not_of(" \t");
  auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

} // namespace

std::optional<ConjunctionMap> resolve_oracle(const Program &p, const PredicateSets &preds) {
  auto [b, e] = p.pragmas.equal_range("oracle");
  if (b == e)
    return std::nullopt;
  ConjunctionMap oracle;
  for (const auto &[h, ps] : preds)
    oracle[h] = Conjunction{h, {}};
  for (auto it = b; it != e; ++it) {
    std::string v = trim(it->second);
    if (v.empty() || v[0] != '?')
      throw Error("oracle pragma must start with ?hole: " + v);
    auto sp = v.find_first_of(" \t");
    HoleId h = v.substr(1, sp == std::string::npos ? std::string::npos : sp - 1);
    auto pi = preds.find(h);
    if (pi == preds.end())
      throw Error("oracle pragma names unknown hole ?" + h);
    std::string rest = sp == std::string::npos ? "" : v.substr(sp);
    std::stringstream ss(rest);
    std::string atom;
    while (std::getline(ss, atom, ';')) {
      atom = trim(atom);
      if (atom.empty())
        continue;
      std::optional<std::size_t> idx;
      for (const auto &pr : pi->second)
        if (pr.name == atom)
          idx = pr.id.index;
      if (!idx) {
        std::string printed = to_string(parse_expr(atom, p));
        for (const auto &pr : pi->second)
          if (to_string(pr.body) == printed)
            idx = pr.id.index;
        if (!idx)
          throw Error("oracle atom '" + atom + "' is not a predicate of hole ?" + h);
      }
      oracle[h].atoms.insert(*idx);
    }
  }
  return oracle;
}

std::optional<int> pragma_depth(const Program &p) {
  auto it = p.pragmas.find("depth");
  if (it == p.pragmas.end())
    return std::nullopt;
  try {
    int d = std::stoi(it->second);
    if (d < 0)
      throw Error("negative depth");
    return d;
  } catch (const std::exception &) {
    throw Error("invalid depth pragma: " + it->second);
  }
}

// ---- synthesis ----------------------------------------------------------------------

std::string to_string(Outcome o) {
  switch (o) {
  case Outcome::Invariant:
    return "Invariant";
  case Outcome::NoConsistentInvariant:
    return "NoConsistentInvariant";
  case Outcome::Unprovable:
    return "Unprovable";
  case Outcome::RoundLimit:
    return "RoundLimit";
  case Outcome::EngineFailure:
    return "EngineFailure";
  }
  return "?";
}

int exit_code(Outcome o) { return static_cast<int>(o); }

std::string SynthesisReport::describe_invariant() const {
  if (!invariant)
    return "";
  std::string s;
  for (const auto &[h, c] : *invariant) {
    s += "?" + h + ":";
    if (c.atoms.empty())
      s += " true";
    bool first = true;
    for (auto a : c.atoms) {
      s += std::string(first ? " " : " && ") + to_string(predicates.at(h).at(a).body);
      first = false;
    }
    s += "\n";
  }
  return s;
}

namespace {

std::string map_str(const ConjunctionMap &m) {
  std::string s;
  for (const auto &[h, c] : m)
    s += h + c.str() + " ";
  return s;
}

} // namespace

SynthesisReport synthesize(const Program &p, const SynthesisConfig &cfg, const std::string &name) {
  auto start = std::chrono::steady_clock::now();
  SynthesisReport rep;
  rep.name = name;
  const Teacher *engine = nullptr;
  auto finish = [&](Outcome o) {
    if (engine) {
      rep.models_checked += engine->solver().models_checked();
      rep.models_rejected += engine->solver().models_rejected();
    }
    rep.outcome = o;
    rep.time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return rep;
  };

  try {
    rep.depth = cfg.depth ? *cfg.depth : pragma_depth(p).value_or(1);
    rep.predicates = gen_predicates(p, cfg.predicates);
    Universes universes = universes_of(rep.predicates);
    for (const auto &[h, n] : universes)
      rep.predicate_count += n;
    rep.max_rounds = cfg.max_rounds ? *cfg.max_rounds : static_cast<int>(rep.predicate_count) + 1;
    if (rep.max_rounds < 1)
      throw Error("max rounds must be at least 1");
    rep.oracle = resolve_oracle(p, rep.predicates);

    TeacherConfig tcfg;
    tcfg.depth = rep.depth;
    tcfg.solver = cfg.solver;
    tcfg.trace = cfg.trace;
    tcfg.dump_vcs = cfg.dump_vcs;
    tcfg.dump_approx = cfg.dump_approx;
    Teacher teacher(p, rep.predicates, tcfg);
    engine = &teacher;

    std::set<ConjunctionMap> seen;
    for (int round = 1; round <= rep.max_rounds; ++round) {
      rep.rounds = round;
      auto candidate = houdini_passive(to_ice(rep.sample, universes), universes);
      if (!candidate) {
        rep.detail = "no conjunction of the candidate predicates is consistent with the sample";
        rep.solver_queries = teacher.solver_queries();
        return finish(Outcome::NoConsistentInvariant);
      }
      if (!seen.insert(*candidate).second)
        rep.progress_violations.push_back("round " + std::to_string(round) + " repeats " + map_str(*candidate));
      rep.conjectures.push_back(*candidate);
      if (cfg.trace)
        *cfg.trace << "round " << round << ": conjecture " << map_str(*candidate) << "\n";

      TeacherVerdict v = teacher.check(*candidate);
      switch (v.kind) {
      case TeacherVerdict::Kind::Verified: {
        // Self-certification with a fresh engine (no cached proofs).
        Teacher fresh(p, rep.predicates, TeacherConfig{rep.depth, cfg.solver, nullptr, nullptr, nullptr});
        rep.final_verdict = fresh.check(*candidate);
        rep.solver_queries = teacher.solver_queries() + fresh.solver_queries();
        rep.models_checked += fresh.solver().models_checked();
        rep.models_rejected += fresh.solver().models_rejected();
        if (rep.final_verdict.kind != TeacherVerdict::Kind::Verified) {
          rep.detail = "final re-validation failed: " + to_string(rep.final_verdict.kind) + " " +
                       rep.final_verdict.reason;
          return finish(Outcome::EngineFailure);
        }
        rep.invariant = *candidate;
        for (const auto &[h, c] : *candidate)
          rep.invariant_size += c.atoms.size();
        return finish(Outcome::Invariant);
      }
      case TeacherVerdict::Kind::Rejected: {
        add_to(rep.sample, *v.constraint);
        rep.constraints.push_back({round, *v.triple, *v.constraint});
        if (cfg.check_normality) {
          ++rep.constraints_rechecked;
          SolverOutcome o = teacher.recheck(*v.triple, *v.constraint);
          if (o != SolverOutcome::Refuted)
            rep.normality_violations.push_back("round " + std::to_string(round) + ": " + to_line(*v.constraint) +
                                               " re-checked as " + to_string(o));
        }
        if (rep.oracle && !is_consistent(*rep.oracle, rep.sample))
          rep.honesty_violations.push_back("round " + std::to_string(round) + ": oracle contradicts " +
                                           to_line(*v.constraint));
        break;
      }
      case TeacherVerdict::Kind::PlainFailure:
        rep.final_verdict = v;
        rep.detail = v.reason + " (" + v.triple->describe() + ")\n" + v.witness.str();
        rep.solver_queries = teacher.solver_queries();
        return finish(Outcome::Unprovable);
      case TeacherVerdict::Kind::EngineFailure:
        rep.final_verdict = v;
        rep.detail = v.reason;
        rep.solver_queries = teacher.solver_queries();
        return finish(Outcome::EngineFailure);
      }
    }
    rep.solver_queries = teacher.solver_queries();
    rep.detail = "round limit " + std::to_string(rep.max_rounds) + " reached";
    return finish(Outcome::RoundLimit);
  } catch (const Error &e) {
    engine = nullptr;
    rep.detail = e.what();
    return finish(Outcome::EngineFailure);
  }
}

SynthesisReport synthesize_file(const std::string &path, const SynthesisConfig &cfg) {
  Program p = parse_program_file(path);
  return synthesize(p, cfg, std::filesystem::path(path).stem().string());
}

// ---- suite and statistics ---------------------------------------------------------------

SuiteRow to_row(const SynthesisReport &r) {
  return SuiteRow{r.name, r.predicate_count, r.rounds, r.invariant_size, r.time_ms, to_string(r.outcome), r.detail};
}

std::vector<SuiteRow> run_suite(const std::string &dir, const SynthesisConfig &cfg,
                                std::vector<SynthesisReport> *reports) {
  std::vector<std::filesystem::path> files;
  for (const auto &entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".npl")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<SuiteRow> rows;
  for (const auto &f : files) {
    try {
      SynthesisReport r = synthesize_file(f.string(), cfg);
      rows.push_back(to_row(r));
      if (reports)
        reports->push_back(std::move(r));
    } catch (const std::exception &e) {
      rows.push_back(SuiteRow{f.stem().string(), 0, 0, 0, 0, "Error", e.what()});
    }
  }
  return rows;
}

namespace {

nlohmann::json row_json(const SuiteRow &r) {
  return nlohmann::json{{"name", r.name},
                        {"predicates", r.predicates},
                        {"rounds", r.rounds},
                        {"invariant_size", r.invariant_size},
                        {"time_ms", std::round(r.time_ms * 1000) / 1000},
                        {"outcome", r.outcome}};
}

} // namespace

std::string stats_json(const SuiteRow &row) { return row_json(row).dump(2); }

std::string stats_json(const std::vector<SuiteRow> &rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto &r : rows)
    arr.push_back(row_json(r));
  return arr.dump(2);
}

std::string stats_text(const std::vector<SuiteRow> &rows) {
  std::size_t w = 4;
  for (const auto &r : rows)
    w = std::max(w, r.name.size());
  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(w)) << "name" << std::right << std::setw(12) << "predicates"
     << std::setw(8) << "rounds" << std::setw(8) << "|Inv|" << std::setw(12) << "time_ms" << "  outcome\n";
  for (const auto &r : rows)
    os << std::left << std::setw(static_cast<int>(w)) << r.name << std::right << std::setw(12) << r.predicates
       << std::setw(8) << r.rounds << std::setw(8) << r.invariant_size << std::setw(12) << std::fixed
       << std::setprecision(1) << r.time_ms << "  " << r.outcome << "\n";
  return os.str();
}

} // namespace npi

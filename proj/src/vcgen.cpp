#include "npi/vcgen.hpp"

#include <algorithm>

namespace npi {

std::string to_string(TripleKind k) {
  switch (k) {
  case TripleKind::PreToInv:
    return "PreToInv";
  case TripleKind::InvToPost:
    return "InvToPost";
  case TripleKind::InvToInv:
    return "InvToInv";
  case TripleKind::Plain:
    return "Plain";
  }
  return "?";
}

std::string HoareTriple::describe() const {
  std::string s = "#" + std::to_string(id) + " " + to_string(kind);
  if (pre_hole || post_hole)
    s += " " + (pre_hole ? *pre_hole : std::string("pre")) + "->" + (post_hole ? *post_hole : std::string("post"));
  return s;
}

namespace {

TripleKind kind_of(bool pre_hole, bool post_hole) {
  if (pre_hole && post_hole)
    return TripleKind::InvToInv;
  if (pre_hole)
    return TripleKind::InvToPost;
  if (post_hole)
    return TripleKind::PreToInv;
  return TripleKind::Plain;
}

bool contains_cut(const std::vector<StmtPtr> &body) {
  for (const auto &s : body) {
    if (s->kind == StmtKind::While || s->kind == StmtKind::Cut)
      return true;
    if (contains_cut(s->then_body) || contains_cut(s->else_body))
      return true;
  }
  return false;
}

struct Cursor {
  Expr pre;
  std::optional<HoleId> pre_hole;
  std::vector<StmtPtr> segment;
};

class Cutter {
public:
  std::vector<HoareTriple> triples;

  void emit(Cursor &c, Expr post, std::optional<HoleId> post_hole) {
    HoareTriple t;
    t.id = static_cast<int>(triples.size());
    t.pre = c.pre;
    t.body = std::move(c.segment);
    t.post = std::move(post);
    t.pre_hole = c.pre_hole;
    t.post_hole = std::move(post_hole);
    t.kind = kind_of(t.pre_hole.has_value(), t.post_hole.has_value());
    triples.push_back(std::move(t));
    c.segment.clear();
  }

  void process(const std::vector<StmtPtr> &body, Cursor &cur) {
    for (const auto &s : body) {
      switch (s->kind) {
      case StmtKind::While: {
        if (has_quantifier(s->cond))
          throw Error("line " + std::to_string(s->line) + ": loop conditions must be quantifier-free");
        emit(cur, mk_hole(s->hole), s->hole);
        Cursor inner{mk_and(mk_hole(s->hole), s->cond), s->hole, {}};
        process(s->then_body, inner);
        emit(inner, mk_hole(s->hole), s->hole);
        cur = Cursor{mk_and(mk_hole(s->hole), mk_not(s->cond)), s->hole, {}};
        break;
      }
      case StmtKind::Cut:
        emit(cur, mk_hole(s->hole), s->hole);
        cur = Cursor{mk_hole(s->hole), s->hole, {}};
        break;
      case StmtKind::If:
        if (contains_cut(s->then_body) || contains_cut(s->else_body))
          throw Error("line " + std::to_string(s->line) + ": loops and cut points inside conditionals are not supported");
        cur.segment.push_back(s);
        break;
      default:
        cur.segment.push_back(s);
      }
    }
  }
};

} // namespace

std::vector<HoareTriple> cut_loops(const Program &p) {
  Cutter c;
  Cursor cur{mk_and(p.requires_), std::nullopt, {}};
  c.process(p.body, cur);
  c.emit(cur, mk_and(p.ensures), std::nullopt);
  return std::move(c.triples);
}

std::vector<HoareTriple> checking_order(std::vector<HoareTriple> triples) {
  auto rank = [](TripleKind k) {
    switch (k) {
    case TripleKind::Plain:
      return 0;
    case TripleKind::PreToInv:
      return 1;
    case TripleKind::InvToInv:
      return 2;
    case TripleKind::InvToPost:
      return 3;
    }
    return 4;
  };
  std::stable_sort(triples.begin(), triples.end(),
                   [&](const HoareTriple &a, const HoareTriple &b) { return rank(a.kind) < rank(b.kind); });
  return triples;
}

static std::string havoc_name(const Stmt &s) { return s.target + "!h" + std::to_string(s.id); }

Expr wp(const StmtPtr &s, const Expr &post) {
  switch (s->kind) {
  case StmtKind::Assign:
    return substitute(post, {{s->target, s->value}});
  case StmtKind::ArrayAssign: {
    // The array's sort is fixed, so rebuild the variable from the store.
    Expr arr = mk_var(s->target, Sort::array());
    return substitute(post, {{s->target, mk_store(arr, s->index, s->value)}});
  }
  case StmtKind::Havoc: {
    auto fv = free_vars(post);
    auto it = fv.find(s->target);
    if (it == fv.end())
      return post;
    Binder b{havoc_name(*s), it->second};
    return mk_forall({b}, substitute(post, {{s->target, mk_var(b.name, b.sort)}}));
  }
  case StmtKind::Assume:
    return mk_implies(s->cond, post);
  case StmtKind::Assert:
    return mk_and(mk_labeled("assert" + std::to_string(s->id), s->cond), post);
  case StmtKind::If:
    return mk_and(mk_implies(s->cond, wp(s->then_body, post)), mk_implies(mk_not(s->cond), wp(s->else_body, post)));
  case StmtKind::While:
  case StmtKind::Cut:
    throw Error("wp: loop or cut point in a loop-free segment");
  }
  return post;
}

Expr wp(const std::vector<StmtPtr> &body, const Expr &post) {
  Expr q = post;
  for (auto it = body.rbegin(); it != body.rend(); ++it)
    q = wp(*it, q);
  return q;
}

namespace {

using State = std::map<std::string, Expr>;

void require_quantifier_free(const Stmt &s) {
  if (has_quantifier(s.cond))
    throw Error("line " + std::to_string(s.line) + ": branch and loop conditions must be quantifier-free");
}

Expr guarded(const Expr &path, Expr f) {
  if (path->op == Op::BoolLit && path->value)
    return f;
  return mk_implies(path, std::move(f));
}

void exec(const std::vector<StmtPtr> &body, SymbolicRun &run) {
  State &st = run.state;
  for (const auto &s : body) {
    switch (s->kind) {
    case StmtKind::Assign:
      st[s->target] = substitute(s->value, st);
      break;
    case StmtKind::ArrayAssign:
      st[s->target] = mk_store(st.at(s->target), substitute(s->index, st), substitute(s->value, st));
      break;
    case StmtKind::Havoc:
      st[s->target] = mk_var(havoc_name(*s), st.at(s->target)->sort);
      break;
    case StmtKind::Assume:
      run.path = mk_and(run.path, mk_labeled("assume" + std::to_string(s->id), substitute(s->cond, st)));
      break;
    case StmtKind::Assert:
      run.obligations.push_back(
          mk_labeled("assert" + std::to_string(s->id), guarded(run.path, substitute(s->cond, st))));
      break;
    case StmtKind::If: {
      require_quantifier_free(*s);
      Expr c = substitute(s->cond, st);
      Expr then_path = mk_and(run.path, c);
      Expr else_path = mk_and(run.path, mk_not(c));
      SymbolicRun a{st, then_path, {}}, b{st, else_path, {}};
      exec(s->then_body, a);
      exec(s->else_body, b);
      for (auto &[name, val] : st) {
        const Expr &va = a.state.at(name);
        const Expr &vb = b.state.at(name);
        val = equal(va, vb) ? va : mk_ite(c, va, vb);
      }
      if (!equal(a.path, then_path) || !equal(b.path, else_path))
        run.path = mk_or(a.path, b.path);
      for (auto &o : a.obligations)
        run.obligations.push_back(std::move(o));
      for (auto &o : b.obligations)
        run.obligations.push_back(std::move(o));
      break;
    }
    case StmtKind::While:
    case StmtKind::Cut:
      throw Error("symbolic execution: loop or cut point in a loop-free segment");
    }
  }
}

} // namespace

SymbolicRun symbolic_run(const Program &p, const std::vector<StmtPtr> &body) {
  SymbolicRun run;
  for (const auto &[n, s] : p.vars)
    run.state[n] = mk_var(n, s);
  run.path = mk_true();
  exec(body, run);
  return run;
}

std::map<std::string, Expr> symbolic_post_state(const Program &p, const std::vector<StmtPtr> &body) {
  return symbolic_run(p, body).state;
}

HoleBindings bindings_of(const ConjunctionMap &candidate) {
  HoleBindings b;
  for (const auto &[h, c] : candidate)
    b[h] = HoleBinding{std::vector<std::size_t>(c.atoms.begin(), c.atoms.end()), false};
  return b;
}

HoleBindings full_bindings(const PredicateSets &preds) {
  HoleBindings b;
  for (const auto &[h, ps] : preds) {
    HoleBinding hb;
    for (std::size_t i = 0; i < ps.size(); ++i)
      hb.atoms.push_back(i);
    b[h] = std::move(hb);
  }
  return b;
}

std::string predicate_label(const HoleId &hole, const Predicate &p, bool post_state) {
  return hole + "." + p.name + (post_state ? "@post" : "@pre");
}

namespace {

Expr hole_formula(const HoleId &h, const HoleBindings &bindings, const PredicateSets &preds, bool post_state) {
  auto bi = bindings.find(h);
  if (bi == bindings.end())
    throw UnboundHole("no binding for hole ?" + h);
  auto pi = preds.find(h);
  if (pi == preds.end())
    throw UnboundHole("no predicates for hole ?" + h);
  std::vector<Expr> parts;
  for (auto a : bi->second.atoms) {
    const Predicate &p = pi->second.at(a);
    parts.push_back(mk_labeled(predicate_label(h, p, post_state), p.body));
  }
  return bi->second.disjunctive ? mk_or(std::move(parts)) : mk_and(std::move(parts));
}

Expr labeled_all(const std::vector<Expr> &fs, const std::string &prefix) {
  std::vector<Expr> out;
  for (std::size_t i = 0; i < fs.size(); ++i)
    out.push_back(mk_labeled(prefix + std::to_string(i), fs[i]));
  return mk_and(std::move(out));
}

} // namespace

Expr post_obligation(const VC &vc, const Expr &f) { return guarded(vc.path, substitute(f, vc.post_state)); }

VC vc_of(const Program &p, const HoareTriple &t, const HoleBindings &bindings, const PredicateSets &preds) {
  return vc_of(p, t, bindings, bindings, preds);
}

VC vc_of(const Program &p, const HoareTriple &t, const HoleBindings &pre_bindings, const HoleBindings &post_bindings,
         const PredicateSets &preds) {
  std::map<HoleId, Expr> pre_repl, post_repl;
  if (t.pre_hole)
    pre_repl[*t.pre_hole] = hole_formula(*t.pre_hole, pre_bindings, preds, false);
  if (t.post_hole)
    post_repl[*t.post_hole] = hole_formula(*t.post_hole, post_bindings, preds, true);

  Expr pre = substitute_holes(t.pre, pre_repl);
  Expr post = substitute_holes(t.post, post_repl);
  if (!t.pre_hole)
    pre = labeled_all(conjuncts(pre), "requires");
  if (!t.post_hole)
    post = labeled_all(conjuncts(post), "ensures");

  VC vc;
  vc.origin = t;
  vc.hypotheses = p.axioms.empty() ? pre : mk_and(labeled_all(p.axioms, "axiom"), pre);
  SymbolicRun run = symbolic_run(p, t.body);
  vc.path = run.path;
  vc.obligations = run.obligations;
  vc.post_state = run.state;
  for (const auto &[n, s] : p.vars)
    vc.pre_state[n] = mk_var(n, s);

  std::vector<Expr> goal = vc.obligations;
  goal.push_back(post_obligation(vc, post));
  vc.formula = mk_implies(vc.hypotheses, mk_and(std::move(goal)));
  return vc;
}

VC vc_of(const Program &p, const HoareTriple &t, const ConjunctionMap &candidate, const PredicateSets &preds) {
  return vc_of(p, t, bindings_of(candidate), preds);
}

} // namespace npi

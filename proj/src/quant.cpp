#include "npi/quant.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

#include "npi/logic.hpp"
#include "npi/syntax.hpp"

namespace npi {

// ---- pool -----------------------------------------------------------------

const ExprSet &GroundTermPool::of(const Sort &s) const {
  static const ExprSet empty;
  auto it = terms.find(s);
  return it == terms.end() ? empty : it->second;
}

std::size_t GroundTermPool::size() const {
  std::size_t n = 0;
  for (const auto &[s, ts] : terms)
    n += ts.size();
  return n;
}

bool GroundTermPool::contains(const Expr &t) const { return of(t->sort).count(t) > 0; }

// ---- skolemization -----------------------------------------------------------

namespace {

class Skolemizer {
public:
  explicit Skolemizer(std::vector<SkolemDecl> *decls) : decls_(decls) {}

  Expr run(const Expr &f, const std::string &label, std::vector<Binder> &scope) {
    switch (f->op) {
    case Op::Labeled:
      return mk_labeled(f->name, run(f->kids[0], f->name, scope));
    case Op::And:
    case Op::Or: {
      std::vector<Expr> kids;
      for (const auto &k : f->kids)
        kids.push_back(run(k, label, scope));
      return f->op == Op::And ? mk_and(std::move(kids)) : mk_or(std::move(kids));
    }
    case Op::Forall: {
      std::size_t mark = scope.size();
      for (const auto &b : f->binders)
        scope.push_back(b);
      Expr body = run(f->kids[0], label, scope);
      scope.resize(mark);
      return mk_forall(f->binders, body, f->triggers);
    }
    case Op::Exists:
      return run(eliminate(f, label, scope), label, scope);
    default:
      if (has_quantifier(f))
        throw Error("skolemize: formula is not in negation normal form");
      return f;
    }
  }

private:
  Expr eliminate(const Expr &ex, const std::string &label, const std::vector<Binder> &scope) {
    auto fv = free_vars(ex);
    std::vector<Binder> args;
    for (const auto &b : scope)
      if (fv.count(b.name) &&
          std::none_of(args.begin(), args.end(), [&](const Binder &a) { return a.name == b.name; }))
        args.push_back(b);

    std::string key_prefix = label + "\x1f";
    for (const auto &a : args)
      key_prefix += a.name + ":" + a.sort.str() + ",";
    key_prefix += "\x1f" + to_string(ex) + "\x1f";

    std::map<std::string, Expr> sub;
    for (const auto &b : ex->binders) {
      std::string key = key_prefix + b.name;
      auto it = cache_.find(key);
      std::string name;
      if (it != cache_.end()) {
        name = it->second;
      } else {
        name = fresh_name(label, b.name);
        cache_[key] = name;
        if (decls_) {
          SkolemDecl d{name, {}, b.sort};
          for (const auto &a : args)
            d.args.push_back(a.sort);
          decls_->push_back(std::move(d));
        }
      }
      if (args.empty()) {
        sub[b.name] = mk_var(name, b.sort);
      } else {
        std::vector<Expr> actuals;
        for (const auto &a : args)
          actuals.push_back(mk_var(a.name, a.sort));
        sub[b.name] = mk_app(name, std::move(actuals), b.sort);
      }
    }
    return substitute(ex->kids[0], sub);
  }

  std::string fresh_name(const std::string &label, const std::string &binder) {
    std::string base = label.empty() ? "sk" + std::to_string(unlabeled_++) : label + "!" + binder;
    std::string name = base;
    for (int n = 1; used_.count(name); ++n)
      name = base + "!" + std::to_string(n);
    used_.insert(name);
    return name;
  }

  std::vector<SkolemDecl> *decls_;
  std::map<std::string, std::string> cache_;
  std::set<std::string> used_;
  int unlabeled_ = 0;
};

} // namespace

Expr skolemize(const Expr &nnf_formula, std::vector<SkolemDecl> *decls) {
  Skolemizer sk(decls);
  std::vector<Binder> scope;
  return sk.run(nnf_formula, "", scope);
}

// ---- ground terms ---------------------------------------------------------------

namespace {

bool is_term_node(const Expr &e) {
  switch (e->op) {
  case Op::Var:
  case Op::IntLit:
  case Op::Neg:
  case Op::Add:
  case Op::Sub:
  case Op::Mul:
  case Op::App:
  case Op::Select:
  case Op::Store:
  case Op::Ite:
    return true;
  default:
    return false;
  }
}

// Returns true when `e` mentions no bound variable.
bool ground_rec(const Expr &e, std::set<std::string> &bound, ExprSet &out) {
  if (e->op == Op::Var) {
    bool g = !bound.count(e->name);
    if (g)
      out.insert(e);
    return g;
  }
  if (is_quantifier(e)) {
    std::vector<std::string> added;
    for (const auto &b : e->binders)
      if (bound.insert(b.name).second)
        added.push_back(b.name);
    ground_rec(e->kids[0], bound, out);
    for (const auto &n : added)
      bound.erase(n);
    return false;
  }
  bool g = true;
  for (const auto &k : e->kids)
    g = ground_rec(k, bound, out) && g;
  if (g && is_term_node(e))
    out.insert(e);
  return g;
}

void collect_binder_sorts(const Expr &e, std::set<Sort> &out) {
  for (const auto &b : e->binders)
    out.insert(b.sort);
  for (const auto &k : e->kids)
    collect_binder_sorts(k, out);
}

Expr minus_one(const Expr &t) {
  if (t->op == Op::IntLit)
    return mk_int(t->value - 1);
  return mk_sub(t, mk_int(1));
}

void cartesian(const std::vector<const ExprSet *> &domains, const std::function<void(const std::vector<Expr> &)> &fn) {
  std::vector<Expr> tuple(domains.size());
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == domains.size()) {
      fn(tuple);
      return;
    }
    for (const auto &t : *domains[i]) {
      tuple[i] = t;
      rec(i + 1);
    }
  };
  for (const auto *d : domains)
    if (d->empty())
      return;
  rec(0);
}

} // namespace

void ground_subterms(const Expr &f, ExprSet &out) {
  std::set<std::string> bound;
  ground_rec(f, bound, out);
}

GroundTermPool collect_terms(const Expr &f, int depth, const Signature &sig, const std::vector<SkolemDecl> &skolems) {
  GroundTermPool pool;
  pool.depth = depth;
  auto add = [&](const Expr &t) { pool.terms[t->sort].insert(t); };

  for (const auto &[name, sort] : free_vars(f))
    add(mk_var(name, sort));
  for (const auto &[name, sort] : sig.vars)
    add(mk_var(name, sort));
  std::set<std::int64_t> lits;
  collect_int_literals(f, lits);
  lits.insert(0);
  for (auto v : lits)
    add(mk_int(v));

  std::set<Sort> needed;
  collect_binder_sorts(f, needed);
  for (const auto &s : sig.sorts)
    needed.insert(Sort::uninterpreted(s));
  for (const auto &s : needed)
    if (pool.of(s).empty() && !s.is_bool())
      add(mk_var("u!" + s.str(), s));

  struct Fn {
    std::string name;
    std::vector<Sort> args;
    Sort result;
  };
  std::vector<Fn> fns;
  for (const auto &fd : sig.functions)
    if (!fd.args.empty() && !fd.result.is_bool())
      fns.push_back({fd.name, fd.args, fd.result});
  for (const auto &sd : skolems)
    if (!sd.args.empty() && !sd.result.is_bool())
      fns.push_back({sd.name, sd.args, sd.result});

  for (int d = 0; d < depth; ++d) {
    GroundTermPool prev = pool;
    for (const auto &fn : fns) {
      std::vector<const ExprSet *> doms;
      for (const auto &s : fn.args)
        doms.push_back(&prev.of(s));
      cartesian(doms, [&](const std::vector<Expr> &args) { add(mk_app(fn.name, args, fn.result)); });
    }
    for (const auto &a : prev.of(Sort::array()))
      for (const auto &i : prev.of(Sort::integer()))
        add(mk_select(a, i));
    for (const auto &t : prev.of(Sort::integer()))
      add(minus_one(t));
  }
  return pool;
}

// ---- instantiation ------------------------------------------------------------------

namespace {

bool match(const Expr &pat, const Expr &term, const std::set<std::string> &vars, std::map<std::string, Expr> &sigma) {
  if (pat->op == Op::Var && vars.count(pat->name)) {
    if (pat->sort != term->sort)
      return false;
    auto it = sigma.find(pat->name);
    if (it != sigma.end())
      return equal(it->second, term);
    sigma[pat->name] = term;
    return true;
  }
  if (pat->op != term->op || pat->name != term->name || pat->value != term->value || pat->sort != term->sort ||
      pat->kids.size() != term->kids.size())
    return false;
  for (std::size_t i = 0; i < pat->kids.size(); ++i)
    if (!match(pat->kids[i], term->kids[i], vars, sigma))
      return false;
  return true;
}

class Instantiator {
public:
  Instantiator(const GroundTermPool &pool, const TriggerBase &base, std::vector<Instance> *log)
      : pool_(pool), base_(base), log_(log) {}

  Expr run(const Expr &f) {
    switch (f->op) {
    case Op::Forall:
      return expand(f);
    case Op::Exists:
      throw Error("instantiate: existential quantifier left after skolemization");
    case Op::And:
    case Op::Or: {
      std::vector<Expr> kids;
      for (const auto &k : f->kids)
        kids.push_back(run(k));
      return f->op == Op::And ? mk_and(std::move(kids)) : mk_or(std::move(kids));
    }
    case Op::Labeled:
      return mk_labeled(f->name, run(f->kids[0]));
    default:
      if (!has_quantifier(f))
        return f;
      return with_kids(f, map_kids(f));
    }
  }

  /// All admissible tuples for universal `q`.
  std::vector<std::vector<Expr>> tuples(const Expr &q) const {
    std::vector<std::vector<Expr>> out;
    const auto &bs = q->binders;
    if (q->triggers.empty()) {
      std::vector<const ExprSet *> doms;
      for (const auto &b : bs)
        doms.push_back(&pool_.of(b.sort));
      cartesian(doms, [&](const std::vector<Expr> &t) { out.push_back(t); });
      return out;
    }
    std::set<std::string> vars;
    for (const auto &b : bs)
      vars.insert(b.name);
    // Join the matches of every trigger term against the base.
    std::vector<std::map<std::string, Expr>> partial{{}};
    for (const auto &trig : q->triggers) {
      std::vector<std::map<std::string, Expr>> next;
      for (const auto &sigma : partial)
        for (const auto &g : base_) {
          auto s2 = sigma;
          if (match(trig, g, vars, s2))
            next.push_back(std::move(s2));
        }
      partial = std::move(next);
      if (partial.empty())
        return out;
    }
    std::set<std::vector<Expr>, std::function<bool(const std::vector<Expr> &, const std::vector<Expr> &)>> seen(
        [](const std::vector<Expr> &a, const std::vector<Expr> &b) {
          return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), ExprLess{});
        });
    for (const auto &sigma : partial) {
      std::vector<const ExprSet *> doms;
      std::vector<ExprSet> singles(bs.size());
      bool ok = true;
      for (std::size_t i = 0; i < bs.size(); ++i) {
        auto it = sigma.find(bs[i].name);
        if (it == sigma.end()) {
          doms.push_back(&pool_.of(bs[i].sort));
        } else {
          if (!pool_.contains(it->second)) {
            ok = false;
            break;
          }
          singles[i].insert(it->second);
          doms.push_back(&singles[i]);
        }
      }
      if (!ok)
        continue;
      cartesian(doms, [&](const std::vector<Expr> &t) {
        if (seen.insert(t).second)
          out.push_back(t);
      });
    }
    return out;
  }

private:
  std::vector<Expr> map_kids(const Expr &f) {
    std::vector<Expr> kids;
    for (const auto &k : f->kids)
      kids.push_back(run(k));
    return kids;
  }

  Expr expand(const Expr &q) {
    std::vector<Expr> instances;
    for (const auto &tuple : tuples(q)) {
      std::map<std::string, Expr> sub;
      for (std::size_t i = 0; i < q->binders.size(); ++i)
        sub[q->binders[i].name] = tuple[i];
      Expr inst = substitute(q->kids[0], sub);
      if (log_)
        log_->push_back(Instance{q, tuple, inst});
      instances.push_back(run(inst));
    }
    return mk_and(std::move(instances));
  }

  const GroundTermPool &pool_;
  const TriggerBase &base_;
  std::vector<Instance> *log_;
};

} // namespace

Expr instantiate(const Expr &f, const GroundTermPool &pool, const TriggerBase &base, std::vector<Instance> *log) {
  Instantiator inst(pool, base, log);
  return inst.run(f);
}

TriggerBase saturate_base(const Expr &skolemized, const GroundTermPool &pool, int max_rounds) {
  TriggerBase base;
  ground_subterms(skolemized, base);
  for (int round = 0; round < max_rounds; ++round) {
    Expr qf = instantiate(skolemized, pool, base);
    std::size_t before = base.size();
    ground_subterms(qf, base);
    if (base.size() == before)
      break;
  }
  return base;
}

GroundingContext make_context(const Expr &reference, int depth, const Signature &sig) {
  GroundingContext ctx;
  Expr sk = skolemize(nnf(mk_not(reference)), &ctx.skolems);
  ctx.pool = collect_terms(sk, depth, sig, ctx.skolems);
  ctx.base = saturate_base(sk, ctx.pool);
  return ctx;
}

ApproxResult approx_formula(const Expr &f, const GroundingContext &ctx) {
  ApproxResult r;
  Expr sk = skolemize(nnf(f), &r.skolems);
  r.qf = strip_labels(instantiate(sk, ctx.pool, ctx.base, &r.instance_log));
  return r;
}

ApproxResult approx(const Expr &vc_formula, const GroundingContext &ctx) { return approx_formula(mk_not(vc_formula), ctx); }

ApproxResult approx(const Expr &vc_formula, int depth, const Signature &sig) {
  return approx(vc_formula, make_context(vc_formula, depth, sig));
}

// ---- SMT-LIB ------------------------------------------------------------------

std::string smt_symbol(const std::string &name) {
  static const std::set<std::string> reserved = {
      "true", "false", "and",  "or",    "not",   "xor",  "ite", "let",   "forall", "exists", "select", "store",
      "div",  "mod",   "abs",  "distinct", "par", "as",  "_",   "!",     "assert", "Int",    "Bool",   "Array",
      "NUMERAL", "DECIMAL", "STRING", "declare-fun", "define-fun", "to_real", "to_int", "is_int"};
  bool simple = !name.empty() && !std::isdigit(static_cast<unsigned char>(name[0])) && !reserved.count(name);
  for (char c : name)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || std::string("~!@$%^&*_-+=<>.?/").find(c) != std::string::npos))
      simple = false;
  return simple ? name : "|" + name + "|";
}

namespace {

std::string smt_sort(const Sort &s) {
  switch (s.kind) {
  case SortKind::Int:
    return "Int";
  case SortKind::Bool:
    return "Bool";
  case SortKind::Array:
    return "(Array Int Int)";
  case SortKind::Uninterpreted:
    return smt_symbol(s.name);
  }
  return "?";
}

std::string smt_int(std::int64_t v) { return v < 0 ? "(- " + std::to_string(-v) + ")" : std::to_string(v); }

void emit(std::ostream &os, const Expr &e) {
  auto nary = [&](const char *op) {
    os << "(" << op;
    for (const auto &k : e->kids) {
      os << " ";
      emit(os, k);
    }
    os << ")";
  };
  switch (e->op) {
  case Op::Var:
    os << smt_symbol(e->name);
    break;
  case Op::IntLit:
    os << smt_int(e->value);
    break;
  case Op::Neg:
    nary("-");
    break;
  case Op::Add:
    nary("+");
    break;
  case Op::Sub:
    nary("-");
    break;
  case Op::Mul:
    os << "(* " << smt_int(e->value) << " ";
    emit(os, e->kids[0]);
    os << ")";
    break;
  case Op::App:
    if (e->kids.empty()) {
      os << smt_symbol(e->name);
    } else {
      nary(smt_symbol(e->name).c_str());
    }
    break;
  case Op::Select:
    nary("select");
    break;
  case Op::Store:
    nary("store");
    break;
  case Op::Ite:
    nary("ite");
    break;
  case Op::BoolLit:
    os << (e->value ? "true" : "false");
    break;
  case Op::Eq:
    nary("=");
    break;
  case Op::Ne:
    os << "(not ";
    nary("=");
    os << ")";
    break;
  case Op::Lt:
    nary("<");
    break;
  case Op::Le:
    nary("<=");
    break;
  case Op::Gt:
    nary(">");
    break;
  case Op::Ge:
    nary(">=");
    break;
  case Op::Not:
    nary("not");
    break;
  case Op::And:
    nary("and");
    break;
  case Op::Or:
    nary("or");
    break;
  case Op::Implies:
    nary("=>");
    break;
  case Op::Iff:
    nary("=");
    break;
  case Op::Forall:
  case Op::Exists: {
    os << (e->op == Op::Forall ? "(forall (" : "(exists (");
    for (std::size_t i = 0; i < e->binders.size(); ++i)
      os << (i ? " " : "") << "(" << smt_symbol(e->binders[i].name) << " " << smt_sort(e->binders[i].sort) << ")";
    os << ") ";
    emit(os, e->kids[0]);
    os << ")";
    break;
  }
  case Op::HoleRef:
    throw Error("smt: unsubstituted hole ?" + e->name);
  case Op::Labeled:
    emit(os, e->kids[0]);
    break;
  }
}

void collect_apps(const Expr &e, std::map<std::string, std::pair<std::vector<Sort>, Sort>> &out) {
  if (e->op == Op::App) {
    std::vector<Sort> args;
    for (const auto &k : e->kids)
      args.push_back(k->sort);
    out.emplace(e->name, std::make_pair(args, e->sort));
  }
  for (const auto &k : e->kids)
    collect_apps(k, out);
}

} // namespace

std::string smt_term(const Expr &e) {
  std::ostringstream os;
  emit(os, e);
  return os.str();
}

std::string to_smtlib(const Expr &qf, const Signature &sig, const std::vector<SkolemDecl> &skolems) {
  std::ostringstream os;
  std::set<std::string> sorts(sig.sorts.begin(), sig.sorts.end());
  std::function<void(const Expr &)> sort_walk = [&](const Expr &e) {
    if (e->sort.kind == SortKind::Uninterpreted)
      sorts.insert(e->sort.name);
    for (const auto &k : e->kids)
      sort_walk(k);
  };
  sort_walk(qf);
  for (const auto &s : sorts)
    os << "(declare-sort " << smt_symbol(s) << " 0)\n";

  std::map<std::string, std::pair<std::vector<Sort>, Sort>> funs;
  for (const auto &fd : sig.functions)
    funs.emplace(fd.name, std::make_pair(fd.args, fd.result));
  for (const auto &sd : skolems)
    if (!sd.args.empty())
      funs.emplace(sd.name, std::make_pair(sd.args, sd.result));
  collect_apps(qf, funs);
  for (const auto &[name, sig_] : funs) {
    os << "(declare-fun " << smt_symbol(name) << " (";
    for (std::size_t i = 0; i < sig_.first.size(); ++i)
      os << (i ? " " : "") << smt_sort(sig_.first[i]);
    os << ") " << smt_sort(sig_.second) << ")\n";
  }
  std::map<std::string, Sort> consts;
  for (const auto &[n, s] : sig.vars)
    consts.emplace(n, s);
  for (const auto &[n, s] : free_vars(qf))
    consts.emplace(n, s);
  for (const auto &[n, s] : consts)
    if (!funs.count(n))
      os << "(declare-fun " << smt_symbol(n) << " () " << smt_sort(s) << ")\n";
  os << "(assert " << smt_term(qf) << ")\n";
  return os.str();
}

} // namespace npi

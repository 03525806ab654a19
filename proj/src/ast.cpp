#include "npi/ast.hpp"

#include <algorithm>
#include <functional>

namespace npi {

std::string Sort::str() const {
  switch (kind) {
  case SortKind::Int:
    return "Int";
  case SortKind::Bool:
    return "Bool";
  case SortKind::Array:
    return "[Int]Int";
  case SortKind::Uninterpreted:
    return name;
  }
  return "?";
}

namespace {

Expr make(Node n) { return std::make_shared<const Node>(std::move(n)); }

Node node(Op op, Sort sort) {
  Node n;
  n.op = op;
  n.sort = std::move(sort);
  return n;
}

void require_sort(const Expr &e, const Sort &s, const char *ctx) {
  if (!(e->sort == s))
    throw SortError(std::string(ctx) + ": expected " + s.str() + ", got " + e->sort.str());
}

} // namespace

Expr mk_var(std::string name, Sort sort) {
  Node n = node(Op::Var, std::move(sort));
  n.name = std::move(name);
  return make(std::move(n));
}

Expr mk_int(std::int64_t v) {
  Node n = node(Op::IntLit, Sort::integer());
  n.value = v;
  return make(std::move(n));
}

Expr mk_bool(bool b) {
  Node n = node(Op::BoolLit, Sort::boolean());
  n.value = b ? 1 : 0;
  return make(std::move(n));
}

Expr mk_true() {
  static const Expr t = mk_bool(true);
  return t;
}
Expr mk_false() {
  static const Expr f = mk_bool(false);
  return f;
}

Expr mk_neg(Expr t) {
  require_sort(t, Sort::integer(), "negation");
  Node n = node(Op::Neg, Sort::integer());
  n.kids = {std::move(t)};
  return make(std::move(n));
}

Expr mk_add(Expr a, Expr b) {
  require_sort(a, Sort::integer(), "+");
  require_sort(b, Sort::integer(), "+");
  Node n = node(Op::Add, Sort::integer());
  n.kids = {std::move(a), std::move(b)};
  return make(std::move(n));
}

Expr mk_sub(Expr a, Expr b) {
  require_sort(a, Sort::integer(), "-");
  require_sort(b, Sort::integer(), "-");
  Node n = node(Op::Sub, Sort::integer());
  n.kids = {std::move(a), std::move(b)};
  return make(std::move(n));
}

Expr mk_mul(std::int64_t coeff, Expr t) {
  require_sort(t, Sort::integer(), "*");
  Node n = node(Op::Mul, Sort::integer());
  n.value = coeff;
  n.kids = {std::move(t)};
  return make(std::move(n));
}

Expr mk_app(std::string fn, std::vector<Expr> args, Sort result) {
  Node n = node(Op::App, std::move(result));
  n.name = std::move(fn);
  n.kids = std::move(args);
  return make(std::move(n));
}

Expr mk_select(Expr arr, Expr idx) {
  require_sort(arr, Sort::array(), "array select");
  require_sort(idx, Sort::integer(), "array index");
  Node n = node(Op::Select, Sort::integer());
  n.kids = {std::move(arr), std::move(idx)};
  return make(std::move(n));
}

Expr mk_store(Expr arr, Expr idx, Expr val) {
  require_sort(arr, Sort::array(), "array store");
  require_sort(idx, Sort::integer(), "array index");
  require_sort(val, Sort::integer(), "array element");
  Node n = node(Op::Store, Sort::array());
  n.kids = {std::move(arr), std::move(idx), std::move(val)};
  return make(std::move(n));
}

Expr mk_ite(Expr c, Expr t, Expr e) {
  require_sort(c, Sort::boolean(), "ite condition");
  if (!(t->sort == e->sort))
    throw SortError("ite branches differ: " + t->sort.str() + " vs " + e->sort.str());
  Node n = node(Op::Ite, t->sort);
  n.kids = {std::move(c), std::move(t), std::move(e)};
  return make(std::move(n));
}

bool is_comparison(Op op) {
  switch (op) {
  case Op::Eq:
  case Op::Ne:
  case Op::Lt:
  case Op::Le:
  case Op::Gt:
  case Op::Ge:
    return true;
  default:
    return false;
  }
}

Expr mk_cmp(Op op, Expr a, Expr b) {
  if (!is_comparison(op))
    throw Error("mk_cmp: not a comparison");
  if (op == Op::Eq || op == Op::Ne) {
    if (!(a->sort == b->sort))
      throw SortError("comparison of " + a->sort.str() + " with " + b->sort.str());
  } else {
    require_sort(a, Sort::integer(), "ordering");
    require_sort(b, Sort::integer(), "ordering");
  }
  Node n = node(op, Sort::boolean());
  n.kids = {std::move(a), std::move(b)};
  return make(std::move(n));
}

Expr mk_eq(Expr a, Expr b) { return mk_cmp(Op::Eq, std::move(a), std::move(b)); }

Expr mk_not(Expr f) {
  require_sort(f, Sort::boolean(), "!");
  if (f->op == Op::BoolLit)
    return mk_bool(f->value == 0);
  Node n = node(Op::Not, Sort::boolean());
  n.kids = {std::move(f)};
  return make(std::move(n));
}

Expr mk_and(std::vector<Expr> fs) {
  std::vector<Expr> out;
  for (auto &f : fs) {
    require_sort(f, Sort::boolean(), "&&");
    if (f->op == Op::BoolLit) {
      if (f->value == 0)
        return mk_false();
      continue;
    }
    if (f->op == Op::And)
      out.insert(out.end(), f->kids.begin(), f->kids.end());
    else
      out.push_back(std::move(f));
  }
  if (out.empty())
    return mk_true();
  if (out.size() == 1)
    return out.front();
  Node n = node(Op::And, Sort::boolean());
  n.kids = std::move(out);
  return make(std::move(n));
}

Expr mk_and(Expr a, Expr b) { return mk_and(std::vector<Expr>{std::move(a), std::move(b)}); }

Expr mk_or(std::vector<Expr> fs) {
  std::vector<Expr> out;
  for (auto &f : fs) {
    require_sort(f, Sort::boolean(), "||");
    if (f->op == Op::BoolLit) {
      if (f->value != 0)
        return mk_true();
      continue;
    }
    if (f->op == Op::Or)
      out.insert(out.end(), f->kids.begin(), f->kids.end());
    else
      out.push_back(std::move(f));
  }
  if (out.empty())
    return mk_false();
  if (out.size() == 1)
    return out.front();
  Node n = node(Op::Or, Sort::boolean());
  n.kids = std::move(out);
  return make(std::move(n));
}

Expr mk_or(Expr a, Expr b) { return mk_or(std::vector<Expr>{std::move(a), std::move(b)}); }

Expr mk_implies(Expr a, Expr b) {
  require_sort(a, Sort::boolean(), "==>");
  require_sort(b, Sort::boolean(), "==>");
  Node n = node(Op::Implies, Sort::boolean());
  n.kids = {std::move(a), std::move(b)};
  return make(std::move(n));
}

Expr mk_iff(Expr a, Expr b) {
  require_sort(a, Sort::boolean(), "<==>");
  require_sort(b, Sort::boolean(), "<==>");
  Node n = node(Op::Iff, Sort::boolean());
  n.kids = {std::move(a), std::move(b)};
  return make(std::move(n));
}

Expr mk_forall(std::vector<Binder> bs, Expr body, std::vector<Expr> triggers) {
  require_sort(body, Sort::boolean(), "forall body");
  if (bs.empty())
    return body;
  Node n = node(Op::Forall, Sort::boolean());
  n.binders = std::move(bs);
  n.kids = {std::move(body)};
  n.triggers = std::move(triggers);
  return make(std::move(n));
}

Expr mk_exists(std::vector<Binder> bs, Expr body) {
  require_sort(body, Sort::boolean(), "exists body");
  if (bs.empty())
    return body;
  Node n = node(Op::Exists, Sort::boolean());
  n.binders = std::move(bs);
  n.kids = {std::move(body)};
  return make(std::move(n));
}

Expr mk_hole(std::string hole) {
  Node n = node(Op::HoleRef, Sort::boolean());
  n.name = std::move(hole);
  return make(std::move(n));
}

Expr mk_labeled(std::string label, Expr body) {
  Node n = node(Op::Labeled, body->sort);
  n.name = std::move(label);
  n.kids = {std::move(body)};
  return make(std::move(n));
}

Expr with_kids(const Expr &e, std::vector<Expr> kids) {
  Node n = *e;
  n.kids = std::move(kids);
  return make(std::move(n));
}

bool is_formula(const Expr &e) { return e->sort.is_bool(); }

bool is_quantifier(const Expr &e) { return e->op == Op::Forall || e->op == Op::Exists; }

bool has_quantifier(const Expr &e) {
  if (is_quantifier(e))
    return true;
  return std::any_of(e->kids.begin(), e->kids.end(), [](const Expr &k) { return has_quantifier(k); });
}

bool has_hole(const Expr &e) {
  if (e->op == Op::HoleRef)
    return true;
  return std::any_of(e->kids.begin(), e->kids.end(), [](const Expr &k) { return has_hole(k); });
}

void collect_holes(const Expr &e, std::set<std::string> &out) {
  if (e->op == Op::HoleRef)
    out.insert(e->name);
  for (const auto &k : e->kids)
    collect_holes(k, out);
}

namespace {

void free_vars_rec(const Expr &e, std::set<std::string> &bound, std::map<std::string, Sort> &out) {
  if (e->op == Op::Var) {
    if (!bound.count(e->name))
      out.emplace(e->name, e->sort);
    return;
  }
  if (is_quantifier(e)) {
    std::vector<std::string> added;
    for (const auto &b : e->binders)
      if (bound.insert(b.name).second)
        added.push_back(b.name);
    for (const auto &k : e->kids)
      free_vars_rec(k, bound, out);
    for (const auto &t : e->triggers)
      free_vars_rec(t, bound, out);
    for (const auto &n : added)
      bound.erase(n);
    return;
  }
  for (const auto &k : e->kids)
    free_vars_rec(k, bound, out);
}

} // namespace

std::map<std::string, Sort> free_vars(const Expr &e) {
  std::set<std::string> bound;
  std::map<std::string, Sort> out;
  free_vars_rec(e, bound, out);
  return out;
}

void collect_int_literals(const Expr &e, std::set<std::int64_t> &out) {
  if (e->op == Op::IntLit)
    out.insert(e->value);
  for (const auto &k : e->kids)
    collect_int_literals(k, out);
  for (const auto &t : e->triggers)
    collect_int_literals(t, out);
}

int compare(const Expr &a, const Expr &b) {
  if (a.get() == b.get())
    return 0;
  if (a->op != b->op)
    return a->op < b->op ? -1 : 1;
  if (a->sort != b->sort)
    return a->sort < b->sort ? -1 : 1;
  if (a->value != b->value)
    return a->value < b->value ? -1 : 1;
  if (int c = a->name.compare(b->name))
    return c < 0 ? -1 : 1;
  if (a->binders.size() != b->binders.size())
    return a->binders.size() < b->binders.size() ? -1 : 1;
  for (std::size_t i = 0; i < a->binders.size(); ++i) {
    if (int c = a->binders[i].name.compare(b->binders[i].name))
      return c < 0 ? -1 : 1;
    if (a->binders[i].sort != b->binders[i].sort)
      return a->binders[i].sort < b->binders[i].sort ? -1 : 1;
  }
  if (a->kids.size() != b->kids.size())
    return a->kids.size() < b->kids.size() ? -1 : 1;
  for (std::size_t i = 0; i < a->kids.size(); ++i)
    if (int c = compare(a->kids[i], b->kids[i]))
      return c;
  if (a->triggers.size() != b->triggers.size())
    return a->triggers.size() < b->triggers.size() ? -1 : 1;
  for (std::size_t i = 0; i < a->triggers.size(); ++i)
    if (int c = compare(a->triggers[i], b->triggers[i]))
      return c;
  return 0;
}

bool equal(const Expr &a, const Expr &b) { return compare(a, b) == 0; }

namespace {

std::string fresh_name(const std::string &base, const std::set<std::string> &avoid) {
  for (int i = 1;; ++i) {
    std::string cand = base + "_" + std::to_string(i);
    if (!avoid.count(cand))
      return cand;
  }
}

Expr subst_rec(const Expr &e, const std::map<std::string, Expr> &sub) {
  if (sub.empty())
    return e;
  switch (e->op) {
  case Op::Var: {
    auto it = sub.find(e->name);
    return it == sub.end() ? e : it->second;
  }
  case Op::Forall:
  case Op::Exists: {
    std::map<std::string, Expr> inner = sub;
    for (const auto &b : e->binders)
      inner.erase(b.name);
    if (inner.empty())
      return e;
    // Names that would be captured: free in a replacement term.
    std::set<std::string> repl_free;
    for (const auto &[k, v] : inner) {
      (void)k;
      for (const auto &[n, s] : free_vars(v)) {
        (void)s;
        repl_free.insert(n);
      }
    }
    std::vector<Binder> binders = e->binders;
    std::set<std::string> avoid = repl_free;
    for (const auto &[n, s] : free_vars(e->kids[0])) {
      (void)s;
      avoid.insert(n);
    }
    for (const auto &b : binders)
      avoid.insert(b.name);
    for (auto &b : binders) {
      if (repl_free.count(b.name)) {
        std::string nn = fresh_name(b.name, avoid);
        avoid.insert(nn);
        inner[b.name] = mk_var(nn, b.sort);
        b.name = nn;
      }
    }
    Node n = *e;
    n.binders = std::move(binders);
    n.kids = {subst_rec(e->kids[0], inner)};
    std::vector<Expr> trig;
    for (const auto &t : e->triggers)
      trig.push_back(subst_rec(t, inner));
    n.triggers = std::move(trig);
    return std::make_shared<const Node>(std::move(n));
  }
  default:
    break;
  }
  if (e->kids.empty())
    return e;
  std::vector<Expr> kids;
  kids.reserve(e->kids.size());
  bool changed = false;
  for (const auto &k : e->kids) {
    kids.push_back(subst_rec(k, sub));
    changed = changed || kids.back().get() != k.get();
  }
  return changed ? with_kids(e, std::move(kids)) : e;
}

} // namespace

Expr substitute(const Expr &e, const std::map<std::string, Expr> &sub) { return subst_rec(e, sub); }

Expr strip_labels(const Expr &e) {
  if (e->op == Op::Labeled)
    return strip_labels(e->kids[0]);
  if (e->kids.empty())
    return e;
  std::vector<Expr> kids;
  bool changed = false;
  for (const auto &k : e->kids) {
    kids.push_back(strip_labels(k));
    changed = changed || kids.back().get() != k.get();
  }
  return changed ? with_kids(e, std::move(kids)) : e;
}

std::optional<Sort> Program::var_sort(const std::string &name) const {
  for (const auto &[n, s] : vars)
    if (n == name)
      return s;
  return std::nullopt;
}

const FunDecl *Program::function(const std::string &name) const {
  for (const auto &f : functions)
    if (f.name == name)
      return &f;
  return nullptr;
}

} // namespace npi

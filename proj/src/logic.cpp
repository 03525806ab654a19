#include "npi/logic.hpp"

#include "npi/syntax.hpp"

namespace npi {

Universes universes_of(const PredicateSets &preds) {
  Universes u;
  for (const auto &[h, ps] : preds)
    u[h] = ps.size();
  return u;
}

Expr substitute_holes(const Expr &f, const std::map<HoleId, Expr> &replacement) {
  if (f->op == Op::HoleRef) {
    auto it = replacement.find(f->name);
    if (it == replacement.end())
      throw UnboundHole("hole ?" + f->name + " has no binding");
    return it->second;
  }
  if (f->kids.empty())
    return f;
  std::vector<Expr> kids;
  kids.reserve(f->kids.size());
  bool changed = false;
  for (const auto &k : f->kids) {
    kids.push_back(substitute_holes(k, replacement));
    changed = changed || kids.back().get() != k.get();
  }
  if (!changed)
    return f;
  if (f->op == Op::And)
    return mk_and(std::move(kids));
  return with_kids(f, std::move(kids));
}

Expr substitute_holes(const Expr &f, const ConjunctionMap &candidate, const PredicateSets &preds) {
  std::map<HoleId, Expr> repl;
  for (const auto &[h, c] : candidate) {
    auto it = preds.find(h);
    if (it == preds.end())
      throw UnboundHole("no predicates for hole ?" + h);
    std::vector<Expr> bodies;
    for (auto a : c.atoms)
      bodies.push_back(it->second.at(a).body);
    repl[h] = mk_and(std::move(bodies));
  }
  return substitute_holes(f, repl);
}

namespace {

Op negated_comparison(Op op) {
  switch (op) {
  case Op::Eq:
    return Op::Ne;
  case Op::Ne:
    return Op::Eq;
  case Op::Lt:
    return Op::Ge;
  case Op::Le:
    return Op::Gt;
  case Op::Gt:
    return Op::Le;
  case Op::Ge:
    return Op::Lt;
  default:
    return op;
  }
}

Expr nnf_rec(const Expr &f, bool pos) {
  switch (f->op) {
  case Op::Labeled:
    return mk_labeled(f->name, nnf_rec(f->kids[0], pos));
  case Op::BoolLit:
    return mk_bool((f->value != 0) == pos);
  case Op::Not:
    return nnf_rec(f->kids[0], !pos);
  case Op::And:
  case Op::Or: {
    std::vector<Expr> kids;
    for (const auto &k : f->kids)
      kids.push_back(nnf_rec(k, pos));
    bool conj = (f->op == Op::And) == pos;
    return conj ? mk_and(std::move(kids)) : mk_or(std::move(kids));
  }
  case Op::Implies:
    if (pos)
      return mk_or(nnf_rec(f->kids[0], false), nnf_rec(f->kids[1], true));
    return mk_and(nnf_rec(f->kids[0], true), nnf_rec(f->kids[1], false));
  case Op::Iff: {
    const Expr &a = f->kids[0];
    const Expr &b = f->kids[1];
    if (pos)
      return mk_and(mk_or(nnf_rec(a, false), nnf_rec(b, true)), mk_or(nnf_rec(a, true), nnf_rec(b, false)));
    return mk_or(mk_and(nnf_rec(a, true), nnf_rec(b, false)), mk_and(nnf_rec(a, false), nnf_rec(b, true)));
  }
  case Op::Forall:
    if (pos)
      return mk_forall(f->binders, nnf_rec(f->kids[0], true), f->triggers);
    return mk_exists(f->binders, nnf_rec(f->kids[0], false));
  case Op::Exists:
    if (pos)
      return mk_exists(f->binders, nnf_rec(f->kids[0], true));
    return mk_forall(f->binders, nnf_rec(f->kids[0], false));
  case Op::HoleRef:
    throw UnboundHole("nnf: unsubstituted hole ?" + f->name);
  default:
    if (pos)
      return f;
    if (is_comparison(f->op))
      return mk_cmp(negated_comparison(f->op), f->kids[0], f->kids[1]);
    return mk_not(f);
  }
}

} // namespace

Expr nnf(const Expr &f) { return nnf_rec(f, true); }

std::vector<Expr> conjuncts(const Expr &f) {
  if (f->op == Op::And)
    return f->kids;
  if (f->op == Op::BoolLit && f->value)
    return {};
  return {f};
}

} // namespace npi

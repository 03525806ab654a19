#include "doctest.h"

#include "npi/logic.hpp"
#include "npi/quant.hpp"
#include "npi/syntax.hpp"

using namespace npi;

namespace {

Program scope() {
  return parse_program("var i, N, n0, x: Int;\nvar A: [Int]Int;\nfunction pow2(Int): Int;\n"
                       "procedure p() { }\n");
}

Expr F(const std::string &s) { return parse_expr(s, scope()); }

} // namespace

TEST_CASE("skolemize: existential becomes a constant") {
  std::vector<SkolemDecl> decls;
  Expr f = skolemize(nnf(F("exists y:Int :: y > 0")), &decls);
  CHECK(to_string(f) == "sk0 > 0");
  REQUIRE(decls.size() == 1);
  CHECK(decls[0].args.empty());
}

TEST_CASE("skolemize: existential under a universal becomes a function") {
  std::vector<SkolemDecl> decls;
  Expr f = skolemize(nnf(F("forall y:Int :: exists z:Int :: z > y")), &decls);
  CHECK(to_string(f) == "(forall y:Int :: sk0(y) > y)");
  REQUIRE(decls.size() == 1);
  CHECK(decls[0].args.size() == 1);
}

TEST_CASE("skolemize: quantifier-free input is unchanged") {
  Expr f = F("i < N && x == 3");
  CHECK(equal(skolemize(nnf(f)), nnf(f)));
}

TEST_CASE("skolemize: labels name the symbols, identical existentials share them") {
  Expr body = F("exists y:Int :: y > i");
  Expr f = mk_and(mk_labeled("L.b@post", body), mk_or(mk_labeled("L.b@post", body), F("x > 0")));
  std::vector<SkolemDecl> decls;
  Expr g = skolemize(nnf(f), &decls);
  REQUIRE(decls.size() == 1);
  CHECK(decls[0].name == "L.b@post!y");
}

TEST_CASE("collect_terms: depth 0 is variables, literals and 0") {
  Signature sig;
  Expr f = F("i < N");
  GroundTermPool p = collect_terms(f, 0, sig);
  CHECK(p.of(Sort::integer()).size() == 3); // i, N, 0
  GroundTermPool q = collect_terms(F("7 > 3"), 0, sig);
  CHECK(q.of(Sort::integer()).size() == 3); // 0, 3, 7
}

TEST_CASE("collect_terms: one step adds applications and t-1") {
  Program s = scope();
  Signature sig{s.functions, {}, {}};
  Expr f = F("n0 > 0");
  GroundTermPool p1 = collect_terms(f, 1, sig);
  CHECK(p1.contains(F("pow2(n0)")));
  CHECK(p1.contains(F("n0 - 1")));
  CHECK(p1.contains(F("pow2(0)")));
  GroundTermPool p0 = collect_terms(f, 0, sig);
  for (const auto &[sort, ts] : p0.terms)
    for (const auto &t : ts)
      CHECK(p1.contains(t));
}

TEST_CASE("instantiate: single and double instances, empty pool") {
  Expr ax = F("forall n:Int :: n > 0 ==> pow2(n) == 2 * pow2(n - 1)");
  GroundTermPool pool;
  pool.terms[Sort::integer()].insert(F("n0"));
  std::vector<Instance> log;
  Expr one = instantiate(ax, pool, {}, &log);
  CHECK(to_string(one) == "n0 > 0 ==> pow2(n0) == 2 * pow2(n0 - 1)");
  CHECK(log.size() == 1);
  pool.terms[Sort::integer()].insert(mk_int(0));
  Expr two = instantiate(ax, pool);
  CHECK(two->op == Op::And);
  CHECK(two->kids.size() == 2);
  CHECK(equal(instantiate(ax, GroundTermPool{}), mk_true()));
}

TEST_CASE("instantiate: triggered universal needs its trigger in the base") {
  Program s = parse_program("var w: Int;\nfunction g(Int): Bool;\nprocedure p() { }\n");
  Expr ax = parse_expr("forall x:Int :: {g(x)} g(x)", s);
  GroundTermPool pool;
  pool.terms[Sort::integer()].insert(parse_expr("w", s));
  CHECK(equal(instantiate(ax, pool, {}), mk_true()));
  TriggerBase base;
  base.insert(parse_expr("g(w)", s));
  CHECK(to_string(instantiate(ax, pool, base)) == "g(w)");
}

TEST_CASE("approx of a simple implication") {
  ApproxResult r = approx(F("x > 0 ==> x >= 0"), 1);
  CHECK(to_string(r.qf) == "x > 0 && x < 0");
  ApproxResult r2 = approx(F("true ==> (forall y:Int :: y == y)"), 0);
  CHECK(to_string(r2.qf) == "sk0 != sk0");
}

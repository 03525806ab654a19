#include "doctest.h"

#include <algorithm>

#include "npi/syntax.hpp"
#include "npi/vcgen.hpp"

using namespace npi;

#ifndef NPI_BENCHMARK_DIR
#define NPI_BENCHMARK_DIR "benchmarks"
#endif

namespace {

std::string wp_of(const std::string &decls, const std::string &body, const std::string &post) {
  Program p = parse_program(decls + "\nprocedure p() {\n" + body + "\n}\n");
  return to_string(wp(p.body, parse_expr(post, p)));
}

std::vector<TripleKind> kinds(const std::vector<HoareTriple> &ts) {
  std::vector<TripleKind> out;
  for (const auto &t : ts)
    out.push_back(t.kind);
  return out;
}

PredicateSets single(const Program &p, const HoleId &h, const std::string &body) {
  return {{h, {Predicate{PredicateId{h, 0}, "p0", parse_expr(body, p)}}}};
}

} // namespace

TEST_CASE("wp of assignment substitutes") { CHECK(wp_of("var x: Int;", "x := x + 1;", "x > 0") == "x + 1 > 0"); }

TEST_CASE("wp of assume is an implication") {
  CHECK(wp_of("var x, y: Int;", "assume y > 0;", "x > 0") == "y > 0 ==> x > 0");
}

TEST_CASE("wp of havoc quantifies the fresh value") {
  std::string f = wp_of("var x: Int;", "havoc x;", "x >= 0");
  CHECK(f.rfind("(forall x!h", 0) == 0);
  CHECK(f.find(">= 0") != std::string::npos);
}

TEST_CASE("wp of array assignment uses store") {
  CHECK(wp_of("var A: [Int]Int; var i: Int;", "A[i] := 0;", "A[i] == 0") == "A[i := 0][i] == 0");
}

TEST_CASE("wp respects sequencing") {
  Program p = parse_program("var x, y: Int;\nprocedure p() { x := x + 1; y := x; }\n");
  Expr post = parse_expr("y > 1", p);
  std::vector<StmtPtr> first{p.body[0]}, second{p.body[1]};
  CHECK(equal(wp(p.body, post), wp(first, wp(second, post))));
}

TEST_CASE("loop-free program is a single plain triple") {
  Program p = parse_program("var x: Int;\nprocedure p() requires x > 0; ensures x > 0; { }\n");
  auto ts = cut_loops(p);
  REQUIRE(ts.size() == 1);
  CHECK(ts[0].kind == TripleKind::Plain);
  VC vc = vc_of(p, ts[0], ConjunctionMap{}, PredicateSets{});
  CHECK(to_string(vc.formula) == "x > 0 ==> x > 0");
}

TEST_CASE("a single loop gives pre, body and exit triples") {
  Program p = parse_program("var i, N: Int;\nprocedure p() requires N > 0; ensures i == N;\n"
                            "{ i := 0; while (i < N) invariant ?H; { i := i + 1; } }\n");
  auto ts = checking_order(cut_loops(p));
  CHECK(kinds(ts) == std::vector<TripleKind>{TripleKind::PreToInv, TripleKind::InvToInv, TripleKind::InvToPost});
  CHECK(ts[1].pre_hole == HoleId("H"));
  CHECK(ts[1].post_hole == HoleId("H"));
}

TEST_CASE("inductive step of a counter loop") {
  Program p = parse_program("var i, N: Int;\nprocedure p() { while (i < N) invariant ?H; { i := i + 1; } }\n");
  auto preds = single(p, "H", "i >= 0");
  auto ts = checking_order(cut_loops(p));
  ConjunctionMap cand{{"H", Conjunction{"H", {0}}}};
  const auto &step = *std::find_if(ts.begin(), ts.end(), [](const auto &t) { return t.kind == TripleKind::InvToInv; });
  VC vc = vc_of(p, step, cand, preds);
  CHECK(to_string(vc.formula) == "i >= 0 && i < N ==> i + 1 >= 0");
}

TEST_CASE("the inverse program has a cross-hole exit triple") {
  Program p = parse_program_file(NPI_BENCHMARK_DIR "/inverse.npl");
  auto ts = cut_loops(p);
  CHECK(ts.size() == 4);
  bool cross = std::any_of(ts.begin(), ts.end(), [](const HoareTriple &t) {
    return t.kind == TripleKind::InvToInv && t.pre_hole == HoleId("L") && t.post_hole == HoleId("R");
  });
  CHECK(cross);
}

TEST_CASE("every statement is covered by exactly one triple") {
  Program p = parse_program("var i, j, N: Int;\nprocedure p() {\n  i := 0;\n  while (i < N) invariant ?A; { i := i + 1; }\n"
                            "  j := i;\n  while (j > 0) invariant ?B; { j := j - 1; }\n  i := 1;\n}\n");
  auto ts = cut_loops(p);
  std::size_t stmts = 0;
  for (const auto &t : ts)
    stmts += t.body.size();
  // i := 0 / i := i + 1 / j := i / j := j - 1 / i := 1, plus the loop-condition assumes.
  CHECK(ts.size() == 5);
  CHECK(stmts >= 5);
}

TEST_CASE("loops nested in branches are rejected") {
  Program p = parse_program("var x: Int;\nprocedure p() { if (x > 0) { while (x > 0) invariant ?H; { x := x - 1; } } }\n");
  CHECK_THROWS(cut_loops(p));
}

TEST_CASE("quantified branch conditions are rejected") {
  Program p = parse_program(
      "var A: [Int]Int; var x: Int;\nprocedure p() { while (forall k: Int :: A[k] > 0) invariant ?H; { x := 1; } }\n");
  CHECK_THROWS(cut_loops(p));
}

TEST_CASE("symbolic execution merges branches with ite") {
  Program p = parse_program("var x, y: Int;\nprocedure p() { if (x > 0) { y := 1; } else { y := 2; } }\n");
  auto state = symbolic_post_state(p, p.body);
  CHECK(to_string(state.at("y")) == "ite(x > 0, 1, 2)");
  CHECK(to_string(state.at("x")) == "x");
}

TEST_CASE("asserts become labeled obligations") {
  Program p = parse_program("var x: Int;\nprocedure p() { x := 1; assert x > 0; }\n");
  SymbolicRun run = symbolic_run(p, p.body);
  REQUIRE(run.obligations.size() == 1);
  CHECK(run.obligations[0]->op == Op::Labeled);
  CHECK(run.obligations[0]->name.rfind("assert", 0) == 0);
}

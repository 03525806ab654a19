#include "doctest.h"

#include <filesystem>

#include "npi/logic.hpp"
#include "npi/smt.hpp"
#include "npi/syntax.hpp"

using namespace npi;

#ifndef NPI_BENCHMARK_DIR
#define NPI_BENCHMARK_DIR "benchmarks"
#endif

namespace {

Program scope() { return parse_program("var x, y, z: Int;\nvar A: [Int]Int;\nprocedure p() { }\n"); }

Expr F(const std::string &s) { return parse_expr(s, scope()); }

std::string numeral(int v) { return v < 0 ? "(- " + std::to_string(-v) + ")" : std::to_string(v); }

Model model_of(int x, int y, int z) {
  return Model::parse("(model (define-fun x () Int " + numeral(x) + ") (define-fun y () Int " + numeral(y) +
                      ") (define-fun z () Int " + numeral(z) + "))");
}

bool has_op_above_atoms(const Expr &f, Op op) {
  if (f->op == op)
    return true;
  for (const auto &k : f->kids)
    if (has_op_above_atoms(k, op))
      return true;
  return false;
}

} // namespace

TEST_CASE("expressions print in surface syntax") {
  CHECK(to_string(F("x + 1 <= y")) == "x + 1 <= y");
  CHECK(to_string(F("A[x] == 0 && !(y > z)")) == "A[x] == 0 && !(y > z)");
  CHECK(to_string(F("forall k: Int :: 0 <= k ==> A[k] == 0")) == "(forall k:Int :: 0 <= k ==> A[k] == 0)");
}

TEST_CASE("parse errors carry a position") {
  CHECK_THROWS_AS(parse_program("var x: Int;\nprocedure p() { x := ; }\n"), ParseError);
  CHECK_THROWS_AS(parse_program("procedure p() { y := 1; }\n"), Error);
  CHECK_THROWS_AS(parse_expr("x +", scope()), ParseError);
}

TEST_CASE("every benchmark survives print and re-parse") {
  std::size_t seen = 0;
  for (const auto &entry : std::filesystem::directory_iterator(NPI_BENCHMARK_DIR)) {
    if (entry.path().extension() != ".npl")
      continue;
    ++seen;
    CAPTURE(entry.path().string());
    Program p = parse_program_file(entry.path().string());
    std::string once = to_string(p);
    Program q = parse_program(once);
    CHECK(to_string(q) == once);
    CHECK(q.holes == p.holes);
    CHECK(q.vars.size() == p.vars.size());
  }
  CHECK(seen >= 10);
}

TEST_CASE("pragmas are collected from comments") {
  Program p = parse_program("// depth: 2\n// oracle: ?H x <= 0\nvar x: Int;\nprocedure p() { }\n");
  REQUIRE(p.pragmas.count("depth") == 1);
  CHECK(p.pragmas.find("depth")->second == "2");
  CHECK(p.pragmas.find("oracle")->second == "?H x <= 0");
}

TEST_CASE("nnf flips comparisons and removes implications") {
  CHECK(to_string(nnf(F("!(x >= 0)"))) == "x < 0");
  CHECK(to_string(nnf(F("!(x == y)"))) == "x != y");
  CHECK(to_string(nnf(F("x > 0 ==> y > 0"))) == "x <= 0 || y > 0");
  CHECK(to_string(nnf(F("!(forall k: Int :: A[k] == 0)"))) == "(exists k:Int :: A[k] != 0)");
}

TEST_CASE("nnf preserves truth on every small model") {
  const char *formulas[] = {
      "!(x < y && (y == z || !(x >= z)))",
      "(x > 0 ==> y > 0) ==> !(z != x)",
      "!((x <= y) <==> (y <= z))",
      "!(!(x == 1) || (y < 0 && !(z > 2 ==> x < z)))",
  };
  for (const char *text : formulas) {
    Expr f = F(text), g = nnf(f);
    CAPTURE(text);
    CHECK_FALSE(has_op_above_atoms(g, Op::Implies));
    for (int x = -1; x <= 2; ++x)
      for (int y = -1; y <= 2; ++y)
        for (int z = -1; z <= 2; ++z) {
          Model m = model_of(x, y, z);
          CHECK(m.holds(f) == m.holds(g));
        }
  }
}

TEST_CASE("conjuncts split only a top-level conjunction") {
  CHECK(conjuncts(F("x > 0 && y > 0 && z > 0")).size() == 3);
  CHECK(conjuncts(F("x > 0 || y > 0")).size() == 1);
}

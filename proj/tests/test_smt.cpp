#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "npi/quant.hpp"
#include "npi/smt.hpp"
#include "npi/syntax.hpp"

using namespace npi;

namespace {

Program scope() {
  return parse_program("type Loc;\nvar x, y, i: Int;\nvar A, B: [Int]Int;\nvar l: Loc;\n"
                       "function f(Int): Int;\nfunction g(Loc): Int;\nprocedure p() { }\n");
}

Expr F(const std::string &s) { return parse_expr(s, scope()); }

Signature sig() {
  Program s = scope();
  return Signature{s.functions, s.vars, s.sorts};
}

// Writes an executable shell script that ignores its input and prints `out`.
std::string fake_solver(const std::string &name, const std::string &body) {
  auto dir = std::filesystem::temp_directory_path() / "npi_fake_solvers";
  std::filesystem::create_directories(dir);
  auto path = dir / name;
  std::ofstream(path) << "#!/bin/sh\ncat > /dev/null\n" << body << "\n";
  std::filesystem::permissions(path, std::filesystem::perms::owner_all);
  return path.string();
}

} // namespace

TEST_CASE("model parsing: constants, functions, arrays") {
  Model m = Model::parse("(\n (define-fun x () Int 3)\n (define-fun y () Int (- 4))\n"
                         " (define-fun f ((x!0 Int)) Int (ite (= x!0 1) 10 (+ x!0 1)))\n"
                         " (define-fun A () (Array Int Int) (store ((as const (Array Int Int)) 7) 2 5))\n"
                         ")");
  CHECK(m.eval(F("x")).i == 3);
  CHECK(m.eval(F("y")).i == -4);
  CHECK(m.eval(F("f(1)")).i == 10);
  CHECK(m.eval(F("f(x)")).i == 4);
  CHECK(m.eval(F("A[2]")).i == 5);
  CHECK(m.eval(F("A[9]")).i == 7);
  CHECK(m.holds(F("A[x := 1][3] == 1")));
  CHECK(m.eval(F("i")).i == 0); // missing symbol: default
}

TEST_CASE("model parsing: lambda, as-array, let, uninterpreted elements") {
  Model m = Model::parse("((define-fun A () (Array Int Int) (lambda ((x!1 Int)) (ite (= x!1 0) 1 (* 2 x!1))))\n"
                         " (define-fun B () (Array Int Int) (_ as-array k!0))\n"
                         " (define-fun k!0 ((x!0 Int)) Int (let ((a!1 (+ x!0 1))) (* a!1 a!1)))\n"
                         " (declare-fun Loc!val!0 () Loc)\n"
                         " (define-fun l () Loc Loc!val!0)\n"
                         " (define-fun g ((x!0 Loc)) Int (ite (= x!0 Loc!val!0) 42 0)))");
  CHECK(m.eval(F("A[0]")).i == 1);
  CHECK(m.eval(F("A[5]")).i == 10);
  CHECK(m.eval(F("A[i := 3][0]")).i == 3);
  CHECK(m.eval(F("B[2]")).i == 9);
  CHECK(m.eval(F("g(l)")).i == 42);
}

TEST_CASE("solver: unsat query is Proved, sat query is Refuted with a faithful model") {
  SmtSolver s;
  auto r1 = s.check(F("x > 0 && x < 0"), sig(), {});
  CHECK(r1.outcome == SolverOutcome::Proved);
  Expr q = F("x > 2 && A[x] == f(y) + 1 && f(y) > 5 && g(l) == x");
  auto r2 = s.check(q, sig(), {});
  REQUIRE(r2.outcome == SolverOutcome::Refuted);
  CHECK(r2.model.holds(q));
}

TEST_CASE("solver: unknown, garbage, timeout and unfaithful models are engine failures") {
  Expr q = F("x > 0");
  auto run = [&](const std::string &path, double timeout = 5.0) {
    return SmtSolver(SolverConfig{path, timeout}).check(q, sig(), {});
  };
  auto unknown = run(fake_solver("unknown.sh", "echo unknown"));
  CHECK(unknown.outcome == SolverOutcome::EngineFailure);
  CHECK(unknown.reason.find("unknown") != std::string::npos);
  CHECK(run(fake_solver("garbage.sh", "echo '(((('")).outcome == SolverOutcome::EngineFailure);
  auto slow = run(fake_solver("slow.sh", "sleep 5; echo unsat"), 0.3);
  CHECK(slow.outcome == SolverOutcome::EngineFailure);
  CHECK(slow.reason.find("timed out") != std::string::npos);
  auto liar = run(fake_solver("liar.sh", "echo sat; echo '((define-fun x () Int (- 1)))'"));
  CHECK(liar.outcome == SolverOutcome::EngineFailure);
  CHECK(liar.reason.find("model") != std::string::npos);
  CHECK(run("/nonexistent/solver").outcome == SolverOutcome::EngineFailure);
}

TEST_CASE("solver path: explicit, then NPI_SOLVER, then z3") {
  CHECK(resolve_solver_path("/opt/x") == "/opt/x");
  setenv("NPI_SOLVER", "/opt/envsolver", 1);
  CHECK(resolve_solver_path("") == "/opt/envsolver");
  unsetenv("NPI_SOLVER");
  CHECK(resolve_solver_path("") == "z3");
}

TEST_CASE("approx + solver: a quantified axiom hypothesis proves the goal") {
  Expr vc = F("(forall n:Int :: f(n) > n) ==> f(x) > x - 1");
  auto r = approx(vc, 0, sig());
  CHECK(SmtSolver().check(r.qf, sig(), r.skolems).outcome == SolverOutcome::Proved);
  Expr bad = F("(forall n:Int :: f(n) > n) ==> f(x) > x + 1");
  auto r2 = approx(bad, 0, sig());
  auto res = SmtSolver().check(r2.qf, sig(), r2.skolems);
  REQUIRE(res.outcome == SolverOutcome::Refuted);
  CHECK(res.model.holds(r2.qf));
}

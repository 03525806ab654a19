#include "doctest.h"

#include "npi/driver.hpp"
#include "npi/syntax.hpp"
#include "npi/teacher.hpp"

using namespace npi;

#ifndef NPI_BENCHMARK_DIR
#define NPI_BENCHMARK_DIR "benchmarks"
#endif

namespace {

Valuation val(const HoleId &h, const std::string &bits) {
  Valuation v{h, {}};
  for (char c : bits)
    v.bits.push_back(c == 't');
  return v;
}

GhostReadout readout(std::optional<Valuation> pre, std::optional<Valuation> post) {
  GhostReadout r;
  r.pre = std::move(pre);
  r.post = std::move(post);
  return r;
}

} // namespace

TEST_CASE("weakening collects the predicates false after the body") {
  CHECK(extract_weakening(readout({}, val("H", "tff"))) == DisjunctionConstraint{"H", {1, 2}});
  CHECK(extract_weakening(readout({}, val("H", "fff"))) == DisjunctionConstraint{"H", {0, 1, 2}});
  CHECK_THROWS_AS(extract_weakening(readout({}, val("H", "ttt"))), EngineMismatch);
  CHECK_THROWS_AS(extract_weakening(readout(val("H", "t"), {})), EngineMismatch);
}

TEST_CASE("strengthening collects the predicates true before the body") {
  CHECK(extract_strengthening(readout(val("H", "tt"), {})) == ConjunctionConstraint{"H", {0, 1}});
  CHECK(extract_strengthening(readout(val("H", "ff"), {})) == ConjunctionConstraint{"H", {}});
  CHECK(extract_strengthening(readout(val("L", "tff"), {})) == ConjunctionConstraint{"L", {0}});
}

TEST_CASE("inductivity pairs both sides, across holes") {
  CHECK(extract_inductivity(readout(val("L", "tff"), val("R", "tft"))) ==
        InductivityConstraint{{"L", {0}}, {"R", {1}}});
  CHECK(extract_inductivity(readout(val("H", "ff"), val("H", "ff"))) ==
        InductivityConstraint{{"H", {}}, {"H", {0, 1}}});
  CHECK(extract_inductivity(readout(val("H", "t"), val("H", "f"))) == InductivityConstraint{{"H", {0}}, {"H", {0}}});
  CHECK_THROWS_AS(extract_inductivity(readout(val("H", "t"), val("H", "t"))), EngineMismatch);
}

TEST_CASE("inverse: the exit triple rejects b1 / b2 with the expected readout") {
  Program p = parse_program_file(NPI_BENCHMARK_DIR "/inverse.npl");
  PredicateSets preds = gen_predicates(p);
  REQUIRE(preds.at("L").size() == 3);
  REQUIRE(preds.at("R").size() == 3);
  ConjunctionMap cand{{"L", Conjunction{"L", {0}}}, {"R", Conjunction{"R", {1, 2}}}};
  TeacherVerdict v = check_conjecture(p, cand, preds, 1);
  REQUIRE(v.kind == TeacherVerdict::Kind::Rejected);
  REQUIRE(v.constraint);
  CHECK(*v.constraint == Constraint{InductivityConstraint{{"L", {0}}, {"R", {1}}}});
  REQUIRE(v.readout.pre);
  REQUIRE(v.readout.post);
  CHECK(*v.readout.pre == val("L", "tff"));
  CHECK(*v.readout.post == val("R", "tft"));
  REQUIRE(v.triple);
  CHECK(v.triple->kind == TripleKind::InvToInv);
}

TEST_CASE("inverse: b1 / b3 verifies") {
  Program p = parse_program_file(NPI_BENCHMARK_DIR "/inverse.npl");
  PredicateSets preds = gen_predicates(p);
  ConjunctionMap cand{{"L", Conjunction{"L", {0}}}, {"R", Conjunction{"R", {2}}}};
  CHECK(check_conjecture(p, cand, preds, 1).kind == TeacherVerdict::Kind::Verified);
}

TEST_CASE("a false precondition verifies the hole-free program") {
  Program q = parse_program("var x: Int;\nprocedure p() requires false; ensures x == 1; { x := 0; }\n");
  CHECK(check_conjecture(q, {}, {}, 0).kind == TeacherVerdict::Kind::Verified);
}

TEST_CASE("a failing hole-free triple is a plain failure") {
  Program p = parse_program("var x: Int;\nprocedure p() ensures x == 1; { x := 0; }\n");
  TeacherVerdict v = check_conjecture(p, {}, {}, 0);
  CHECK(v.kind == TeacherVerdict::Kind::PlainFailure);
}

TEST_CASE("emitted constraints are refuted again on re-check") {
  Program p = parse_program_file(NPI_BENCHMARK_DIR "/counter.npl");
  PredicateSets preds = gen_predicates(p);
  TeacherConfig cfg;
  cfg.depth = 0;
  Teacher t(p, preds, cfg);
  ConjunctionMap cand;
  for (const auto &[h, ps] : preds)
    cand[h] = full_conjunction(h, ps.size());
  TeacherVerdict v = t.check(cand);
  REQUIRE(v.kind == TeacherVerdict::Kind::Rejected);
  CHECK_FALSE(satisfies(cand, *v.constraint));
  CHECK(t.recheck(*v.triple, *v.constraint) == SolverOutcome::Refuted);
}

TEST_CASE("constraint lines") {
  CHECK(to_line(Constraint{DisjunctionConstraint{"H", {1}}}) == "W H p1");
  CHECK(to_line(Constraint{ConjunctionConstraint{"H", {0, 2}}}) == "S H p0&p2");
}

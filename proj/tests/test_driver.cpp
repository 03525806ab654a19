#include "doctest.h"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "npi/driver.hpp"
#include "npi/syntax.hpp"

using namespace npi;

#ifndef NPI_BENCHMARK_DIR
#define NPI_BENCHMARK_DIR "benchmarks"
#endif

namespace {

std::vector<std::string> names(const PredicateSets &preds, const HoleId &h) {
  std::vector<std::string> out;
  for (const auto &p : preds.at(h))
    out.push_back(to_string(p.body));
  return out;
}

bool contains(const std::vector<std::string> &v, const std::string &s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

const char *kCounter = "var i, N: Int;\n"
                       "procedure p() requires i == 0 && N > 0; ensures i == N;\n"
                       "{ while (i < N) invariant ?H; { i := i + 1; } }\n";

} // namespace

TEST_CASE("octagons cover every sign combination") {
  Program p = parse_program(kCounter);
  auto got = names(gen_predicates(p), "H");
  for (const char *s : {"i <= 0", "-i <= 0", "i - N <= 0", "i + N <= 0", "-i + N <= 0", "-i - N <= 0", "N <= 0"})
    CHECK_MESSAGE(contains(got, s), s);
  CHECK(contains(got, "i == N")); // harvested from ensures
  CHECK(contains(got, "N == i")); // and its renaming
}

TEST_CASE("generated predicates are deduplicated and deterministic") {
  Program p = parse_program(kCounter);
  auto a = names(gen_predicates(p), "H"), b = names(gen_predicates(p), "H");
  CHECK(a == b);
  auto sorted = a;
  std::sort(sorted.begin(), sorted.end());
  CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
}

TEST_CASE("pinned predicates are used exactly") {
  Program p = parse_program("var x: Int;\npredicate ?H q : x > 0;\n"
                            "procedure p() { while (x > 0) invariant ?H; { x := x - 1; } }\n");
  CHECK(names(gen_predicates(p), "H") == std::vector<std::string>{"x > 0"});
}

TEST_CASE("negation closure adds the negation of every predicate") {
  Program p = parse_program(kCounter);
  auto plain = names(gen_predicates(p), "H");
  PredicateOptions neg;
  neg.negation_closure = true;
  auto closed = names(gen_predicates(p, neg), "H");
  CHECK(contains(closed, "i != N"));
  CHECK(contains(closed, "i - N > 0"));
  CHECK(closed.size() > plain.size());
  CHECK(closed.size() <= 2 * plain.size());
}

TEST_CASE("inverse: the loop hole includes the pinned b1") {
  Program p = parse_program_file(NPI_BENCHMARK_DIR "/inverse.npl");
  auto preds = gen_predicates(p);
  CHECK(preds.at("L")[0].name == "b1");
  CHECK(preds.at("R")[2].name == "b3");
}

TEST_CASE("oracle pragmas resolve to predicate indices") {
  Program p = parse_program_file(NPI_BENCHMARK_DIR "/inverse.npl");
  auto preds = gen_predicates(p);
  auto oracle = resolve_oracle(p, preds);
  REQUIRE(oracle);
  CHECK(oracle->at("L").atoms == std::set<std::size_t>{0});
  CHECK(oracle->at("R").atoms == std::set<std::size_t>{2});
  Program q = parse_program(std::string("// oracle: ?H i >= 17\n") + kCounter);
  CHECK_THROWS(resolve_oracle(q, gen_predicates(q)));
}

TEST_CASE("counter loop synthesizes a verified invariant") {
  Program p = parse_program(kCounter);
  SynthesisConfig cfg;
  cfg.check_normality = true;
  SynthesisReport r = synthesize(p, cfg, "counter");
  REQUIRE(r.outcome == Outcome::Invariant);
  CHECK(r.final_verdict.kind == TeacherVerdict::Kind::Verified);
  CHECK(r.rounds <= r.max_rounds);
  CHECK(r.max_rounds == static_cast<int>(r.predicate_count) + 1);
  CHECK(r.normality_violations.empty());
  CHECK(r.progress_violations.empty());
  auto inv = names(r.predicates, "H");
  std::vector<std::string> chosen;
  for (auto i : r.invariant->at("H").atoms)
    chosen.push_back(inv[i]);
  CHECK(contains(chosen, "i - N <= 0"));
  CHECK(contains(chosen, "-i <= 0"));
}

TEST_CASE("an unsatisfiable postcondition never yields an invariant") {
  Program p = parse_program("var i, N: Int;\nprocedure p() requires N > 0; ensures false;\n"
                            "{ i := 0; while (i < N) invariant ?H; { i := i + 1; } }\n");
  SynthesisReport r = synthesize(p, {}, "false-post");
  CHECK(r.outcome != Outcome::Invariant);
  CHECK((r.outcome == Outcome::NoConsistentInvariant || r.outcome == Outcome::Unprovable));
}

TEST_CASE("round cap is honored") {
  Program p = parse_program(kCounter);
  SynthesisConfig cfg;
  cfg.max_rounds = 1;
  SynthesisReport r = synthesize(p, cfg, "capped");
  CHECK(r.outcome == Outcome::RoundLimit);
  CHECK(r.rounds == 1);
}

TEST_CASE("outcomes map to exit codes") {
  CHECK(exit_code(Outcome::Invariant) == 0);
  CHECK(exit_code(Outcome::NoConsistentInvariant) == 1);
  CHECK(exit_code(Outcome::Unprovable) == 2);
  CHECK(exit_code(Outcome::RoundLimit) == 3);
  CHECK(exit_code(Outcome::EngineFailure) == 4);
}

TEST_CASE("an empty directory gives an empty table") {
  auto dir = std::filesystem::temp_directory_path() / "npi-empty-suite";
  std::filesystem::create_directories(dir);
  auto rows = run_suite(dir.string(), {});
  CHECK(rows.empty());
  CHECK(nlohmann::json::parse(stats_json(rows)).empty());
  std::filesystem::remove_all(dir);
}

TEST_CASE("stats json carries the table columns") {
  SuiteRow row{"sum", 45, 5, 20, 12.5, "Invariant", ""};
  auto j = nlohmann::json::parse(stats_json(row));
  for (const char *k : {"name", "predicates", "rounds", "invariant_size", "time_ms", "outcome"})
    CHECK_MESSAGE(j.contains(k), k);
  CHECK(j["rounds"] == 5);
  CHECK(stats_text({row}).find("sum") != std::string::npos);
}

TEST_CASE("files that fail to parse become error rows") {
  auto dir = std::filesystem::temp_directory_path() / "npi-bad-suite";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "broken.npl") << "procedure p( {";
  }
  auto rows = run_suite(dir.string(), {});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].outcome == "Error");
  std::filesystem::remove_all(dir);
}

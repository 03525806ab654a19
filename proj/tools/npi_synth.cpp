// npi-synth: invariant synthesis from non-provability information.
//
//   npi-synth verify <file.npl> [options]
//   npi-synth suite <dir> [options]
//
// Exit codes: 0 Invariant, 1 NoConsistentInvariant, 2 Unprovable,
// 3 RoundLimit, 4 EngineFailure, 5 usage or parse error.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "npi/driver.hpp"
#include "npi/syntax.hpp"

namespace {

constexpr int kUsageError = 5;

struct Options {
  std::optional<int> depth;
  std::string solver;
  double solver_timeout = 10.0;
  std::optional<int> max_rounds;
  bool neg_close = false;
  bool array_octagons = false;
  std::string dump_sample;
  bool dump_vcs = false;
  bool dump_approx = false;
  bool trace = false;
  bool check_normality = false;
  std::string stats;
};

void add_common(CLI::App *cmd, Options &o) {
  cmd->add_option("--depth", o.depth, "Instantiation depth (default: file pragma, then 1)")->check(CLI::NonNegativeNumber);
  cmd->add_option("--solver", o.solver, "SMT solver executable (default: $NPI_SOLVER, then z3)");
  cmd->add_option("--solver-timeout", o.solver_timeout, "Per-query timeout in seconds")->check(CLI::PositiveNumber);
  cmd->add_option("--max-rounds", o.max_rounds, "Round cap (default: number of predicates + 1)")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--neg-close", o.neg_close, "Add the negation of every generated predicate");
  cmd->add_flag("--array-octagons", o.array_octagons, "Also generate octagons over array reads");
  cmd->add_flag("--dump-vcs", o.dump_vcs, "Print every verification condition to stderr");
  cmd->add_flag("--dump-approx", o.dump_approx, "Print every solver query (SMT-LIB) to stderr");
  cmd->add_flag("--trace", o.trace, "Print one line per triple check to stderr");
  cmd->add_flag("--check-normality", o.check_normality, "Re-check every emitted constraint");
  cmd->add_option("--stats", o.stats, "Print statistics")->check(CLI::IsMember({"json", "text"}));
}

npi::SynthesisConfig config_of(const Options &o) {
  npi::SynthesisConfig cfg;
  cfg.depth = o.depth;
  cfg.max_rounds = o.max_rounds;
  cfg.solver.path = o.solver;
  cfg.solver.timeout_s = o.solver_timeout;
  cfg.predicates.negation_closure = o.neg_close;
  cfg.predicates.array_octagons = o.array_octagons;
  cfg.check_normality = o.check_normality;
  if (o.trace)
    cfg.trace = &std::cerr;
  if (o.dump_vcs)
    cfg.dump_vcs = &std::cerr;
  if (o.dump_approx)
    cfg.dump_approx = &std::cerr;
  return cfg;
}

void print_report(std::ostream &os, const npi::SynthesisReport &r) {
  os << r.name << ": " << npi::to_string(r.outcome) << " after " << r.rounds << " round(s), " << r.predicate_count
     << " predicate(s), " << static_cast<long long>(r.time_ms) << " ms\n";
  if (r.invariant)
    os << r.describe_invariant();
  else if (!r.detail.empty())
    os << r.detail << "\n";
  for (const auto &v : r.normality_violations)
    os << "normality violation: " << v << "\n";
  for (const auto &v : r.honesty_violations)
    os << "honesty violation: " << v << "\n";
  for (const auto &v : r.progress_violations)
    os << "progress violation: " << v << "\n";
}

int verify(const std::string &file, const Options &o) {
  npi::Program prog;
  try {
    prog = npi::parse_program_file(file);
  } catch (const npi::ParseError &e) {
    std::cerr << file << ":" << e.what() << "\n";
    return kUsageError;
  } catch (const npi::Error &e) {
    std::cerr << file << ": " << e.what() << "\n";
    return kUsageError;
  }
  npi::SynthesisReport r = npi::synthesize(prog, config_of(o), std::filesystem::path(file).stem().string());
  if (!o.dump_sample.empty()) {
    std::ofstream out(o.dump_sample);
    if (!out) {
      std::cerr << "cannot write " << o.dump_sample << "\n";
      return kUsageError;
    }
    npi::write_sample(out, r.sample);
  }
  if (o.stats == "json") {
    print_report(std::cerr, r);
    std::cout << npi::stats_json(npi::to_row(r)) << "\n";
  } else {
    print_report(std::cout, r);
    if (o.stats == "text")
      std::cout << npi::stats_text({npi::to_row(r)});
  }
  return npi::exit_code(r.outcome);
}

int suite(const std::string &dir, const Options &o) {
  if (!std::filesystem::is_directory(dir)) {
    std::cerr << dir << ": not a directory\n";
    return kUsageError;
  }
  std::vector<npi::SynthesisReport> reports;
  auto rows = npi::run_suite(dir, config_of(o), &reports);
  if (o.stats == "json")
    std::cout << npi::stats_json(rows) << "\n";
  else
    std::cout << npi::stats_text(rows);
  for (const auto &r : rows)
    if (r.outcome == "Error")
      std::cerr << r.name << ": " << r.detail << "\n";
  for (const auto &r : rows) {
    if (r.outcome == "Error")
      return kUsageError;
    for (int code = 1; code <= 4; ++code)
      if (r.outcome == npi::to_string(static_cast<npi::Outcome>(code)))
        return code;
  }
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Invariant synthesis from non-provability information"};
  app.require_subcommand(1);
  Options o;
  std::string file, dir;

  auto *v = app.add_subcommand("verify", "Synthesize invariants for one program");
  v->add_option("file", file, "Program (.npl)")->required();
  add_common(v, o);
  v->add_option("--dump-sample", o.dump_sample, "Write the final CD-NPI sample to this file");

  auto *s = app.add_subcommand("suite", "Run every .npl program in a directory");
  s->add_option("dir", dir, "Directory of programs")->required();
  add_common(s, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kUsageError;
  }
  if (v->parsed())
    return verify(file, o);
  return suite(dir, o);
}

// Python bindings: sample algebra (Houdini, ICE translation, consistency),
// program parsing, predicate generation and synthesis.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "npi/cdnpi.hpp"
#include "npi/driver.hpp"
#include "npi/ice.hpp"
#include "npi/syntax.hpp"

namespace py = pybind11;
using namespace npi;

namespace {

using PyValuation = std::pair<std::string, std::vector<bool>>;
using PyCandidate = std::map<std::string, std::vector<std::size_t>>;

Valuation to_valuation(const PyValuation &v) { return Valuation{v.first, v.second}; }
PyValuation from_valuation(const Valuation &v) { return {v.hole, v.bits}; }

PyCandidate from_candidate(const ConjunctionMap &m) {
  PyCandidate out;
  for (const auto &[h, c] : m)
    out[h] = std::vector<std::size_t>(c.atoms.begin(), c.atoms.end());
  return out;
}

ConjunctionMap to_candidate(const PyCandidate &m) {
  ConjunctionMap out;
  for (const auto &[h, atoms] : m)
    out[h] = Conjunction{h, std::set<std::size_t>(atoms.begin(), atoms.end())};
  return out;
}

CDNPISample sample_of(const std::string &text) {
  std::istringstream in(text);
  return read_sample(in);
}

std::optional<PyCandidate> houdini(const std::vector<PyValuation> &positives, const std::vector<PyValuation> &negatives,
                                   const std::vector<std::pair<PyValuation, PyValuation>> &implications,
                                   const Universes &universes) {
  ICESample s;
  for (const auto &v : positives)
    s.positives.insert(to_valuation(v));
  for (const auto &v : negatives)
    s.negatives.insert(to_valuation(v));
  for (const auto &[a, b] : implications)
    s.implications.insert({to_valuation(a), to_valuation(b)});
  check_sample(s, universes);
  auto g = houdini_passive(s, universes);
  if (!g)
    return std::nullopt;
  return from_candidate(*g);
}

py::dict ice_of(const std::string &sample_text, const Universes &universes) {
  ICESample s = to_ice(sample_of(sample_text), universes);
  std::vector<PyValuation> pos, neg;
  std::vector<std::pair<PyValuation, PyValuation>> imp;
  for (const auto &v : s.positives)
    pos.push_back(from_valuation(v));
  for (const auto &v : s.negatives)
    neg.push_back(from_valuation(v));
  for (const auto &i : s.implications)
    imp.emplace_back(from_valuation(i.from), from_valuation(i.to));
  py::dict d;
  d["positives"] = pos;
  d["negatives"] = neg;
  d["implications"] = imp;
  return d;
}

std::map<std::string, std::vector<std::pair<std::string, std::string>>> predicates_of(const Program &p, bool negation_closure,
                                                                                     bool array_octagons) {
  PredicateOptions opts{negation_closure, array_octagons};
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> out;
  for (const auto &[h, ps] : gen_predicates(p, opts))
    for (const auto &pr : ps)
      out[h].emplace_back(pr.name, to_string(pr.body));
  return out;
}

py::dict report_dict(const SynthesisReport &r) {
  py::dict d;
  d["name"] = r.name;
  d["outcome"] = to_string(r.outcome);
  d["exit_code"] = exit_code(r.outcome);
  d["rounds"] = r.rounds;
  d["max_rounds"] = r.max_rounds;
  d["depth"] = r.depth;
  d["predicates"] = r.predicate_count;
  d["invariant_size"] = r.invariant_size;
  d["time_ms"] = r.time_ms;
  d["detail"] = r.detail;
  d["solver_queries"] = r.solver_queries;
  if (r.invariant) {
    std::map<std::string, std::vector<std::string>> inv;
    for (const auto &[h, c] : *r.invariant)
      for (auto i : c.atoms)
        inv[h].push_back(to_string(r.predicates.at(h)[i].body));
    d["invariant"] = inv;
  } else {
    d["invariant"] = py::none();
  }
  std::vector<PyCandidate> conj;
  for (const auto &c : r.conjectures)
    conj.push_back(from_candidate(c));
  d["conjectures"] = conj;
  std::vector<std::string> constraints;
  for (const auto &e : r.constraints)
    constraints.push_back(to_line(e.constraint));
  d["constraints"] = constraints;
  std::ostringstream sample;
  write_sample(sample, r.sample);
  d["sample"] = sample.str();
  d["honesty_violations"] = r.honesty_violations;
  d["normality_violations"] = r.normality_violations;
  d["progress_violations"] = r.progress_violations;
  return d;
}

SynthesisConfig config_of(std::optional<int> depth, std::optional<int> max_rounds, const std::string &solver,
                          double solver_timeout, bool negation_closure, bool array_octagons, bool check_normality) {
  SynthesisConfig cfg;
  cfg.depth = depth;
  cfg.max_rounds = max_rounds;
  cfg.solver.path = solver;
  cfg.solver.timeout_s = solver_timeout;
  cfg.predicates = PredicateOptions{negation_closure, array_octagons};
  cfg.check_normality = check_normality;
  return cfg;
}

} // namespace

PYBIND11_MODULE(_npi, m) {
  m.doc() = "Invariant synthesis from non-provability information";

  py::register_exception<Error>(m, "NpiError");
  py::register_exception<ParseError>(m, "ParseError", m.attr("NpiError"));

  py::class_<Program>(m, "Program")
      .def_readonly("holes", &Program::holes)
      .def_readonly("name", &Program::proc_name)
      .def_property_readonly("variables",
                             [](const Program &p) {
                               std::vector<std::string> names;
                               for (const auto &[n, s] : p.vars)
                                 names.push_back(n);
                               return names;
                             })
      .def("__str__", [](const Program &p) { return to_string(p); });

  m.def("parse", &parse_program, py::arg("text"), "Parse program text.");
  m.def("parse_file", &parse_program_file, py::arg("path"), "Parse a program file.");

  m.def("houdini", &houdini, py::arg("positives"), py::arg("negatives"), py::arg("implications"),
        py::arg("universes"),
        "Strongest per-hole conjunction consistent with an ICE sample, or None. Valuations are "
        "(hole, [bool, ...]) pairs; the result maps holes to sorted predicate indices.");
  m.def("to_ice", &ice_of, py::arg("sample"), py::arg("universes"),
        "Translate a CD-NPI sample (text format, one constraint per line) into an ICE sample.");
  m.def(
      "is_consistent",
      [](const PyCandidate &candidate, const std::string &sample) {
        return is_consistent(to_candidate(candidate), sample_of(sample));
      },
      py::arg("candidate"), py::arg("sample"));

  m.def("gen_predicates", &predicates_of, py::arg("program"), py::arg("negation_closure") = false,
        py::arg("array_octagons") = false, "Candidate predicates per hole as (name, text) pairs.");

  m.def(
      "synthesize",
      [](const Program &p, const std::string &name, std::optional<int> depth, std::optional<int> max_rounds,
         const std::string &solver, double solver_timeout, bool negation_closure, bool array_octagons,
         bool check_normality) {
        SynthesisConfig cfg =
            config_of(depth, max_rounds, solver, solver_timeout, negation_closure, array_octagons, check_normality);
        SynthesisReport r;
        {
          py::gil_scoped_release release;
          r = synthesize(p, cfg, name);
        }
        return report_dict(r);
      },
      py::arg("program"), py::arg("name") = "program", py::arg("depth") = py::none(),
      py::arg("max_rounds") = py::none(), py::arg("solver") = "", py::arg("solver_timeout") = 10.0,
      py::arg("negation_closure") = false, py::arg("array_octagons") = false, py::arg("check_normality") = false,
      "Run the synthesis loop and return the report as a dict.");
}

#include "npi/cdnpi.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace npi {

namespace {

void same_hole(const HoleId &a, const HoleId &b) {
  if (a != b)
    throw HoleMismatch("constraint on hole " + b + " checked against candidate for hole " + a);
}

const Conjunction &candidate_at(const ConjunctionMap &m, const HoleId &h) {
  auto it = m.find(h);
  if (it == m.end())
    throw HoleMismatch("candidate is missing hole " + h);
  return it->second;
}

std::size_t universe_of(const Universes &u, const HoleId &h) {
  auto it = u.find(h);
  if (it == u.end())
    throw HoleMismatch("no universe declared for hole " + h);
  return it->second;
}

void check_atoms(const std::set<std::size_t> &atoms, std::size_t n, const HoleId &h) {
  if (!atoms.empty() && *atoms.rbegin() >= n)
    throw Error("atom p" + std::to_string(*atoms.rbegin()) + " outside universe of hole " + h);
}

} // namespace

bool entails_conj_disj(const Conjunction &gamma, const DisjunctionConstraint &chi) {
  same_hole(gamma.hole, chi.hole);
  return std::any_of(gamma.atoms.begin(), gamma.atoms.end(), [&](std::size_t a) { return chi.atoms.count(a) > 0; });
}

bool entails_conj_conj(const ConjunctionConstraint &eta, const Conjunction &gamma) {
  same_hole(gamma.hole, eta.hole);
  return std::includes(eta.atoms.begin(), eta.atoms.end(), gamma.atoms.begin(), gamma.atoms.end());
}

bool is_consistent(const ConjunctionMap &candidate, const CDNPISample &sample) {
  for (const auto &chi : sample.weakening)
    if (entails_conj_disj(candidate_at(candidate, chi.hole), chi))
      return false;
  for (const auto &eta : sample.strengthening)
    if (entails_conj_conj(eta, candidate_at(candidate, eta.hole)))
      return false;
  for (const auto &ind : sample.inductivity) {
    bool weaker = entails_conj_conj(ind.lhs, candidate_at(candidate, ind.lhs.hole));
    bool stronger = entails_conj_disj(candidate_at(candidate, ind.rhs.hole), ind.rhs);
    if (weaker && stronger)
      return false;
  }
  return true;
}

Valuation c_of(const ConjunctionConstraint &eta, const Universes &universes) {
  std::size_t n = universe_of(universes, eta.hole);
  check_atoms(eta.atoms, n, eta.hole);
  Valuation v{eta.hole, std::vector<bool>(n, false)};
  for (auto a : eta.atoms)
    v.bits[a] = true;
  return v;
}

Valuation d_of(const DisjunctionConstraint &chi, const Universes &universes) {
  std::size_t n = universe_of(universes, chi.hole);
  check_atoms(chi.atoms, n, chi.hole);
  Valuation v{chi.hole, std::vector<bool>(n, true)};
  for (auto a : chi.atoms)
    v.bits[a] = false;
  return v;
}

ICESample to_ice(const CDNPISample &sample, const Universes &universes) {
  ICESample out;
  for (const auto &chi : sample.weakening)
    out.positives.insert(d_of(chi, universes));
  for (const auto &eta : sample.strengthening)
    out.negatives.insert(c_of(eta, universes));
  for (const auto &ind : sample.inductivity)
    out.implications.insert({c_of(ind.lhs, universes), d_of(ind.rhs, universes)});
  return out;
}

std::vector<ConjunctionMap> all_conjunction_maps(const Universes &universes, std::size_t max_total) {
  std::size_t total = 0;
  for (const auto &[h, n] : universes) {
    (void)h;
    total += n;
  }
  if (total > max_total)
    throw Error("enumeration guard: total universe size " + std::to_string(total) + " exceeds " +
                std::to_string(max_total));

  std::vector<ConjunctionMap> out;
  std::vector<std::pair<HoleId, std::size_t>> holes(universes.begin(), universes.end());
  const std::uint64_t count = std::uint64_t{1} << total;
  out.reserve(count);
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    ConjunctionMap m;
    std::size_t bit = 0;
    for (const auto &[h, n] : holes) {
      Conjunction c{h, {}};
      for (std::size_t i = 0; i < n; ++i, ++bit)
        if (mask >> bit & 1u)
          c.atoms.insert(c.atoms.end(), i);
      m.emplace(h, std::move(c));
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<ConjunctionMap> brute_force_consistent(const CDNPISample &sample, const Universes &universes,
                                                   std::size_t max_total) {
  std::vector<ConjunctionMap> out;
  for (auto &m : all_conjunction_maps(universes, max_total))
    if (is_consistent(m, sample))
      out.push_back(std::move(m));
  return out;
}

// ---- text format ------------------------------------------------------------

namespace {

std::string join_atoms(const std::set<std::size_t> &atoms, char sep, const char *empty) {
  if (atoms.empty())
    return empty;
  std::string s;
  for (auto a : atoms) {
    if (!s.empty())
      s += sep;
    s += 'p' + std::to_string(a);
  }
  return s;
}

std::set<std::size_t> parse_atoms(const std::string &tok, char sep, const char *empty) {
  std::set<std::size_t> out;
  if (tok == empty)
    return out;
  std::stringstream ss(tok);
  std::string part;
  while (std::getline(ss, part, sep)) {
    if (part.size() < 2 || part[0] != 'p' ||
        !std::all_of(part.begin() + 1, part.end(), [](char c) { return c >= '0' && c <= '9'; }))
      throw Error("malformed atom '" + part + "' in sample line");
    out.insert(std::stoul(part.substr(1)));
  }
  return out;
}

} // namespace

std::string to_line(const DisjunctionConstraint &chi) {
  return "W " + chi.hole + " " + join_atoms(chi.atoms, '|', "false");
}

std::string to_line(const ConjunctionConstraint &eta) {
  return "S " + eta.hole + " " + join_atoms(eta.atoms, '&', "true");
}

std::string to_line(const InductivityConstraint &ind) {
  return "I " + ind.lhs.hole + " " + join_atoms(ind.lhs.atoms, '&', "true") + " -> " + ind.rhs.hole + " " +
         join_atoms(ind.rhs.atoms, '|', "false");
}

void write_sample(std::ostream &os, const CDNPISample &sample) {
  for (const auto &c : sample.weakening)
    os << to_line(c) << '\n';
  for (const auto &c : sample.strengthening)
    os << to_line(c) << '\n';
  for (const auto &c : sample.inductivity)
    os << to_line(c) << '\n';
}

CDNPISample read_sample(std::istream &is) {
  CDNPISample s;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::stringstream ss(line);
    std::string kind;
    if (!(ss >> kind) || kind[0] == '#')
      continue;
    try {
      if (kind == "W") {
        std::string hole, atoms;
        if (!(ss >> hole >> atoms))
          throw Error("expected `W hole atoms`");
        s.weakening.insert({hole, parse_atoms(atoms, '|', "false")});
      } else if (kind == "S") {
        std::string hole, atoms;
        if (!(ss >> hole >> atoms))
          throw Error("expected `S hole atoms`");
        s.strengthening.insert({hole, parse_atoms(atoms, '&', "true")});
      } else if (kind == "I") {
        std::string h1, a1, arrow, h2, a2;
        if (!(ss >> h1 >> a1 >> arrow >> h2 >> a2) || arrow != "->")
          throw Error("expected `I hole atoms -> hole atoms`");
        s.inductivity.insert(InductivityConstraint{ConjunctionConstraint{h1, parse_atoms(a1, '&', "true")},
                                                   DisjunctionConstraint{h2, parse_atoms(a2, '|', "false")}});
      } else {
        throw Error("unknown constraint kind '" + kind + "'");
      }
    } catch (const Error &e) {
      throw Error("sample line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return s;
}

} // namespace npi

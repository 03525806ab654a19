#include "npi/ice.hpp"

namespace npi {

std::string Valuation::str() const {
  std::string s = "(";
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (i)
      s += ',';
    s += bits[i] ? 't' : 'f';
  }
  return s + ")";
}

std::string Conjunction::str() const {
  std::string s = "{";
  bool first = true;
  for (auto a : atoms) {
    if (!first)
      s += ',';
    first = false;
    s += std::to_string(a);
  }
  return s + "}";
}

bool satisfies(const Valuation &v, const Conjunction &c) {
  if (v.hole != c.hole)
    throw HoleMismatch("valuation of hole " + v.hole + " checked against conjunction of hole " + c.hole);
  for (auto a : c.atoms) {
    if (a >= v.bits.size())
      throw Error("conjunction atom " + std::to_string(a) + " outside universe of hole " + c.hole);
    if (!v.bits[a])
      return false;
  }
  return true;
}

Conjunction full_conjunction(const HoleId &hole, std::size_t n) {
  Conjunction c{hole, {}};
  for (std::size_t i = 0; i < n; ++i)
    c.atoms.insert(c.atoms.end(), i);
  return c;
}

namespace {

void check_valuation(const Valuation &v, const Universes &universes) {
  auto it = universes.find(v.hole);
  if (it == universes.end())
    throw HoleMismatch("valuation refers to undeclared hole " + v.hole);
  if (v.bits.size() != it->second)
    throw Error("valuation " + v.str() + " is not total over hole " + v.hole + " (universe size " +
                std::to_string(it->second) + ")");
}

const Conjunction &at(const ConjunctionMap &m, const HoleId &h) {
  auto it = m.find(h);
  if (it == m.end())
    throw HoleMismatch("candidate has no conjunction for hole " + h);
  return it->second;
}

} // namespace

void check_sample(const ICESample &sample, const Universes &universes) {
  for (const auto &v : sample.positives)
    check_valuation(v, universes);
  for (const auto &v : sample.negatives)
    check_valuation(v, universes);
  for (const auto &imp : sample.implications) {
    check_valuation(imp.from, universes);
    check_valuation(imp.to, universes);
  }
}

bool ice_consistent(const ConjunctionMap &candidate, const ICESample &sample) {
  for (const auto &v : sample.positives)
    if (!satisfies(v, at(candidate, v.hole)))
      return false;
  for (const auto &v : sample.negatives)
    if (satisfies(v, at(candidate, v.hole)))
      return false;
  for (const auto &imp : sample.implications)
    if (satisfies(imp.from, at(candidate, imp.from.hole)) && !satisfies(imp.to, at(candidate, imp.to.hole)))
      return false;
  return true;
}

std::optional<ConjunctionMap> houdini_passive(const ICESample &sample, const Universes &universes) {
  check_sample(sample, universes);

  // Working state as bit masks; an atom survives while true in every positive.
  std::map<HoleId, std::vector<bool>> keep;
  for (const auto &[h, n] : universes)
    keep[h] = std::vector<bool>(n, true);

  auto sat = [&](const Valuation &v) {
    const auto &k = keep.at(v.hole);
    for (std::size_t i = 0; i < k.size(); ++i)
      if (k[i] && !v.bits[i])
        return false;
    return true;
  };
  auto make_positive = [&](const Valuation &v) {
    auto &k = keep.at(v.hole);
    for (std::size_t i = 0; i < k.size(); ++i)
      if (!v.bits[i])
        k[i] = false;
  };

  for (const auto &v : sample.positives)
    make_positive(v);

  // std::set iteration is sorted, so propagation order is stable.
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto &imp : sample.implications) {
      if (sat(imp.from) && !sat(imp.to)) {
        make_positive(imp.to);
        changed = true;
      }
    }
  }

  for (const auto &v : sample.negatives)
    if (sat(v))
      return std::nullopt;

  ConjunctionMap out;
  for (const auto &[h, k] : keep) {
    Conjunction c{h, {}};
    for (std::size_t i = 0; i < k.size(); ++i)
      if (k[i])
        c.atoms.insert(c.atoms.end(), i);
    out.emplace(h, std::move(c));
  }
  return out;
}

} // namespace npi

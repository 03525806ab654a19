#include "doctest.h"

#include <random>
#include <sstream>

#include "npi/cdnpi.hpp"
#include "npi/ice.hpp"

using namespace npi;

namespace {

Valuation val(const HoleId &h, const std::string &bits) {
  Valuation v{h, {}};
  for (char c : bits)
    v.bits.push_back(c == 't');
  return v;
}

Conjunction conj(const HoleId &h, std::set<std::size_t> atoms) { return Conjunction{h, std::move(atoms)}; }

const Universes kThree{{"H", 3}};

} // namespace

TEST_CASE("valuation and conjunction rendering") {
  CHECK(val("H", "tft").str() == "(t,f,t)");
  CHECK(conj("H", {0, 3}).str() == "{0,3}");
  CHECK(conj("H", {}).str() == "{}");
}

TEST_CASE("ice consistency by valuation semantics") {
  ICESample s;
  s.positives.insert(val("H", "tft"));
  s.negatives.insert(val("H", "tff"));
  CHECK(ice_consistent({{"H", conj("H", {0, 2})}}, s));
  CHECK(ice_consistent({{"H", conj("H", {2})}}, s));
  CHECK_FALSE(ice_consistent({{"H", conj("H", {0})}}, s));  // accepts the negative
  CHECK_FALSE(ice_consistent({{"H", conj("H", {1})}}, s));  // rejects the positive

  ICESample imp;
  imp.implications.insert({val("H", "ttf"), val("H", "tff")});
  CHECK(ice_consistent({{"H", conj("H", {0})}}, imp));
  CHECK(ice_consistent({{"H", conj("H", {})}}, imp));
  CHECK_FALSE(ice_consistent({{"H", conj("H", {1})}}, ICESample{{val("H", "ttf")}, {}, {{val("H", "ttf"), val("H", "tff")}}}));
}

TEST_CASE("houdini: strongest conjunction true on all positives") {
  ICESample s;
  s.positives.insert(val("H", "tft"));
  s.negatives.insert(val("H", "tff"));
  auto g = houdini_passive(s, kThree);
  REQUIRE(g);
  CHECK(g->at("H").atoms == std::set<std::size_t>{0, 2});
}

TEST_CASE("houdini: empty sample gives the full conjunction") {
  auto g = houdini_passive({}, kThree);
  REQUIRE(g);
  CHECK(g->at("H") == full_conjunction("H", 3));
}

TEST_CASE("houdini: negative above the fixpoint means no consistent conjunction") {
  ICESample s;
  s.positives.insert(val("H", "tft"));
  s.negatives.insert(val("H", "ttt"));
  CHECK_FALSE(houdini_passive(s, kThree));
}

TEST_CASE("houdini: implications propagate positives across holes") {
  ICESample s;
  Universes u{{"L", 2}, {"R", 2}};
  s.positives.insert(val("L", "tf"));
  s.implications.insert({val("L", "tf"), val("R", "ft")});
  auto g = houdini_passive(s, u);
  REQUIRE(g);
  CHECK(g->at("L").atoms == std::set<std::size_t>{0});
  CHECK(g->at("R").atoms == std::set<std::size_t>{1});
}

TEST_CASE("check_sample rejects partial valuations") {
  ICESample s;
  s.positives.insert(val("H", "tf"));
  CHECK_THROWS(check_sample(s, kThree));
  ICESample t;
  t.positives.insert(val("G", "tft"));
  CHECK_THROWS(check_sample(t, kThree));
}

TEST_CASE("entailment between conjunctions and disjunctions of atoms") {
  CHECK_FALSE(entails_conj_disj(conj("H", {0}), {"H", {1}}));
  CHECK(entails_conj_disj(conj("H", {0, 1}), {"H", {1, 2}}));
  CHECK_FALSE(entails_conj_disj(conj("H", {0}), {"H", {}}));
  CHECK(entails_conj_conj({"H", {0, 1}}, conj("H", {0})));
  CHECK_FALSE(entails_conj_conj({"H", {0}}, conj("H", {0, 1})));
  CHECK(entails_conj_conj({"H", {}}, conj("H", {})));
}

TEST_CASE("cd-npi consistency on the inverse example") {
  CDNPISample s;
  s.inductivity.insert(InductivityConstraint{ConjunctionConstraint{"L", {0}}, DisjunctionConstraint{"R", {1}}});
  CHECK_FALSE(is_consistent({{"L", conj("L", {0})}, {"R", conj("R", {1})}}, s));
  CHECK(is_consistent({{"L", conj("L", {0})}, {"R", conj("R", {2})}}, s));
}

TEST_CASE("c and d translations") {
  CHECK(c_of({"H", {0}}, kThree) == val("H", "tff"));
  CHECK(d_of({"H", {1}}, kThree) == val("H", "tft"));
  CHECK(d_of({"H", {0, 2}}, kThree) == val("H", "ftf"));
  CHECK(c_of({"H", {}}, kThree) == val("H", "fff"));
  CHECK(d_of({"H", {}}, kThree) == val("H", "ttt"));
}

TEST_CASE("to_ice maps each constraint kind") {
  CDNPISample s;
  s.inductivity.insert(InductivityConstraint{ConjunctionConstraint{"H", {0}}, DisjunctionConstraint{"H", {1}}});
  s.weakening.insert(DisjunctionConstraint{"H", {0, 2}});
  s.strengthening.insert(ConjunctionConstraint{"H", {0, 1}});
  ICESample ice = to_ice(s, kThree);
  CHECK(ice.implications == std::set<Implication>{{val("H", "tff"), val("H", "tft")}});
  CHECK(ice.positives == std::set<Valuation>{val("H", "ftf")});
  CHECK(ice.negatives == std::set<Valuation>{val("H", "ttf")});
}

TEST_CASE("c and d are injective") {
  std::set<Valuation> cs, ds;
  for (unsigned m = 0; m < 16; ++m) {
    std::set<std::size_t> atoms;
    for (std::size_t i = 0; i < 4; ++i)
      if (m >> i & 1)
        atoms.insert(i);
    cs.insert(c_of({"H", atoms}, {{"H", 4}}));
    ds.insert(d_of({"H", atoms}, {{"H", 4}}));
  }
  CHECK(cs.size() == 16);
  CHECK(ds.size() == 16);
}

TEST_CASE("translations agree with entailment for every pair over four atoms") {
  Universes u{{"H", 4}};
  for (const auto &a : all_conjunction_maps(u))
    for (const auto &j : all_conjunction_maps(u)) {
      const auto &alpha = a.at("H");
      const auto &atoms = j.at("H").atoms;
      CHECK(satisfies(c_of({"H", atoms}, u), alpha) == entails_conj_conj({"H", atoms}, alpha));
      CHECK(satisfies(d_of({"H", atoms}, u), alpha) == !entails_conj_disj(alpha, {"H", atoms}));
    }
}

TEST_CASE("brute force consistency examples") {
  Universes two{{"H", 2}};
  CDNPISample w;
  w.weakening.insert(DisjunctionConstraint{"H", {0}});
  auto got = brute_force_consistent(w, two);
  std::set<std::set<std::size_t>> atoms;
  for (const auto &g : got)
    atoms.insert(g.at("H").atoms);
  CHECK(atoms == std::set<std::set<std::size_t>>{{}, {1}});

  CDNPISample s;
  s.strengthening.insert(ConjunctionConstraint{"H", {0, 1}});
  CHECK(brute_force_consistent(s, two).empty());
  CHECK_THROWS(brute_force_consistent({}, {{"H", 21}}));
}

TEST_CASE("houdini result grows weaker as the sample grows") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    ICESample s;
    std::optional<ConjunctionMap> prev = houdini_passive(s, kThree);
    for (int k = 0; k < 4; ++k) {
      std::string bits;
      for (int i = 0; i < 3; ++i)
        bits += rng() % 2 ? 't' : 'f';
      s.positives.insert(val("H", bits));
      auto next = houdini_passive(s, kThree);
      REQUIRE(next);
      const auto &a = next->at("H").atoms, &b = prev->at("H").atoms;
      CHECK(std::includes(b.begin(), b.end(), a.begin(), a.end()));
      prev = next;
    }
  }
}

TEST_CASE("sample text format round-trips") {
  CDNPISample s;
  s.weakening.insert(DisjunctionConstraint{"H", {3, 7}});
  s.weakening.insert(DisjunctionConstraint{"H", {}});
  s.strengthening.insert(ConjunctionConstraint{"H", {1, 2}});
  s.strengthening.insert(ConjunctionConstraint{"H", {}});
  s.inductivity.insert(InductivityConstraint{ConjunctionConstraint{"A", {1, 2}}, DisjunctionConstraint{"B", {3, 4}}});
  CHECK(to_line(DisjunctionConstraint{"H", {3, 7}}) == "W H p3|p7");
  CHECK(to_line(ConjunctionConstraint{"H", {}}) == "S H true");
  CHECK(to_line(DisjunctionConstraint{"H", {}}) == "W H false");
  CHECK(to_line(InductivityConstraint{{"A", {1, 2}}, {"B", {3, 4}}}) == "I A p1&p2 -> B p3|p4");
  std::stringstream ss;
  write_sample(ss, s);
  CDNPISample back = read_sample(ss);
  CHECK(back.weakening == s.weakening);
  CHECK(back.strengthening == s.strengthening);
  CHECK(back.inductivity == s.inductivity);
}

TEST_CASE("sample reader rejects malformed lines") {
  std::stringstream bad("X H p1\n");
  CHECK_THROWS(read_sample(bad));
}

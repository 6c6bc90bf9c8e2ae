// Copyright 2026 The mull Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "mull/phase.hpp"
#include "support/formula_gen.hpp"
#include "support/phase_corpus.hpp"

namespace mull {
namespace {

const char* kSign = R"(# {1, -1} under multiplication
elements 1 -1
unit 1
row 1 : 1 -1
row -1 : -1 1
pole 1
)";

PhaseSpace trivial(PhaseSet pole) { return PhaseSpace({"e"}, 0, {{0}}, pole); }

TEST(Monoids, CountsUpToIsomorphism) {
  const std::size_t expected[] = {1, 2, 5, 19};
  for (std::size_t n = 1; n <= 4; ++n) EXPECT_EQ(enumerate_monoids(n).size(), expected[n - 1]) << n;
}

TEST(Monoids, CountOfOrderFive) { EXPECT_EQ(enumerate_monoids(5).size(), 78u); }

TEST(Monoids, EnumeratedTablesAreCommutativeMonoids) {
  for (std::size_t n = 1; n <= 4; ++n)
    for (const auto& t : enumerate_monoids(n)) EXPECT_NO_THROW(PhaseSpace(default_element_names(n), 0, t, 0));
}

TEST(SpaceFile, ParseAndRoundTrip) {
  PhaseSpace s = parse_phase_space(kSign);
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(s.mul(1, 1), 0u);
  EXPECT_EQ(s.pole(), 1u);
  PhaseSpace again = parse_phase_space(to_text(s));
  EXPECT_EQ(again.table(), s.table());
  EXPECT_EQ(again.pole(), s.pole());
  EXPECT_EQ(again.names(), s.names());
}

TEST(SpaceFile, ReportsLawViolations) {
  const char* bad = R"(elements e a b
unit e
row e : e a b
row a : a b e
row b : b a a
pole
)";
  try {
    parse_phase_space(bad);
    FAIL() << "expected a violation report";
  } catch (const PhaseSpaceError& e) {
    bool commut = false, assoc = false;
    for (const auto& v : e.violations()) {
      commut |= v.rfind("not commutative", 0) == 0;
      assoc |= v.rfind("not associative", 0) == 0;
    }
    EXPECT_TRUE(commut);
    EXPECT_TRUE(assoc);
  }
  EXPECT_THROW(parse_phase_space("elements e a\nunit a\nrow e : e a\nrow a : a a\npole\n"), PhaseSpaceError);
}

TEST(SpaceFile, MalformedInput) {
  EXPECT_THROW(parse_phase_space("elements e\nunit e\npole\n"), InputError);
  EXPECT_THROW(parse_phase_space("elements e\nunit e\nrow e : e e\npole\n"), InputError);
  EXPECT_THROW(parse_phase_space("elements e\nunit e\nrow e : q\npole\n"), InputError);
  EXPECT_THROW(parse_phase_space("elements e\nunit e\nrow e : e\n"), InputError);
  EXPECT_THROW(parse_phase_space("elements e\nunit e\nrow e : e\npole\nfrobnicate\n"), InputError);
}

TEST(Interpret, TrivialMonoidEmptyPole) {
  PhaseSpace s = trivial(0);
  EXPECT_EQ(interpret_phase(s, parse("1")), 1u);
  EXPECT_EQ(interpret_phase(s, parse("bot")), 0u);
  EXPECT_EQ(interpret_phase(s, parse("0")), 0u);
  EXPECT_TRUE(holds(s, parse("1 -o 1")));
  EXPECT_FALSE(holds(s, parse("mu x. x")));
  EXPECT_TRUE(holds(s, parse("nu x. x")));
}

TEST(Interpret, SignSpaceIsSelfDual) {
  PhaseSpace s = parse_phase_space(kSign);
  // Facts: {}, {1}, {-1}, M.
  EXPECT_EQ(testing::all_facts(s).size(), 4u);
  EXPECT_EQ(interpret_phase(s, parse("1")), interpret_phase(s, parse("bot")));
  EXPECT_EQ(interpret_phase(s, parse("1 * 1")), 1u);
  EXPECT_EQ(s.orthogonal(0b10), 0b10u);
  EXPECT_EQ(set_to_string(s, interpret_phase(s, parse("1 + bot"))), "{1}");
  EXPECT_EQ(interpret_phase(s, parse("0")), 0u);
  EXPECT_EQ(interpret_phase(s, parse("mu x. 1 + x")), 1u);
}

TEST(Interpret, EnvironmentAndUnbound) {
  PhaseSpace s = parse_phase_space(kSign);
  EXPECT_EQ(interpret_phase(s, parse("a & b"), {{"a", 0b11}, {"b", 0b10}}), 0b10u);
  EXPECT_THROW(interpret_phase(s, parse("a")), UnboundVariable);
  EXPECT_THROW(holds(s, parse("a")), InputError);
}

TEST(Interpret, BinderRestoresOuterBinding) {
  PhaseSpace s = parse_phase_space(kSign);
  EXPECT_EQ(interpret_phase(s, parse("(mu x. 1 + x) * x"), {{"x", 0b11}}), 0b11u);
}

TEST(Interpret, SignSpaceExamples) {
  PhaseSpace s = parse_phase_space(kSign);
  EXPECT_EQ(fact_closure(s, 0b01), 0b01u);
  EXPECT_EQ(fact_closure(s, 0), 0u);
  EXPECT_EQ(fact_closure(s, 0b11), 0b11u);
  EXPECT_THROW(fact_closure(s, 0b100), InputError);
  EXPECT_EQ(interpret_phase(s, parse("mu x. x")), 0u);
  EXPECT_EQ(interpret_phase(s, parse("nu x. x")), 0b11u);
  EXPECT_EQ(interpret_phase(s, parse("1 * bot")), 0b01u);
  EXPECT_TRUE(holds(s, parse("1")));
  EXPECT_FALSE(holds(s, parse("0")));
  EXPECT_TRUE(holds(s, parse("top")));
}

TEST(Laws, ClosureOnAllSmallSpaces) {
  for (const auto& s : enumerate_spaces(4)) ASSERT_EQ(testing::check_closure_laws(s), "") << to_text(s);
}

TEST(Laws, ConnectivesAreFacts) {
  for (const auto& s : enumerate_spaces(3))
    ASSERT_EQ(testing::check_connectives_are_facts(s, testing::all_facts(s)), "") << to_text(s);
}

TEST(Laws, CorpusOnSpacesUpToTwo) {
  for (const auto& s : enumerate_spaces(2))
    for (const auto& src : testing::phase_corpus())
      ASSERT_EQ(testing::check_formula_laws(s, parse(src)), "") << src << "\n" << to_text(s);
}

TEST(Laws, IdentityAxiomHoldsEverywhere) {
  testing::FormulaGen gen(5);
  auto spaces = enumerate_spaces(3);
  for (int i = 0; i < 60; ++i) {
    Formula a = gen.positive(4);
    Formula f = Formula::lolli(a, a);
    for (const auto& s : spaces) ASSERT_TRUE(holds(s, f)) << print(f) << "\n" << to_text(s);
  }
}

TEST(Laws, DualityOnRandomFormulas) {
  testing::FormulaGen gen(17);
  gen.allow_exponentials = false;
  auto spaces = enumerate_spaces(2);
  for (int i = 0; i < 200; ++i) {
    Formula f = gen.positive(5);
    for (const auto& s : spaces)
      ASSERT_EQ(interpret_phase(s, nnf(Formula::neg(f))), s.orthogonal(interpret_phase(s, f))) << print(f);
  }
}

TEST(Search, FindsSmallestCounterModel) {
  auto m = search_counter_model(parse("bot"), 3);
  ASSERT_TRUE(m);
  EXPECT_EQ(m->size(), 1u);
  EXPECT_EQ(m->pole(), 0u);
  EXPECT_FALSE(holds(*m, parse("bot")));
}

TEST(Search, NoCounterModelForValidFormula) {
  EXPECT_FALSE(search_counter_model(parse("top"), 4));
  EXPECT_FALSE(search_counter_model(parse("1"), 4));
  EXPECT_FALSE(search_counter_model(parse("(1 + bot) -o (1 + bot)"), 3));
  EXPECT_FALSE(search_counter_model(parse("mu x. 1 + x"), 3));
}

TEST(Search, DeterministicAcrossWorkerCounts) {
  const char* fs[] = {"1 * 1 -o bot", "(1 & bot) -o 1 * 1", "?1", "!bot -o bot", "1 | 1"};
  for (const char* src : fs) {
    Formula f = parse(src);
    auto one = search_counter_model(f, 3, {5, 1});
    auto many = search_counter_model(f, 3, {5, 4});
    ASSERT_EQ(one.has_value(), many.has_value()) << src;
    if (one) EXPECT_EQ(to_text(*one), to_text(*many)) << src;
  }
}

TEST(Search, RespectsCap) {
  EXPECT_THROW(search_counter_model(parse("bot"), 6), BudgetExceeded);
  EXPECT_THROW(search_counter_model(parse("x"), 2), InputError);
}

}  // namespace
}  // namespace mull

#include <gtest/gtest.h>

#include <random>
#include <set>
#include <tuple>

#include "chaseforge/error.hpp"
#include "chaseforge/logic_plan.hpp"
#include "chaseforge/parser.hpp"
#include "support.hpp"

namespace cf = chaseforge;

TEST(LogicPlan, TradingPlanIsAChain) {
  auto ref = testsupport::load_reference();
  auto plan = cf::build_logic_plan(ref.program);
  ASSERT_EQ(plan.nodes.size(), 3u);
  EXPECT_EQ(plan.nodes[0].body_predicates, (std::vector<std::string>{"Open", "MarketClosed"}));
  EXPECT_EQ(plan.edges, (std::vector<cf::PlanEdge>{{"r1", "r2", "Accepted"}, {"r2", "r3", "Position"}}));
  ASSERT_NE(plan.find("r3"), nullptr);
  EXPECT_EQ(plan.find("r3")->head_predicate, "Return");
  EXPECT_EQ(plan.find("r9"), nullptr);
}

TEST(LogicPlan, SingleRuleHasNoEdges) {
  auto plan = cf::build_logic_plan(cf::parse_program("A(x) -> B(x)."));
  EXPECT_EQ(plan.nodes.size(), 1u);
  EXPECT_TRUE(plan.edges.empty());
}

TEST(LogicPlan, EmptyProgram) {
  auto plan = cf::build_logic_plan(cf::parse_program(""));
  EXPECT_TRUE(plan.nodes.empty());
  EXPECT_TRUE(plan.edges.empty());
  EXPECT_EQ(cf::plan_to_dot(plan, cf::parse_program("")).rfind("digraph plan {", 0), 0u);
}

TEST(LogicPlan, MutualRecursionAndSelfLoop) {
  auto plan = cf::build_logic_plan(cf::parse_program("A(x) -> B(x).\nB(x) -> A(x).\nT(x), T(x) -> T(x)."));
  EXPECT_EQ(plan.edges, (std::vector<cf::PlanEdge>{{"r1", "r2", "B"}, {"r2", "r1", "A"}, {"r3", "r3", "T"}}));
}

TEST(LogicPlan, EdgesMatchDefinitionProperty) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 200; ++i) {
    cf::Program p;
    try {
      p = cf::parse_program(testsupport::random_case(rng).program);
    } catch (const cf::ParseError&) {
      continue;
    }
    auto plan = cf::build_logic_plan(p);
    ASSERT_EQ(plan.nodes.size(), p.rules.size());
    std::set<std::tuple<std::string, std::string, std::string>> expected, got;
    for (const auto& from : p.rules)
      for (const auto& to : p.rules)
        for (const auto* a : to.positive_atoms())
          if (a->predicate == from.head.predicate) expected.insert({from.id, to.id, a->predicate});
    for (const auto& e : plan.edges) got.insert({e.from, e.to, e.predicate});
    EXPECT_EQ(got, expected);
    EXPECT_EQ(got.size(), plan.edges.size());
  }
}

TEST(LogicPlan, VerbalizedPlanCarriesTokenizedSentences) {
  auto ref = testsupport::load_reference();
  auto vp = cf::verbalize_plan(cf::build_logic_plan(ref.program), ref.program, ref.glossary);
  ASSERT_EQ(vp.nodes.size(), 3u);
  EXPECT_EQ(vp.find("r3")->head_clause, "the trader ⟦r3.x⟧ gets returns of ⟦r3.pl⟧");
  EXPECT_EQ(vp.find("r2")->head_description, "the positions held by traders");
  EXPECT_EQ(vp.edges.size(), 2u);
}

TEST(LogicPlan, AggregateUsesLexiconConnective) {
  auto p = cf::parse_program("Pay(x,a), s = msum(a) -> Total(x,s).");
  auto g = cf::parse_glossary("Pay(x,a): \"{x} pays {a}\".\nTotal(x,s): \"{x} has paid {s} in total\".");
  auto vp = cf::verbalize_plan(cf::build_logic_plan(p), p, g);
  EXPECT_NE(vp.nodes[0].sentence.find("the running sum including"), std::string::npos) << vp.nodes[0].sentence;
  cf::Lexicon lex;
  lex.aggregates[cf::AggregateFunc::Sum] = "the total over";
  vp = cf::verbalize_plan(cf::build_logic_plan(p), p, g, lex);
  EXPECT_NE(vp.nodes[0].sentence.find("the total over"), std::string::npos) << vp.nodes[0].sentence;
}

TEST(LogicPlan, MissingGlossaryEntry) {
  auto p = cf::parse_program("A(x) -> B(x).");
  auto g = cf::parse_glossary("A(x): \"{x} is an a\".");
  EXPECT_THROW(cf::verbalize_plan(cf::build_logic_plan(p), p, g), cf::GlossaryError);
}

TEST(LogicPlan, DotOutput) {
  auto ref = testsupport::load_reference();
  auto dot = cf::plan_to_dot(cf::build_logic_plan(ref.program), ref.program);
  EXPECT_NE(dot.find("\"r1\" -> \"r2\""), std::string::npos) << dot;
  EXPECT_NE(dot.find("Accepted"), std::string::npos);
}

#include <gtest/gtest.h>

#include "chaseforge/error.hpp"
#include "chaseforge/parser.hpp"
#include "chaseforge/tokens.hpp"
#include "chaseforge/verbalizer.hpp"
#include "support.hpp"

namespace cf = chaseforge;

namespace {

cf::Lexicon trading_lexicon() { return cf::Lexicon::from_json(testsupport::slurp(testsupport::trading("lexicon.json"))); }

}  // namespace

TEST(Verbalizer, AcceptanceSentenceGolden) {
  auto ref = testsupport::load_reference();
  auto c = cf::reason(ref.facts, ref.program);
  auto v = cf::verbalize_chase(c, ref.glossary);
  EXPECT_EQ(v[0].sentence,
            "Since the trader EGTech at time 1 sends an order to open a position of size 0.3, and it is not true "
            "that 1 is a time when the market is closed, then the order of size 0.3 by EGTech is accepted at time 1.");
  EXPECT_EQ(v[0].slot_bindings.at("x"), "EGTech");
  EXPECT_TRUE(v[0].contributions.empty());
}

TEST(Verbalizer, LexiconOverridesComparison) {
  auto ref = testsupport::load_reference();
  auto c = cf::reason(ref.facts, ref.program);
  auto plain = cf::verbalize_chase(c, ref.glossary);
  auto tuned = cf::verbalize_chase(c, ref.glossary, trading_lexicon());
  EXPECT_NE(plain[4].sentence.find("where 9 is greater than 1"), std::string::npos);
  EXPECT_NE(tuned[4].sentence.find("where 9 is later than 1"), std::string::npos);
  EXPECT_NE(tuned[4].sentence.find("with 6.9 computed as 0.3 times 147 minus 37.2"), std::string::npos);
  EXPECT_EQ(tuned[0].sentence, plain[0].sentence);
}

TEST(Verbalizer, LexiconRejectsUnknownKeys) {
  EXPECT_THROW(cf::Lexicon::from_json("{\"nonsense\": 1}"), cf::Error);
  EXPECT_EQ(cf::Lexicon::from_json("{\"since\": \"As\"}").since, "As");
}

TEST(Verbalizer, RuleSentenceUsesTokens) {
  auto ref = testsupport::load_reference();
  auto s = cf::verbalize_rule(ref.program.rules[0], ref.glossary);
  EXPECT_EQ(cf::verbalize_head(ref.program.rules[0], ref.glossary),
            "the order of size ⟦r1.y⟧ by ⟦r1.x⟧ is accepted at time ⟦r1.t1⟧");
  EXPECT_EQ(cf::find_tokens(s), (std::set<std::string>{"⟦r1.t1⟧", "⟦r1.x⟧", "⟦r1.y⟧"}));
}

TEST(Verbalizer, GroundedRuleSentenceEqualsStepSentence) {
  auto ref = testsupport::load_reference();
  auto c = cf::reason(ref.facts, ref.program);
  auto v = cf::verbalize_chase(c, ref.glossary);
  for (const auto& step : v) {
    const auto& rule = *c.program.find_rule(step.rule_id);
    auto filled = cf::substitute_tokens(cf::verbalize_rule(rule, ref.glossary), [&](const cf::TokenRef& t) {
      return std::optional<std::string>(step.slot_bindings.at(t.var));
    });
    EXPECT_EQ(filled, step.sentence);
  }
}

TEST(Verbalizer, AggregateComposesContributions) {
  auto p = cf::parse_program("Pay(x,a), s = msum(a) -> Total(x,s).");
  auto g = cf::parse_glossary(
      "Pay(x,a): \"{x} pays {a}\".\nTotal(x,s): \"{x} has paid {s} in total\".");
  auto c = cf::reason(cf::parse_facts("Pay(\"a\",1). Pay(\"a\",2)."), p);
  auto v = cf::verbalize_chase(c, g);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[1].contributions, (std::vector<cf::StepId>{0, 1}));
  EXPECT_NE(v[1].sentence.find("the running sum including"), std::string::npos) << v[1].sentence;
  EXPECT_NE(v[1].sentence.find("a pays 1"), std::string::npos) << v[1].sentence;
  EXPECT_NE(v[1].sentence.find("a has paid 3 in total"), std::string::npos) << v[1].sentence;
}

TEST(Verbalizer, MissingGlossaryEntry) {
  auto ref = testsupport::load_reference();
  EXPECT_THROW(cf::verbalize_atom(cf::parse_ground_atom("Nope(1)"), ref.glossary), cf::GlossaryError);
}

TEST(Verbalizer, Capitalize) {
  EXPECT_EQ(cf::capitalize("since"), "Since");
  EXPECT_EQ(cf::capitalize(""), "");
}

TEST(Tokens, ParseAndSubstitute) {
  EXPECT_EQ(cf::make_token("r1", "x"), "⟦r1.x⟧");
  auto ref = cf::parse_token_body("fact:Price.p");
  ASSERT_TRUE(ref);
  EXPECT_EQ(ref->node, "fact:Price");
  EXPECT_EQ(ref->var, "p");
  std::set<std::string> unresolved;
  auto out = cf::substitute_tokens(
      "⟦r1.x⟧ and ⟦r1.q⟧",
      [](const cf::TokenRef& t) { return t.var == "x" ? std::optional<std::string>("A") : std::nullopt; },
      &unresolved);
  EXPECT_EQ(out, "A and ⟦r1.q⟧");
  EXPECT_EQ(unresolved, std::set<std::string>{"⟦r1.q⟧"});
  EXPECT_TRUE(cf::has_token_remnant("left ⟦ only"));
  EXPECT_FALSE(cf::has_token_remnant("plain"));
}

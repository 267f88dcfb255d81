#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "chaseforge/chase.hpp"
#include "chaseforge/glossary.hpp"

namespace chaseforge {

/// Connectives used to join clauses. Defaults reproduce the
/// "Since A, and it is not true that B, then C." pattern.
struct Lexicon {
  std::string since = "Since";
  std::string conjunction = "and";
  std::string negation = "it is not true that";
  std::string then = "then";
  std::string together_with = "together with";
  std::string where = "where";
  std::string computed_as = "computed as";
  std::map<CmpOp, std::string> comparisons = {
      {CmpOp::Lt, "is less than"},    {CmpOp::Gt, "is greater than"}, {CmpOp::Le, "is at most"},
      {CmpOp::Ge, "is at least"},     {CmpOp::Eq, "is equal to"},     {CmpOp::Ne, "is different from"}};
  std::map<ArithOp, std::string> operators = {
      {ArithOp::Add, "plus"}, {ArithOp::Sub, "minus"}, {ArithOp::Mul, "times"}, {ArithOp::Div, "divided by"}};
  std::map<AggregateFunc, std::string> aggregates = {{AggregateFunc::Sum, "the running sum including"},
                                                     {AggregateFunc::Count, "the running count including"},
                                                     {AggregateFunc::Min, "the running minimum including"},
                                                     {AggregateFunc::Max, "the running maximum including"}};

  /// Overrides defaults from a JSON object; unknown keys are rejected.
  static Lexicon from_json(std::string_view text);
};

struct VerbalizedStep {
  StepId step_id = 0;
  std::string rule_id;
  std::string sentence;
  /// Rule variable -> printed constant, for every substitution entry.
  std::map<std::string, std::string> slot_bindings;
  /// Contributing steps for aggregate rules (including this one), else empty.
  std::vector<StepId> contributions;
};

/// Glossary sentence for a ground atom; throws GlossaryError.
std::string verbalize_atom(const GroundAtom& atom, const Glossary& glossary);
inline std::string verbalize_fact(const Fact& fact, const Glossary& glossary) {
  return verbalize_atom(fact.atom, glossary);
}

/// "Since <body>, then <head>." for one chase step. `contributions` is the
/// compose_back result for aggregate rules and must be empty otherwise.
VerbalizedStep verbalize_step(const ChaseStep& step, const std::vector<ChaseStep>& contributions,
                              const Program& program, const Glossary& glossary, const Lexicon& lexicon = {});

/// Same sentence shape with ⟦rule.var⟧ tokens in place of constants.
std::string verbalize_rule(const Rule& rule, const Glossary& glossary, const Lexicon& lexicon = {});

/// Head clause of a rule with tokens, e.g. "the order of size ⟦r1.y⟧ by ⟦r1.x⟧ is accepted at time ⟦r1.t1⟧".
std::string verbalize_head(const Rule& rule, const Glossary& glossary);

/// Verbalizes every step of a chase in step order, composing aggregate
/// contributions where needed.
std::vector<VerbalizedStep> verbalize_chase(const Chase& chase, const Glossary& glossary,
                                            const Lexicon& lexicon = {});

/// Capitalizes the first letter (ASCII) of a sentence.
std::string capitalize(std::string s);

}  // namespace chaseforge

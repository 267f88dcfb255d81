#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "chaseforge/ast.hpp"
#include "chaseforge/facts.hpp"

namespace chaseforge {

/// Variable bindings of one rule activation, including assignment results.
using Substitution = std::map<std::string, Value>;

/// One rule activation.
struct ChaseStep {
  StepId step_id = 0;
  std::string rule_id;
  Substitution subst;
  /// One id per positive body atom, in body order.
  std::vector<FactId> body_fact_ids;
  FactId derived_fact_id = 0;

  friend bool operator==(const ChaseStep&, const ChaseStep&) = default;
};

/// Result of reasoning: the augmented store and the steps that produced each
/// derived fact (first derivation only).
struct Chase {
  Program program;
  FactStore store;
  std::vector<ChaseStep> steps;

  const ChaseStep& step(StepId id) const { return steps.at(id); }
  const Rule& rule_of(const ChaseStep& s) const;
};

struct ReasonOptions {
  /// Only enforced for programs with existential heads.
  std::size_t max_steps = 10'000;
};

/// Facts visible to a semi-naive round: the delta is [begin, end) and atoms
/// may match any id below `end`.
struct DeltaRange {
  FactId begin = 0;
  FactId end = 0;
};

/// Computes the chase of `program` over `database` to fixpoint.
///
/// Step order: strata in order; semi-naive rounds within a stratum; rules in
/// program order within a round; matches in lexicographic order of their
/// body fact ids within a rule.
Chase reason(const FactStore& database, const Program& program, ReasonOptions opts = {});

/// One semi-naive application of a rule. Returned steps carry provisional
/// ids: step i derives fact `store.size() + i`. Only bindings that use at
/// least one delta fact are produced, and no head already in `store` is
/// emitted twice.
std::vector<ChaseStep> apply_rule(const Rule& rule, const FactStore& store, DeltaRange delta);

/// Evaluates a term under a substitution with exact decimal arithmetic.
/// Throws ArithmeticError.
Value evaluate(const Term& term, const Substitution& subst);

/// Throws ReasoningError on incomparable operands.
bool compare(const Value& lhs, CmpOp op, const Value& rhs);

/// Applies an aggregate function to contribution values in order.
Value fold_aggregate(AggregateFunc func, const std::vector<Value>& contributions);

/// Steps of the same rule and group as `step` that fed its running
/// aggregate, oldest first, ending with `step` itself. Throws ReasoningError
/// for a step whose rule has no aggregate.
std::vector<ChaseStep> compose_back(const ChaseStep& step, const Chase& chase);

/// Group key of an aggregate step: values of the rule's group variables.
std::vector<Value> group_key(const Rule& rule, const Substitution& subst);

/// Grounds an atom (no existentials) under a substitution.
GroundAtom ground(const Atom& atom, const Substitution& subst);

}  // namespace chaseforge

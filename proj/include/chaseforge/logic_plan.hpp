#pragma once

#include <string>
#include <utility>
#include <vector>

#include "chaseforge/ast.hpp"
#include "chaseforge/glossary.hpp"
#include "chaseforge/verbalizer.hpp"

namespace chaseforge {

struct PlanNode {
  std::string rule_id;
  std::string head_predicate;
  /// Predicates of positive and negated body atoms, in body order, deduplicated.
  std::vector<std::string> body_predicates;
};

/// Producer rule id -> consumer rule id.
struct PlanEdge {
  std::string from;
  std::string to;
  /// Predicate linking the two rules.
  std::string predicate;

  friend bool operator==(const PlanEdge&, const PlanEdge&) = default;
};

/// Rule dependency graph: one node per rule in program order, one edge for
/// every rule whose head predicate occurs in another (or the same) rule's body.
struct LogicPlan {
  std::vector<PlanNode> nodes;
  std::vector<PlanEdge> edges;

  const PlanNode* find(const std::string& rule_id) const;
};

LogicPlan build_logic_plan(const Program& program);

struct VerbalizedNode {
  std::string rule_id;
  std::string sentence;      // tokenized rule sentence
  std::string head_clause;   // tokenized head clause
  std::string head_predicate;
  /// Glossary noun phrase for the head predicate, e.g. "the accepted orders".
  std::string head_description;
};

struct VerbalizedPlan {
  std::vector<VerbalizedNode> nodes;
  std::vector<PlanEdge> edges;

  const VerbalizedNode* find(const std::string& rule_id) const;
};

/// Throws GlossaryError when a plan predicate has no entry.
VerbalizedPlan verbalize_plan(const LogicPlan& plan, const Program& program, const Glossary& glossary,
                              const Lexicon& lexicon = {});

/// Graphviz digraph with one box per rule and predicate-labeled edges.
std::string plan_to_dot(const LogicPlan& plan, const Program& program);

}  // namespace chaseforge

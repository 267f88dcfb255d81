#include "chaseforge/logic_plan.hpp"

#include <algorithm>

#include "chaseforge/error.hpp"

namespace chaseforge {

const PlanNode* LogicPlan::find(const std::string& rule_id) const {
  for (const auto& n : nodes)
    if (n.rule_id == rule_id) return &n;
  return nullptr;
}

const VerbalizedNode* VerbalizedPlan::find(const std::string& rule_id) const {
  for (const auto& n : nodes)
    if (n.rule_id == rule_id) return &n;
  return nullptr;
}

LogicPlan build_logic_plan(const Program& program) {
  LogicPlan plan;
  for (const auto& r : program.rules) {
    PlanNode n{r.id, r.head.predicate, {}};
    auto add = [&](const Atom* a) {
      if (std::find(n.body_predicates.begin(), n.body_predicates.end(), a->predicate) == n.body_predicates.end())
        n.body_predicates.push_back(a->predicate);
    };
    for (const auto& lit : r.body) {
      if (auto p = std::get_if<PositiveLiteral>(&lit)) add(&p->atom);
      if (auto q = std::get_if<NegatedLiteral>(&lit)) add(&q->atom);
    }
    plan.nodes.push_back(std::move(n));
  }
  for (const auto& producer : plan.nodes)
    for (const auto& consumer : plan.nodes)
      for (const auto& p : consumer.body_predicates)
        if (p == producer.head_predicate) plan.edges.push_back({producer.rule_id, consumer.rule_id, p});
  return plan;
}

VerbalizedPlan verbalize_plan(const LogicPlan& plan, const Program& program, const Glossary& glossary,
                              const Lexicon& lexicon) {
  VerbalizedPlan out;
  out.edges = plan.edges;
  for (const auto& n : plan.nodes) {
    const Rule* r = program.find_rule(n.rule_id);
    if (!r) throw ReasoningError("plan node " + n.rule_id + " names no rule of the program");
    const GlossaryEntry& e = glossary.at(r->head.predicate, r->head.args.size());
    out.nodes.push_back({n.rule_id, verbalize_rule(*r, glossary, lexicon), verbalize_head(*r, glossary),
                         n.head_predicate, e.description ? *e.description : "the " + n.head_predicate + " facts"});
  }
  return out;
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string plan_to_dot(const LogicPlan& plan, const Program& program) {
  std::string out = "digraph plan {\n  node [shape=box];\n";
  for (const auto& n : plan.nodes) {
    const Rule* r = program.find_rule(n.rule_id);
    std::string label = r ? to_source(*r, false) : n.rule_id;
    out += "  \"" + dot_escape(n.rule_id) + "\" [label=\"" + dot_escape(n.rule_id + ": " + label) + "\"];\n";
  }
  for (const auto& e : plan.edges)
    out += "  \"" + dot_escape(e.from) + "\" -> \"" + dot_escape(e.to) + "\" [label=\"" + dot_escape(e.predicate) +
           "\"];\n";
  out += "}\n";
  return out;
}

}  // namespace chaseforge

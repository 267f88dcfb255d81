#include "chaseforge/verbalizer.hpp"

#include "json.hpp"

#include "chaseforge/error.hpp"
#include "chaseforge/tokens.hpp"

namespace chaseforge {

std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

Lexicon Lexicon::from_json(std::string_view text) {
  Lexicon lex;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("lexicon: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("lexicon: expected a JSON object");
  std::map<std::string, std::string*> words = {
      {"since", &lex.since},   {"and", &lex.conjunction},         {"not", &lex.negation},
      {"then", &lex.then},     {"together_with", &lex.together_with}, {"where", &lex.where},
      {"computed_as", &lex.computed_as}};
  for (const auto& [key, value] : j.items()) {
    if (auto it = words.find(key); it != words.end()) {
      *it->second = value.get<std::string>();
    } else if (key == "comparisons") {
      static const std::map<std::string, CmpOp> ops = {{"<", CmpOp::Lt},  {">", CmpOp::Gt},  {"<=", CmpOp::Le},
                                                       {">=", CmpOp::Ge}, {"==", CmpOp::Eq}, {"!=", CmpOp::Ne}};
      for (const auto& [op, phrase] : value.items()) {
        auto o = ops.find(op);
        if (o == ops.end()) throw ParseError("lexicon: unknown comparison '" + op + "'");
        lex.comparisons[o->second] = phrase.get<std::string>();
      }
    } else if (key == "operators") {
      static const std::map<std::string, ArithOp> ops = {
          {"+", ArithOp::Add}, {"-", ArithOp::Sub}, {"*", ArithOp::Mul}, {"/", ArithOp::Div}};
      for (const auto& [op, phrase] : value.items()) {
        auto o = ops.find(op);
        if (o == ops.end()) throw ParseError("lexicon: unknown operator '" + op + "'");
        lex.operators[o->second] = phrase.get<std::string>();
      }
    } else if (key == "aggregates") {
      static const std::map<std::string, AggregateFunc> fs = {{"msum", AggregateFunc::Sum},
                                                              {"mcount", AggregateFunc::Count},
                                                              {"mmin", AggregateFunc::Min},
                                                              {"mmax", AggregateFunc::Max}};
      for (const auto& [f, phrase] : value.items()) {
        auto o = fs.find(f);
        if (o == fs.end()) throw ParseError("lexicon: unknown aggregate '" + f + "'");
        lex.aggregates[o->second] = phrase.get<std::string>();
      }
    } else {
      throw ParseError("lexicon: unknown key '" + key + "'");
    }
  }
  return lex;
}

namespace {

using VarText = std::function<std::string(const std::string&)>;

std::string atom_clause(const Atom& a, const Glossary& g, const VarText& var) {
  const GlossaryEntry& e = g.at(a.predicate, a.args.size());
  std::vector<std::string> values;
  values.reserve(a.args.size());
  for (const auto& t : a.args) {
    if (auto v = t.as_variable())
      values.push_back(var(v->name));
    else if (auto x = t.as_existential())
      values.push_back(var(x->name));
    else
      values.push_back(t.as_constant()->value.to_text());
  }
  return e.render(values);
}

int precedence(ArithOp op) { return (op == ArithOp::Add || op == ArithOp::Sub) ? 1 : 2; }

std::string expr_text(const Term& t, const Lexicon& lex, const VarText& var, int parent, bool right) {
  if (auto v = t.as_variable()) return var(v->name);
  if (auto c = t.as_constant()) return c->value.to_text();
  if (auto x = t.as_existential()) return var(x->name);
  const BinaryExpr& b = *t.as_binary();
  int p = precedence(b.op);
  std::string s = expr_text(b.lhs, lex, var, p, false) + " " + lex.operators.at(b.op) + " " +
                  expr_text(b.rhs, lex, var, p, true);
  if (p < parent || (right && p == parent)) s = "(" + s + ")";
  return s;
}

struct Clause {
  std::string text;
  bool atom;  // joined with the conjunction
};

Clause literal_clause(const BodyLiteral& lit, const Glossary& g, const Lexicon& lex, const VarText& var) {
  if (auto p = std::get_if<PositiveLiteral>(&lit)) return {atom_clause(p->atom, g, var), true};
  if (auto n = std::get_if<NegatedLiteral>(&lit)) return {lex.negation + " " + atom_clause(n->atom, g, var), true};
  if (auto c = std::get_if<Comparison>(&lit))
    return {lex.where + " " + expr_text(c->lhs, lex, var, 0, false) + " " + lex.comparisons.at(c->op) + " " +
                expr_text(c->rhs, lex, var, 0, false),
            false};
  const auto& a = std::get<Assignment>(lit);
  std::string source;
  if (auto agg = a.aggregate())
    source = lex.aggregates.at(agg->func) + " " + expr_text(agg->argument, lex, var, 0, false);
  else
    source = expr_text(std::get<Term>(a.source), lex, var, 0, false);
  return {"with " + var(a.target) + " " + lex.computed_as + " " + source, false};
}

std::string join_clauses(const std::vector<Clause>& clauses, const Lexicon& lex) {
  std::string out;
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    if (i == 0)
      out += clauses[i].text;
    else if (clauses[i].atom)
      out += ", " + lex.conjunction + " " + clauses[i].text;
    else
      out += ", " + clauses[i].text;
  }
  return out;
}

std::vector<Clause> body_clauses(const Rule& r, const Glossary& g, const Lexicon& lex, const VarText& var,
                                 bool atoms_only) {
  std::vector<Clause> out;
  for (const auto& lit : r.body) {
    bool is_atom = std::holds_alternative<PositiveLiteral>(lit) || std::holds_alternative<NegatedLiteral>(lit);
    if (atoms_only && !is_atom) continue;
    out.push_back(literal_clause(lit, g, lex, var));
  }
  return out;
}

std::string assemble(const std::vector<std::string>& groups, const std::string& head, const Lexicon& lex) {
  std::string body;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (groups[i].empty()) continue;
    if (!body.empty()) body += ", " + lex.together_with + " ";
    body += groups[i];
  }
  if (body.empty()) return capitalize(head) + ".";
  return lex.since + " " + body + ", " + lex.then + " " + head + ".";
}

VarText subst_text(const ChaseStep& s) {
  return [&s](const std::string& name) -> std::string {
    auto it = s.subst.find(name);
    if (it == s.subst.end())
      throw ReasoningError("step " + std::to_string(s.step_id) + " has no binding for variable '" + name + "'");
    return it->second.to_text();
  };
}

VarText token_text(const Rule& r) {
  return [&r](const std::string& name) { return make_token(r.id, name); };
}

}  // namespace

std::string verbalize_atom(const GroundAtom& atom, const Glossary& glossary) {
  const GlossaryEntry& e = glossary.at(atom.predicate, atom.args.size());
  std::vector<std::string> values;
  values.reserve(atom.args.size());
  for (const auto& v : atom.args) values.push_back(v.to_text());
  return e.render(values);
}

VerbalizedStep verbalize_step(const ChaseStep& step, const std::vector<ChaseStep>& contributions,
                              const Program& program, const Glossary& glossary, const Lexicon& lexicon) {
  const Rule* rule = program.find_rule(step.rule_id);
  if (!rule) throw ReasoningError("step " + std::to_string(step.step_id) + " names unknown rule " + step.rule_id);
  if (rule->has_aggregate() == contributions.empty())
    throw ReasoningError("step " + std::to_string(step.step_id) + ": contribution list inconsistent with rule " +
                         rule->id + (rule->has_aggregate() ? " (aggregate rule needs contributions)" : " (no aggregate)"));
  if (!contributions.empty() && contributions.back().step_id != step.step_id)
    throw ReasoningError("step " + std::to_string(step.step_id) + ": contributions must end with the step itself");

  VerbalizedStep out;
  out.step_id = step.step_id;
  out.rule_id = step.rule_id;
  for (const auto& [k, v] : step.subst) out.slot_bindings[k] = v.to_text();

  std::vector<std::string> groups;
  for (std::size_t i = 0; i + 1 < contributions.size(); ++i) {
    const ChaseStep& c = contributions[i];
    if (c.rule_id != step.rule_id)
      throw ReasoningError("step " + std::to_string(step.step_id) + ": contribution " + std::to_string(c.step_id) +
                           " belongs to rule " + c.rule_id);
    groups.push_back(join_clauses(body_clauses(*rule, glossary, lexicon, subst_text(c), true), lexicon));
    out.contributions.push_back(c.step_id);
  }
  if (!contributions.empty()) out.contributions.push_back(step.step_id);
  VarText own = subst_text(step);
  groups.push_back(join_clauses(body_clauses(*rule, glossary, lexicon, own, false), lexicon));
  out.sentence = assemble(groups, atom_clause(rule->head, glossary, own), lexicon);
  return out;
}

std::string verbalize_rule(const Rule& rule, const Glossary& glossary, const Lexicon& lexicon) {
  VarText tok = token_text(rule);
  std::vector<std::string> groups{join_clauses(body_clauses(rule, glossary, lexicon, tok, false), lexicon)};
  return assemble(groups, atom_clause(rule.head, glossary, tok), lexicon);
}

std::string verbalize_head(const Rule& rule, const Glossary& glossary) {
  return atom_clause(rule.head, glossary, token_text(rule));
}

std::vector<VerbalizedStep> verbalize_chase(const Chase& chase, const Glossary& glossary, const Lexicon& lexicon) {
  std::vector<VerbalizedStep> out;
  out.reserve(chase.steps.size());
  for (const auto& step : chase.steps) {
    std::vector<ChaseStep> contrib;
    if (chase.rule_of(step).has_aggregate()) contrib = compose_back(step, chase);
    out.push_back(verbalize_step(step, contrib, chase.program, glossary, lexicon));
  }
  return out;
}

}  // namespace chaseforge

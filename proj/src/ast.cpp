#include "chaseforge/ast.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <cctype>

#include "chaseforge/error.hpp"

namespace chaseforge {

Term Term::binary(ArithOp op, Term lhs, Term rhs) {
  Term t;
  t.node_ = std::make_shared<const BinaryExpr>(BinaryExpr{op, std::move(lhs), std::move(rhs)});
  return t;
}

void Term::collect_variables(std::set<std::string>& out) const {
  if (auto v = as_variable()) {
    out.insert(v->name);
  } else if (auto b = as_binary()) {
    b->lhs.collect_variables(out);
    b->rhs.collect_variables(out);
  }
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_.index() != b.node_.index()) return false;
  if (auto ba = a.as_binary()) {
    auto bb = b.as_binary();
    return ba->op == bb->op && ba->lhs == bb->lhs && ba->rhs == bb->rhs;
  }
  return a.node_ == b.node_;
}

std::vector<const Atom*> Rule::positive_atoms() const {
  std::vector<const Atom*> out;
  for (const auto& lit : body)
    if (auto p = std::get_if<PositiveLiteral>(&lit)) out.push_back(&p->atom);
  return out;
}

std::vector<const Atom*> Rule::negated_atoms() const {
  std::vector<const Atom*> out;
  for (const auto& lit : body)
    if (auto n = std::get_if<NegatedLiteral>(&lit)) out.push_back(&n->atom);
  return out;
}

const Assignment* Rule::aggregate_assignment() const {
  for (const auto& lit : body)
    if (auto a = std::get_if<Assignment>(&lit); a && a->aggregate()) return a;
  return nullptr;
}

bool Rule::has_existentials() const {
  return std::any_of(head.args.begin(), head.args.end(),
                     [](const Term& t) { return t.as_existential() != nullptr; });
}

std::set<std::string> Rule::positive_variables() const {
  std::set<std::string> vars;
  for (const Atom* a : positive_atoms())
    for (const auto& t : a->args) t.collect_variables(vars);
  return vars;
}

std::vector<std::string> Rule::group_variables() const {
  const Assignment* agg = aggregate_assignment();
  std::vector<std::string> out;
  for (const auto& t : head.args) {
    auto v = t.as_variable();
    if (v && (!agg || v->name != agg->target) &&
        std::find(out.begin(), out.end(), v->name) == out.end())
      out.push_back(v->name);
  }
  return out;
}

const Rule* Program::find_rule(const std::string& id) const {
  for (const auto& r : rules)
    if (r.id == id) return &r;
  return nullptr;
}

std::size_t Program::stratum_of(const std::string& predicate) const {
  for (std::size_t i = 0; i < strata.size(); ++i)
    if (std::binary_search(strata[i].begin(), strata[i].end(), predicate)) return i;
  return 0;
}

bool Program::has_existentials() const {
  return std::any_of(rules.begin(), rules.end(), [](const Rule& r) { return r.has_existentials(); });
}

std::set<std::string> Program::predicates() const {
  std::set<std::string> out;
  for (const auto& r : rules) {
    out.insert(r.head.predicate);
    for (const auto& lit : r.body) {
      if (auto p = std::get_if<PositiveLiteral>(&lit)) out.insert(p->atom.predicate);
      if (auto n = std::get_if<NegatedLiteral>(&lit)) out.insert(n->atom.predicate);
    }
  }
  return out;
}

bool is_variable_name(const std::string& s) {
  if (s.empty() || !(s[0] >= 'a' && s[0] <= 'z')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

bool is_predicate_name(const std::string& s) {
  if (s.empty() || !(s[0] >= 'A' && s[0] <= 'Z')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

namespace {

[[noreturn]] void fail(const Rule& r, const std::string& msg) {
  throw ParseError("rule " + r.id + ": " + msg);
}

void check_atom_terms(const Rule& r, const Atom& a, bool head) {
  if (!is_predicate_name(a.predicate)) fail(r, "invalid predicate name '" + a.predicate + "'");
  for (const auto& t : a.args) {
    if (t.as_binary()) fail(r, "arithmetic is not allowed inside atom " + a.predicate);
    if (!head && t.as_existential()) fail(r, "existential marker outside the head");
    if (auto c = t.as_constant(); c && c->value.is_null())
      fail(r, "labeled nulls cannot appear in rules");
  }
}

std::set<std::string> vars_of(const Term& t) {
  std::set<std::string> s;
  t.collect_variables(s);
  return s;
}

}  // namespace

void validate_rule(const Rule& r) {
  check_atom_terms(r, r.head, true);
  const std::set<std::string> positive = r.positive_variables();
  std::set<std::string> bound = positive;
  std::set<std::string> assigned;
  const Assignment* agg_seen = nullptr;

  auto require_bound = [&](const std::set<std::string>& vars, const char* what) {
    for (const auto& v : vars)
      if (!bound.count(v)) fail(r, std::string("unsafe ") + what + ": variable '" + v + "' is not bound by a positive atom or an earlier assignment");
  };
  auto reject_aggregate_use = [&](const std::set<std::string>& vars) {
    if (agg_seen && vars.count(agg_seen->target))
      fail(r, "aggregate result '" + agg_seen->target + "' can only be used in the head");
  };

  for (const auto& lit : r.body) {
    if (auto p = std::get_if<PositiveLiteral>(&lit)) {
      check_atom_terms(r, p->atom, false);
    } else if (auto n = std::get_if<NegatedLiteral>(&lit)) {
      check_atom_terms(r, n->atom, false);
      std::set<std::string> vs;
      for (const auto& t : n->atom.args) t.collect_variables(vs);
      reject_aggregate_use(vs);
      require_bound(vs, "negation");
    } else if (auto c = std::get_if<Comparison>(&lit)) {
      auto vs = vars_of(c->lhs);
      auto rv = vars_of(c->rhs);
      vs.insert(rv.begin(), rv.end());
      reject_aggregate_use(vs);
      require_bound(vs, "comparison");
    } else if (auto a = std::get_if<Assignment>(&lit)) {
      if (!is_variable_name(a->target)) fail(r, "invalid assignment target '" + a->target + "'");
      if (positive.count(a->target) || assigned.count(a->target))
        fail(r, "assignment target '" + a->target + "' is already bound");
      if (auto ag = a->aggregate()) {
        if (agg_seen) fail(r, "at most one aggregate per rule");
        auto vs = vars_of(ag->argument);
        for (const auto& v : vs)
          if (!positive.count(v)) fail(r, "aggregate argument variable '" + v + "' must be bound by a positive atom");
        agg_seen = a;
      } else {
        auto vs = vars_of(std::get<Term>(a->source));
        reject_aggregate_use(vs);
        require_bound(vs, "assignment");
      }
      assigned.insert(a->target);
      bound.insert(a->target);
    }
  }
  std::set<std::string> existentials;
  for (const auto& t : r.head.args) {
    if (auto e = t.as_existential()) {
      if (!is_variable_name(e->name)) fail(r, "invalid existential name '" + e->name + "'");
      if (bound.count(e->name)) fail(r, "existential '?" + e->name + "' is also bound in the body");
      existentials.insert(e->name);
    } else if (auto v = t.as_variable()) {
      if (!bound.count(v->name)) fail(r, "unbound head variable '" + v->name + "'");
    }
  }
  if (agg_seen) {
    if (!existentials.empty()) fail(r, "aggregates and existentials cannot be combined");
    bool in_head = std::any_of(r.head.args.begin(), r.head.args.end(), [&](const Term& t) {
      auto v = t.as_variable();
      return v && v->name == agg_seen->target;
    });
    if (!in_head) fail(r, "aggregate result '" + agg_seen->target + "' must appear in the head");
  }
}

std::vector<std::vector<std::string>> stratify(const std::vector<Rule>& rules) {
  // Predicate dependency graph: body predicate -> head predicate.
  std::map<std::string, std::size_t> index;
  std::vector<std::string> names;
  auto node = [&](const std::string& p) {
    auto [it, inserted] = index.emplace(p, names.size());
    if (inserted) names.push_back(p);
    return it->second;
  };
  struct Edge {
    std::size_t to;
    bool strict;
  };
  std::vector<std::vector<Edge>> adj;
  auto add_edge = [&](std::size_t from, std::size_t to, bool strict) {
    if (adj.size() < names.size()) adj.resize(names.size());
    adj[from].push_back({to, strict});
  };
  for (const auto& r : rules) {
    std::size_t h = node(r.head.predicate);
    bool aggregated = r.has_aggregate();
    for (const auto& lit : r.body) {
      if (auto p = std::get_if<PositiveLiteral>(&lit)) {
        std::size_t b = node(p->atom.predicate);
        add_edge(b, h, aggregated);
      } else if (auto n = std::get_if<NegatedLiteral>(&lit)) {
        std::size_t b = node(n->atom.predicate);
        add_edge(b, h, true);
      }
    }
  }
  adj.resize(names.size());
  const std::size_t n = names.size();

  // Tarjan's SCC; components come out in reverse topological order.
  std::vector<int> idx(n, -1), low(n, 0), comp(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  int counter = 0, ncomp = 0;
  std::function<void(std::size_t)> strong = [&](std::size_t v) {
    idx[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (const auto& e : adj[v]) {
      if (idx[e.to] < 0) {
        strong(e.to);
        low[v] = std::min(low[v], low[e.to]);
      } else if (on_stack[e.to]) {
        low[v] = std::min(low[v], idx[e.to]);
      }
    }
    if (low[v] == idx[v]) {
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp[w] = ncomp;
      } while (w != v);
      ++ncomp;
    }
  };
  for (std::size_t v = 0; v < n; ++v)
    if (idx[v] < 0) strong(v);

  for (std::size_t v = 0; v < n; ++v)
    for (const auto& e : adj[v])
      if (e.strict && comp[v] == comp[e.to])
        throw ParseError("program is not stratifiable: cycle through negation or aggregation involving " +
                         names[v] + " and " + names[e.to]);

  // Longest path over the condensation; strict edges add one level.
  std::vector<std::vector<std::size_t>> members(ncomp);
  for (std::size_t v = 0; v < n; ++v) members[comp[v]].push_back(v);
  std::vector<std::size_t> level(ncomp, 0);
  for (int c = ncomp - 1; c >= 0; --c)
    for (std::size_t v : members[c])
      for (const auto& e : adj[v])
        if (comp[e.to] != c)
          level[comp[e.to]] = std::max(level[comp[e.to]], level[c] + (e.strict ? 1 : 0));

  std::map<std::size_t, std::vector<std::string>> by_level;
  for (std::size_t v = 0; v < n; ++v) by_level[level[comp[v]]].push_back(names[v]);
  std::vector<std::vector<std::string>> strata;
  for (auto& [lvl, preds] : by_level) {
    std::sort(preds.begin(), preds.end());
    strata.push_back(std::move(preds));
  }
  return strata;
}

Program make_program(std::vector<Rule> rules) {
  std::set<std::string> ids;
  for (const auto& r : rules) {
    if (!ids.insert(r.id).second) throw ParseError("duplicate rule id '" + r.id + "'");
    validate_rule(r);
  }
  Program p;
  p.strata = stratify(rules);
  p.rules = std::move(rules);
  return p;
}

const char* to_source(ArithOp op) {
  switch (op) {
    case ArithOp::Add: return "+";
    case ArithOp::Sub: return "-";
    case ArithOp::Mul: return "*";
    case ArithOp::Div: return "/";
  }
  return "?";
}

const char* to_source(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return "<";
    case CmpOp::Gt: return ">";
    case CmpOp::Le: return "<=";
    case CmpOp::Ge: return ">=";
    case CmpOp::Eq: return "==";
    case CmpOp::Ne: return "!=";
  }
  return "?";
}

const char* to_source(AggregateFunc f) {
  switch (f) {
    case AggregateFunc::Sum: return "msum";
    case AggregateFunc::Count: return "mcount";
    case AggregateFunc::Min: return "mmin";
    case AggregateFunc::Max: return "mmax";
  }
  return "?";
}

namespace {

int precedence(ArithOp op) { return (op == ArithOp::Add || op == ArithOp::Sub) ? 1 : 2; }

std::string term_source(const Term& t, int parent_prec, bool right_side) {
  if (auto v = t.as_variable()) return v->name;
  if (auto e = t.as_existential()) return "?" + e->name;
  if (auto c = t.as_constant()) return c->value.to_source();
  const BinaryExpr* b = t.as_binary();
  int prec = precedence(b->op);
  std::string s = term_source(b->lhs, prec, false) + " " + to_source(b->op) + " " + term_source(b->rhs, prec, true);
  if (prec < parent_prec || (right_side && prec == parent_prec)) s = "(" + s + ")";
  return s;
}

}  // namespace

std::string to_source(const Term& t) { return term_source(t, 0, false); }

std::string to_source(const Atom& a) {
  std::string s = a.predicate + "(";
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) s += ",";
    s += to_source(a.args[i]);
  }
  return s + ")";
}

std::string to_source(const BodyLiteral& l) {
  if (auto p = std::get_if<PositiveLiteral>(&l)) return to_source(p->atom);
  if (auto n = std::get_if<NegatedLiteral>(&l)) return "not " + to_source(n->atom);
  if (auto c = std::get_if<Comparison>(&l))
    return to_source(c->lhs) + " " + to_source(c->op) + " " + to_source(c->rhs);
  const auto& a = std::get<Assignment>(l);
  if (auto ag = a.aggregate()) return a.target + " = " + to_source(ag->func) + "(" + to_source(ag->argument) + ")";
  return a.target + " = " + to_source(std::get<Term>(a.source));
}

std::string to_source(const Rule& r, bool with_label) {
  std::string s = with_label ? r.id + ": " : "";
  for (std::size_t i = 0; i < r.body.size(); ++i) {
    if (i) s += ", ";
    s += to_source(r.body[i]);
  }
  return s + " -> " + to_source(r.head) + ".";
}

std::string to_source(const Program& p) {
  std::string s;
  for (const auto& r : p.rules) s += to_source(r) + "\n";
  return s;
}

}  // namespace chaseforge

#include "chaseforge/chase.hpp"

#include <algorithm>
#include <unordered_map>

#include "chaseforge/error.hpp"

namespace chaseforge {

const Rule& Chase::rule_of(const ChaseStep& s) const {
  const Rule* r = program.find_rule(s.rule_id);
  if (!r) throw ReasoningError("step " + std::to_string(s.step_id) + " names unknown rule " + s.rule_id);
  return *r;
}

Value evaluate(const Term& term, const Substitution& subst) {
  if (auto v = term.as_variable()) {
    auto it = subst.find(v->name);
    if (it == subst.end()) throw ArithmeticError("unbound variable '" + v->name + "'");
    return it->second;
  }
  if (auto c = term.as_constant()) return c->value;
  if (term.as_existential()) throw ArithmeticError("existential marker in expression");
  const BinaryExpr& b = *term.as_binary();
  Value lhs = evaluate(b.lhs, subst);
  Value rhs = evaluate(b.rhs, subst);
  for (const Value* v : {&lhs, &rhs}) {
    if (v->is_null()) throw ArithmeticError("arithmetic over labeled null " + v->to_source());
    if (!v->is_number()) throw ArithmeticError("non-numeric operand " + v->to_source());
  }
  Decimal a = lhs.as_number(), c = rhs.as_number();
  switch (b.op) {
    case ArithOp::Add: return Value::number(a + c);
    case ArithOp::Sub: return Value::number(a - c);
    case ArithOp::Mul: return Value::number(a * c);
    case ArithOp::Div: return Value::number(a / c);
  }
  throw ArithmeticError("unknown operator");
}

bool compare(const Value& lhs, CmpOp op, const Value& rhs) {
  if (lhs.kind() != rhs.kind())
    throw ReasoningError(std::string("type error: cannot compare ") + kind_name(lhs.kind()) + " " + lhs.to_source() +
                         " with " + kind_name(rhs.kind()) + " " + rhs.to_source());
  bool ordered = lhs.is_number() || lhs.is_string();
  if (!ordered && op != CmpOp::Eq && op != CmpOp::Ne)
    throw ReasoningError(std::string("type error: ") + kind_name(lhs.kind()) + " values are not ordered");
  auto ord = lhs <=> rhs;
  switch (op) {
    case CmpOp::Lt: return ord < 0;
    case CmpOp::Gt: return ord > 0;
    case CmpOp::Le: return ord <= 0;
    case CmpOp::Ge: return ord >= 0;
    case CmpOp::Eq: return ord == 0;
    case CmpOp::Ne: return ord != 0;
  }
  return false;
}

namespace {

Value require_number(const Value& v, AggregateFunc f) {
  if (!v.is_number())
    throw ArithmeticError(std::string(to_source(f)) + " over non-numeric value " + v.to_source());
  return v;
}

Value aggregate_step(AggregateFunc f, const std::optional<Value>& current, std::size_t count_before, const Value& v) {
  switch (f) {
    case AggregateFunc::Count: return Value::integer(static_cast<std::int64_t>(count_before + 1));
    case AggregateFunc::Sum: {
      Decimal x = require_number(v, f).as_number();
      return Value::number(current ? current->as_number() + x : x);
    }
    case AggregateFunc::Min:
      require_number(v, f);
      return current && *current <= v ? *current : v;
    case AggregateFunc::Max:
      require_number(v, f);
      return current && *current >= v ? *current : v;
  }
  return v;
}

}  // namespace

Value fold_aggregate(AggregateFunc func, const std::vector<Value>& contributions) {
  std::optional<Value> acc;
  for (std::size_t i = 0; i < contributions.size(); ++i) acc = aggregate_step(func, acc, i, contributions[i]);
  if (!acc) throw ReasoningError("aggregate over no contributions");
  return *acc;
}

GroundAtom ground(const Atom& atom, const Substitution& subst) {
  GroundAtom g;
  g.predicate = atom.predicate;
  g.args.reserve(atom.args.size());
  for (const auto& t : atom.args) {
    if (t.as_existential()) throw ReasoningError("cannot ground existential in " + atom.predicate);
    g.args.push_back(evaluate(t, subst));
  }
  return g;
}

std::vector<Value> group_key(const Rule& rule, const Substitution& subst) {
  std::vector<Value> key;
  for (const auto& v : rule.group_variables()) key.push_back(subst.at(v));
  return key;
}

namespace {

struct Derivation {
  Substitution subst;
  std::vector<FactId> body;
  GroundAtom head;
};

struct ValuesHash {
  std::size_t operator()(const std::vector<Value>& vs) const noexcept {
    std::size_t h = 17;
    for (const auto& v : vs) h = h * 31 + v.hash();
    return h;
  }
};

struct AggregateState {
  std::optional<Value> value;
  std::size_t count = 0;
};

/// Session state shared across rule applications: null counter and running
/// aggregate values per (rule, group).
class Reasoner {
 public:
  std::vector<Derivation> apply(const Rule& rule, const FactStore& store, DeltaRange delta) {
    atoms_ = rule.positive_atoms();
    rule_ = &rule;
    store_ = &store;
    matches_.clear();

    if (atoms_.empty()) {
      if (delta.begin == 0) {
        Substitution s;
        std::vector<FactId> body;
        finish(s, body);
      }
    } else {
      for (std::size_t d = 0; d < atoms_.size(); ++d) {
        Substitution s;
        std::vector<FactId> body;
        extend(0, d, delta, body, s);
      }
    }
    std::sort(matches_.begin(), matches_.end(),
              [](const Derivation& a, const Derivation& b) { return a.body < b.body; });

    const Assignment* agg = rule.aggregate_assignment();
    std::vector<Derivation> out;
    std::unordered_map<GroundAtom, bool, GroundAtomHash> pending;
    for (auto& m : matches_) {
      if (agg) {
        const Aggregate& a = *agg->aggregate();
        auto& state = aggregates_[rule.id][group_key(rule, m.subst)];
        Value contribution = evaluate(a.argument, m.subst);
        state.value = aggregate_step(a.func, state.value, state.count, contribution);
        ++state.count;
        m.subst[agg->target] = *state.value;
      }
      if (rule.has_existentials()) {
        if (existentially_satisfied(rule.head, m.subst, store, out)) continue;
        for (const auto& t : rule.head.args)
          if (auto e = t.as_existential(); e && !m.subst.count(e->name)) m.subst[e->name] = Value::null(next_null_++);
        m.head = ground_with_existentials(rule.head, m.subst);
      } else {
        m.head = ground(rule.head, m.subst);
      }
      if (store.contains(m.head) || pending.count(m.head)) continue;
      pending.emplace(m.head, true);
      out.push_back(std::move(m));
    }
    return out;
  }

 private:
  static GroundAtom ground_with_existentials(const Atom& head, const Substitution& s) {
    GroundAtom g;
    g.predicate = head.predicate;
    for (const auto& t : head.args) {
      if (auto e = t.as_existential())
        g.args.push_back(s.at(e->name));
      else
        g.args.push_back(evaluate(t, s));
    }
    return g;
  }

  // Restricted-chase check: some fact already agrees with the head on every
  // non-existential position.
  static bool existentially_satisfied(const Atom& head, const Substitution& s, const FactStore& store,
                                      const std::vector<Derivation>& pending) {
    std::vector<std::optional<Value>> pattern;
    for (const auto& t : head.args)
      pattern.push_back(t.as_existential() ? std::nullopt : std::optional<Value>(evaluate(t, s)));
    auto matches = [&](const GroundAtom& a) {
      if (a.predicate != head.predicate || a.args.size() != pattern.size()) return false;
      std::map<std::string, Value> ex;
      for (std::size_t i = 0; i < pattern.size(); ++i) {
        if (pattern[i]) {
          if (a.args[i] != *pattern[i]) return false;
        } else {
          const auto& name = head.args[i].as_existential()->name;
          auto [it, fresh] = ex.emplace(name, a.args[i]);
          if (!fresh && it->second != a.args[i]) return false;
        }
      }
      return true;
    };
    std::span<const FactId> candidates = store.by_predicate(head.predicate);
    for (std::size_t i = 0; i < pattern.size(); ++i)
      if (pattern[i]) {
        candidates = store.lookup(head.predicate, i, *pattern[i]);
        break;
      }
    for (FactId id : candidates)
      if (matches(store.at(id).atom)) return true;
    for (const auto& p : pending)
      if (matches(p.head)) return true;
    return false;
  }

  void extend(std::size_t i, std::size_t d, DeltaRange delta, std::vector<FactId>& body, Substitution& s) {
    if (i == atoms_.size()) {
      finish(s, body);
      return;
    }
    FactId lo = 0, hi = delta.end;
    if (i < d) hi = delta.begin;
    if (i == d) lo = delta.begin;
    if (lo >= hi) return;

    const Atom& atom = *atoms_[i];
    std::span<const FactId> candidates = store_->by_predicate(atom.predicate);
    for (std::size_t p = 0; p < atom.args.size(); ++p) {
      const Term& t = atom.args[p];
      if (auto c = t.as_constant()) {
        candidates = store_->lookup(atom.predicate, p, c->value);
        break;
      }
      if (auto v = t.as_variable(); v && s.count(v->name)) {
        candidates = store_->lookup(atom.predicate, p, s.at(v->name));
        break;
      }
    }
    auto first = std::lower_bound(candidates.begin(), candidates.end(), lo);
    auto last = std::lower_bound(first, candidates.end(), hi);

    std::vector<std::string> bound_here;
    for (auto it = first; it != last; ++it) {
      const GroundAtom& fact = store_->at(*it).atom;
      if (fact.args.size() != atom.args.size()) continue;
      bound_here.clear();
      bool ok = true;
      for (std::size_t p = 0; p < atom.args.size() && ok; ++p) {
        const Term& t = atom.args[p];
        if (auto c = t.as_constant()) {
          ok = c->value == fact.args[p];
        } else if (auto v = t.as_variable()) {
          auto [bit, fresh] = s.emplace(v->name, fact.args[p]);
          if (fresh)
            bound_here.push_back(v->name);
          else
            ok = bit->second == fact.args[p];
        }
      }
      if (ok) {
        body.push_back(*it);
        extend(i + 1, d, delta, body, s);
        body.pop_back();
      }
      for (const auto& name : bound_here) s.erase(name);
    }
  }

  // Non-positive literals in body order, after the join. The aggregate
  // assignment is applied later, in sorted match order.
  void finish(const Substitution& joined, const std::vector<FactId>& body) {
    Substitution s = joined;
    for (const auto& lit : rule_->body) {
      if (auto c = std::get_if<Comparison>(&lit)) {
        if (!compare(evaluate(c->lhs, s), c->op, evaluate(c->rhs, s))) return;
      } else if (auto a = std::get_if<Assignment>(&lit)) {
        if (!a->aggregate()) s[a->target] = evaluate(std::get<Term>(a->source), s);
      } else if (auto n = std::get_if<NegatedLiteral>(&lit)) {
        if (store_->contains(ground(n->atom, s))) return;
      }
    }
    matches_.push_back(Derivation{std::move(s), body, {}});
  }

  const Rule* rule_ = nullptr;
  const FactStore* store_ = nullptr;
  std::vector<const Atom*> atoms_;
  std::vector<Derivation> matches_;
  std::uint64_t next_null_ = 1;
  std::map<std::string, std::unordered_map<std::vector<Value>, AggregateState, ValuesHash>> aggregates_;
};

}  // namespace

std::vector<ChaseStep> apply_rule(const Rule& rule, const FactStore& store, DeltaRange delta) {
  Reasoner r;
  std::vector<ChaseStep> out;
  for (auto& d : r.apply(rule, store, delta)) {
    ChaseStep s;
    s.step_id = out.size();
    s.rule_id = rule.id;
    s.subst = std::move(d.subst);
    s.body_fact_ids = std::move(d.body);
    s.derived_fact_id = store.size() + out.size();
    out.push_back(std::move(s));
  }
  return out;
}

Chase reason(const FactStore& database, const Program& program, ReasonOptions opts) {
  Chase chase;
  chase.program = program;
  chase.store = database;
  Reasoner reasoner;
  const bool bounded = program.has_existentials();

  for (std::size_t stratum = 0; stratum < program.strata.size(); ++stratum) {
    std::vector<const Rule*> rules;
    for (const auto& r : program.rules)
      if (program.stratum_of(r.head.predicate) == stratum) rules.push_back(&r);
    if (rules.empty()) continue;

    DeltaRange delta{0, chase.store.size()};
    while (true) {
      for (const Rule* r : rules) {
        for (auto& d : reasoner.apply(*r, chase.store, delta)) {
          if (bounded && chase.steps.size() >= opts.max_steps)
            throw ReasoningError("chase step bound of " + std::to_string(opts.max_steps) +
                                 " exceeded (existential rules may not terminate)");
          StepId sid = chase.steps.size();
          auto [fid, inserted] = chase.store.insert(d.head, sid);
          if (!inserted) continue;
          chase.steps.push_back(ChaseStep{sid, r->id, std::move(d.subst), std::move(d.body), fid});
        }
      }
      if (chase.store.size() == delta.end) break;
      delta = DeltaRange{delta.end, chase.store.size()};
    }
  }
  return chase;
}

std::vector<ChaseStep> compose_back(const ChaseStep& step, const Chase& chase) {
  const Rule& rule = chase.rule_of(step);
  if (!rule.has_aggregate())
    throw ReasoningError("compose_back: rule " + rule.id + " of step " + std::to_string(step.step_id) +
                         " has no aggregate");
  auto key = group_key(rule, step.subst);
  std::vector<ChaseStep> out;
  for (const auto& s : chase.steps) {
    if (s.step_id > step.step_id) break;
    if (s.rule_id == step.rule_id && group_key(rule, s.subst) == key) out.push_back(s);
  }
  return out;
}

}  // namespace chaseforge

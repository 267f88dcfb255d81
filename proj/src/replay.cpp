#include "chaseforge/replay.hpp"

#include <set>
#include <sstream>

#include "json.hpp"

#include "chaseforge/error.hpp"
#include "chaseforge/parser.hpp"

namespace chaseforge {

using json = nlohmann::ordered_json;

std::vector<DumpedStep> to_dump(const Chase& chase) {
  std::vector<DumpedStep> out;
  out.reserve(chase.steps.size());
  for (const auto& s : chase.steps)
    out.push_back(DumpedStep{s.step_id, s.rule_id, chase.store.at(s.derived_fact_id).atom, s.derived_fact_id,
                             s.body_fact_ids, s.subst});
  return out;
}

std::string write_chase_dump(const Chase& chase) {
  std::string out;
  for (const auto& s : chase.steps) {
    json j;
    j["step"] = s.step_id;
    j["rule"] = s.rule_id;
    j["derived"] = to_source(chase.store.at(s.derived_fact_id).atom);
    j["derived_id"] = s.derived_fact_id;
    j["body"] = s.body_fact_ids;
    json subst = json::object();
    for (const auto& [k, v] : s.subst) subst[k] = v.to_source();
    j["subst"] = std::move(subst);
    out += j.dump() + "\n";
  }
  return out;
}

std::vector<DumpedStep> read_chase_dump(std::string_view text) {
  std::vector<DumpedStep> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      json j = json::parse(line);
      DumpedStep d;
      d.step = j.at("step").get<StepId>();
      d.rule = j.at("rule").get<std::string>();
      d.derived = parse_ground_atom(j.at("derived").get<std::string>());
      if (j.contains("derived_id")) d.derived_id = j["derived_id"].get<FactId>();
      d.body = j.at("body").get<std::vector<FactId>>();
      for (const auto& [k, v] : j.at("subst").items()) d.subst[k] = parse_value(v.get<std::string>());
      out.push_back(std::move(d));
    } catch (const json::exception& e) {
      throw ParseError(std::string("chase dump: ") + e.what(), {lineno, 1});
    } catch (const ParseError& e) {
      throw ParseError(std::string("chase dump: ") + e.what(), {lineno, 1});
    }
  }
  return out;
}

namespace {

struct Violation {
  std::string message;
};

void check(bool cond, const std::string& msg) {
  if (!cond) throw Violation{msg};
}

void collect_nulls(const GroundAtom& a, std::set<std::uint64_t>& out) {
  for (const auto& v : a.args)
    if (v.is_null()) out.insert(v.as_null().id);
}

}  // namespace

ValidationReport validate_chase(const std::vector<DumpedStep>& dump, const Program& program,
                                const FactStore& extensional) {
  ValidationReport report;
  auto fail = [&](StepId i, const std::string& msg) {
    report.ok = false;
    report.failed_step = i;
    report.message = "step " + std::to_string(i) + ": " + msg;
    return report;
  };

  // Full store: negated predicates live in lower strata, so checking against
  // the final store is equivalent to checking the stratum-closed one.
  FactStore store = extensional;
  std::optional<StepId> duplicate;
  std::vector<FactId> assigned(dump.size());
  for (std::size_t i = 0; i < dump.size(); ++i) {
    try {
      auto [id, fresh] = store.insert(dump[i].derived, i);
      assigned[i] = id;
      if (!fresh && !duplicate) duplicate = i;
    } catch (const ReasoningError& e) {
      if (!duplicate) duplicate = i;
      assigned[i] = store.size();
    }
  }

  std::set<std::uint64_t> seen_nulls;
  FactId nulls_upto = 0;
  for (std::size_t i = 0; i < dump.size(); ++i) {
    const DumpedStep& d = dump[i];
    try {
      check(d.step == i, "step ids must be dense (found " + std::to_string(d.step) + ")");
      check(duplicate != i, "derived fact " + to_source(d.derived) + " was already present");
      check(!d.derived_id || *d.derived_id == assigned[i],
            "derived_id " + std::to_string(d.derived_id.value_or(0)) + " does not match replayed id " +
                std::to_string(assigned[i]));
      const Rule* rule = program.find_rule(d.rule);
      check(rule != nullptr, "unknown rule " + d.rule);

      auto atoms = rule->positive_atoms();
      check(atoms.size() == d.body.size(), "body has " + std::to_string(d.body.size()) + " facts, rule " + rule->id +
                                               " has " + std::to_string(atoms.size()) + " positive atoms");
      for (std::size_t k = 0; k < atoms.size(); ++k) {
        check(d.body[k] < assigned[i], "body fact " + std::to_string(d.body[k]) + " does not precede the step");
        GroundAtom expected;
        try {
          expected = ground(*atoms[k], d.subst);
        } catch (const Error& e) {
          check(false, std::string("cannot substitute body atom: ") + e.what());
        }
        check(store.at(d.body[k]).atom == expected, "body fact " + std::to_string(d.body[k]) + " is " +
                                                         to_source(store.at(d.body[k]).atom) + ", expected " +
                                                         to_source(expected));
      }

      for (const auto& lit : rule->body) {
        if (auto c = std::get_if<Comparison>(&lit)) {
          check(compare(evaluate(c->lhs, d.subst), c->op, evaluate(c->rhs, d.subst)),
                "comparison " + to_source(lit) + " does not hold");
        } else if (auto a = std::get_if<Assignment>(&lit)) {
          auto it = d.subst.find(a->target);
          check(it != d.subst.end(), "assignment target " + a->target + " missing from substitution");
          Value expected;
          if (auto agg = a->aggregate()) {
            auto key = group_key(*rule, d.subst);
            std::vector<Value> contributions;
            for (std::size_t k = 0; k <= i; ++k)
              if (dump[k].rule == d.rule && group_key(*rule, dump[k].subst) == key)
                contributions.push_back(evaluate(agg->argument, dump[k].subst));
            expected = fold_aggregate(agg->func, contributions);
          } else {
            expected = evaluate(std::get<Term>(a->source), d.subst);
          }
          check(it->second == expected, a->target + " is " + it->second.to_source() + ", replay computes " +
                                            expected.to_source());
        } else if (auto n = std::get_if<NegatedLiteral>(&lit)) {
          GroundAtom g = ground(n->atom, d.subst);
          check(!store.contains(g), "negated atom " + to_source(g) + " is present");
        }
      }

      for (; nulls_upto < assigned[i] && nulls_upto < store.size(); ++nulls_upto)
        collect_nulls(store.at(nulls_upto).atom, seen_nulls);
      check(rule->head.predicate == d.derived.predicate && rule->head.args.size() == d.derived.args.size(),
            "derived fact " + to_source(d.derived) + " does not fit head " + to_source(rule->head));
      for (std::size_t k = 0; k < rule->head.args.size(); ++k) {
        const Term& t = rule->head.args[k];
        const Value& got = d.derived.args[k];
        if (auto e = t.as_existential()) {
          check(got.is_null() && !seen_nulls.count(got.as_null().id),
                "existential ?" + e->name + " must be a fresh labeled null, found " + got.to_source());
          auto it = d.subst.find(e->name);
          check(it == d.subst.end() || it->second == got, "existential ?" + e->name + " disagrees with substitution");
        } else {
          Value expected = evaluate(t, d.subst);
          check(got == expected, "head position " + std::to_string(k + 1) + " is " + got.to_source() +
                                     ", replay derives " + expected.to_source());
        }
      }
    } catch (const Violation& v) {
      return fail(i, v.message);
    } catch (const Error& e) {
      return fail(i, e.what());
    }
    ++report.steps_checked;
  }
  return report;
}

Chase chase_from_dump(const std::vector<DumpedStep>& dump, const Program& program, const FactStore& extensional) {
  ValidationReport r = validate_chase(dump, program, extensional);
  if (!r.ok) throw ReasoningError("invalid chase dump: " + r.message);
  Chase chase;
  chase.program = program;
  chase.store = extensional;
  for (const auto& d : dump) {
    auto [id, fresh] = chase.store.insert(d.derived, d.step);
    chase.steps.push_back(ChaseStep{d.step, d.rule, d.subst, d.body, id});
  }
  return chase;
}

}  // namespace chaseforge

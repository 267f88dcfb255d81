#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "chaseforge/value.hpp"

namespace chaseforge {

struct Variable {
  std::string name;
  friend bool operator==(const Variable&, const Variable&) = default;
};

/// Head-only variable marked `?z`; instantiated with a fresh labeled null.
struct Existential {
  std::string name;
  friend bool operator==(const Existential&, const Existential&) = default;
};

struct Constant {
  Value value;
  friend bool operator==(const Constant&, const Constant&) = default;
};

enum class ArithOp { Add, Sub, Mul, Div };

struct BinaryExpr;

/// Variable, constant, existential marker or arithmetic expression.
class Term {
 public:
  using Node = std::variant<Variable, Constant, Existential, std::shared_ptr<const BinaryExpr>>;

  Term() : node_(Constant{}) {}
  Term(Variable v) : node_(std::move(v)) {}
  Term(Constant c) : node_(std::move(c)) {}
  Term(Existential e) : node_(std::move(e)) {}
  static Term var(std::string name) { return Term(Variable{std::move(name)}); }
  static Term constant(Value v) { return Term(Constant{std::move(v)}); }
  static Term binary(ArithOp op, Term lhs, Term rhs);

  const Node& node() const noexcept { return node_; }
  const Variable* as_variable() const { return std::get_if<Variable>(&node_); }
  const Constant* as_constant() const { return std::get_if<Constant>(&node_); }
  const Existential* as_existential() const { return std::get_if<Existential>(&node_); }
  const BinaryExpr* as_binary() const {
    auto p = std::get_if<std::shared_ptr<const BinaryExpr>>(&node_);
    return p ? p->get() : nullptr;
  }

  /// Variables occurring anywhere in the term (existentials excluded).
  void collect_variables(std::set<std::string>& out) const;

  friend bool operator==(const Term& a, const Term& b);

 private:
  Node node_;
};

struct BinaryExpr {
  ArithOp op;
  Term lhs;
  Term rhs;
};

struct Atom {
  std::string predicate;
  std::vector<Term> args;
  friend bool operator==(const Atom&, const Atom&) = default;
};

struct PositiveLiteral {
  Atom atom;
  friend bool operator==(const PositiveLiteral&, const PositiveLiteral&) = default;
};

struct NegatedLiteral {
  Atom atom;
  friend bool operator==(const NegatedLiteral&, const NegatedLiteral&) = default;
};

enum class CmpOp { Lt, Gt, Le, Ge, Eq, Ne };

struct Comparison {
  Term lhs;
  CmpOp op;
  Term rhs;
  friend bool operator==(const Comparison&, const Comparison&) = default;
};

/// Monotonic aggregation; grouped by the head's non-aggregate variables.
enum class AggregateFunc { Sum, Count, Min, Max };

struct Aggregate {
  AggregateFunc func;
  Term argument;
  friend bool operator==(const Aggregate&, const Aggregate&) = default;
};

struct Assignment {
  std::string target;
  std::variant<Term, Aggregate> source;
  friend bool operator==(const Assignment&, const Assignment&) = default;

  const Aggregate* aggregate() const { return std::get_if<Aggregate>(&source); }
};

using BodyLiteral = std::variant<PositiveLiteral, NegatedLiteral, Comparison, Assignment>;

struct Rule {
  std::string id;
  std::vector<BodyLiteral> body;
  Atom head;

  friend bool operator==(const Rule&, const Rule&) = default;

  std::vector<const Atom*> positive_atoms() const;
  std::vector<const Atom*> negated_atoms() const;
  /// The aggregate assignment, if the rule has one (at most one is allowed).
  const Assignment* aggregate_assignment() const;
  bool has_aggregate() const { return aggregate_assignment() != nullptr; }
  bool has_existentials() const;
  /// Variables bound by positive atoms.
  std::set<std::string> positive_variables() const;
  /// Head variables that form the aggregate group key, in head order.
  std::vector<std::string> group_variables() const;
};

/// Rules plus their stratification. Construct through make_program or
/// parse_program so that the invariants hold.
struct Program {
  std::vector<Rule> rules;
  /// Predicate sets in evaluation order, each sorted by name.
  std::vector<std::vector<std::string>> strata;

  const Rule* find_rule(const std::string& id) const;
  /// Stratum index of a predicate; 0 for predicates no rule mentions.
  std::size_t stratum_of(const std::string& predicate) const;
  bool has_existentials() const;
  /// Predicates mentioned anywhere in the rules, sorted.
  std::set<std::string> predicates() const;

  friend bool operator==(const Program& a, const Program& b) { return a.rules == b.rules; }
};

/// Validates rule safety and id uniqueness, then stratifies.
Program make_program(std::vector<Rule> rules);

/// Topologically ordered strata; throws ParseError on a cycle through
/// negation or aggregation.
std::vector<std::vector<std::string>> stratify(const std::vector<Rule>& rules);
inline std::vector<std::vector<std::string>> stratify(const Program& p) { return stratify(p.rules); }

/// Checks one rule's safety conditions; throws ParseError.
void validate_rule(const Rule& rule);

bool is_variable_name(const std::string& s);
bool is_predicate_name(const std::string& s);

const char* to_source(ArithOp op);
const char* to_source(CmpOp op);
const char* to_source(AggregateFunc f);

std::string to_source(const Term& t);
std::string to_source(const Atom& a);
std::string to_source(const BodyLiteral& l);
/// `[id: ]body -> head.`
std::string to_source(const Rule& r, bool with_label = true);
std::string to_source(const Program& p);

}  // namespace chaseforge

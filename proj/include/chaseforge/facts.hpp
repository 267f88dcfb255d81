#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "chaseforge/value.hpp"

namespace chaseforge {

using FactId = std::size_t;
using StepId = std::size_t;

struct GroundAtom {
  std::string predicate;
  std::vector<Value> args;

  friend bool operator==(const GroundAtom&, const GroundAtom&) = default;
  friend auto operator<=>(const GroundAtom&, const GroundAtom&) = default;
};

/// `Open("EGTech",0.3,1)`, reparseable by parse_facts.
std::string to_source(const GroundAtom& a);

struct GroundAtomHash {
  std::size_t operator()(const GroundAtom& a) const noexcept;
};

struct Fact {
  FactId id = 0;
  GroundAtom atom;
  /// Producing chase step; empty for extensional facts.
  std::optional<StepId> step;

  bool extensional() const { return !step.has_value(); }
};

/// Insertion-ordered set of ground atoms with dense ids and per-position
/// value indexes. Id lists returned by the lookups are ascending.
class FactStore {
 public:
  /// Returns the id of the atom and whether it was newly inserted. Throws
  /// ReasoningError if the predicate is already known with another arity.
  std::pair<FactId, bool> insert(GroundAtom atom, std::optional<StepId> step = std::nullopt);

  std::optional<FactId> find(const GroundAtom& atom) const;
  bool contains(const GroundAtom& atom) const { return find(atom).has_value(); }

  const Fact& at(FactId id) const { return facts_.at(id); }
  std::size_t size() const { return facts_.size(); }
  bool empty() const { return facts_.empty(); }
  std::span<const Fact> facts() const { return facts_; }

  std::span<const FactId> by_predicate(const std::string& predicate) const;
  std::span<const FactId> lookup(const std::string& predicate, std::size_t position, const Value& v) const;

  std::optional<std::size_t> arity(const std::string& predicate) const;
  /// Predicates in order of first appearance.
  const std::vector<std::string>& predicates() const { return predicate_order_; }

 private:
  struct PredicateIndex {
    std::size_t arity = 0;
    std::vector<FactId> ids;
    std::vector<std::unordered_map<Value, std::vector<FactId>>> by_position;
  };

  std::vector<Fact> facts_;
  std::unordered_map<GroundAtom, FactId, GroundAtomHash> ids_;
  std::unordered_map<std::string, PredicateIndex> preds_;
  std::vector<std::string> predicate_order_;
};

}  // namespace chaseforge

#include "chaseforge/facts.hpp"

#include "chaseforge/error.hpp"

namespace chaseforge {

std::string to_source(const GroundAtom& a) {
  std::string s = a.predicate + "(";
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) s += ",";
    s += a.args[i].to_source();
  }
  return s + ")";
}

std::size_t GroundAtomHash::operator()(const GroundAtom& a) const noexcept {
  std::size_t h = std::hash<std::string>{}(a.predicate);
  for (const auto& v : a.args) h = h * 1000003u ^ v.hash();
  return h;
}

std::pair<FactId, bool> FactStore::insert(GroundAtom atom, std::optional<StepId> step) {
  if (auto it = ids_.find(atom); it != ids_.end()) return {it->second, false};

  auto [pit, fresh] = preds_.try_emplace(atom.predicate);
  PredicateIndex& idx = pit->second;
  if (fresh) {
    idx.arity = atom.args.size();
    idx.by_position.resize(idx.arity);
    predicate_order_.push_back(atom.predicate);
  } else if (idx.arity != atom.args.size()) {
    throw ReasoningError("arity conflict for predicate " + atom.predicate + ": " + std::to_string(idx.arity) +
                         " vs " + std::to_string(atom.args.size()));
  }

  FactId id = facts_.size();
  idx.ids.push_back(id);
  for (std::size_t i = 0; i < atom.args.size(); ++i) idx.by_position[i][atom.args[i]].push_back(id);
  ids_.emplace(atom, id);
  facts_.push_back(Fact{id, std::move(atom), step});
  return {id, true};
}

std::optional<FactId> FactStore::find(const GroundAtom& atom) const {
  if (auto it = ids_.find(atom); it != ids_.end()) return it->second;
  return std::nullopt;
}

std::span<const FactId> FactStore::by_predicate(const std::string& predicate) const {
  auto it = preds_.find(predicate);
  if (it == preds_.end()) return {};
  return it->second.ids;
}

std::span<const FactId> FactStore::lookup(const std::string& predicate, std::size_t position, const Value& v) const {
  auto it = preds_.find(predicate);
  if (it == preds_.end() || position >= it->second.arity) return {};
  const auto& m = it->second.by_position[position];
  auto vit = m.find(v);
  if (vit == m.end()) return {};
  return vit->second;
}

std::optional<std::size_t> FactStore::arity(const std::string& predicate) const {
  auto it = preds_.find(predicate);
  if (it == preds_.end()) return std::nullopt;
  return it->second.arity;
}

}  // namespace chaseforge

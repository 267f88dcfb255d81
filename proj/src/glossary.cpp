#include "chaseforge/glossary.hpp"

#include <algorithm>

#include "chaseforge/error.hpp"

namespace chaseforge {

std::vector<TemplatePiece> compile_template(const std::string& text, const std::vector<std::string>& slots,
                                            bool require_all_slots) {
  std::vector<TemplatePiece> pieces;
  std::vector<bool> seen(slots.size(), false);
  std::string literal;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '{') {
      auto close = text.find('}', i);
      if (close == std::string::npos) throw ParseError("unterminated slot in template \"" + text + "\"");
      std::string name = text.substr(i + 1, close - i - 1);
      auto it = std::find(slots.begin(), slots.end(), name);
      if (it == slots.end()) throw ParseError("unknown slot {" + name + "} in template \"" + text + "\"");
      if (!literal.empty()) pieces.emplace_back(std::move(literal));
      literal.clear();
      std::size_t idx = static_cast<std::size_t>(it - slots.begin());
      seen[idx] = true;
      pieces.emplace_back(idx);
      i = close + 1;
    } else {
      literal += text[i++];
    }
  }
  if (!literal.empty()) pieces.emplace_back(std::move(literal));
  if (require_all_slots)
    for (std::size_t k = 0; k < slots.size(); ++k)
      if (!seen[k]) throw ParseError("template \"" + text + "\" is missing slot {" + slots[k] + "}");
  return pieces;
}

std::string GlossaryEntry::render(const std::vector<std::string>& values) const {
  std::string out;
  for (const auto& p : pieces) {
    if (auto lit = std::get_if<std::string>(&p))
      out += *lit;
    else
      out += values.at(std::get<std::size_t>(p));
  }
  return out;
}

std::string GlossaryEntry::fill(const std::string& text, const std::vector<std::string>& values) const {
  std::string out;
  for (const auto& p : compile_template(text, slots, false)) {
    if (auto lit = std::get_if<std::string>(&p))
      out += *lit;
    else
      out += values.at(std::get<std::size_t>(p));
  }
  return out;
}

SlotPhrase GlossaryEntry::phrase(std::size_t i) const {
  const std::string& name = slots.at(i);
  SlotPhrase p;
  if (auto it = phrases.find(name); it != phrases.end()) p = it->second;
  if (p.wh.empty()) p.wh = "what";
  if (p.answer.empty()) p.answer = "{" + name + "}";
  return p;
}

void Glossary::add(GlossaryEntry entry) {
  if (index_.count(entry.predicate)) throw GlossaryError("duplicate glossary entry for " + entry.predicate);
  index_[entry.predicate] = entries_.size();
  entries_.push_back(std::move(entry));
}

const GlossaryEntry* Glossary::find(const std::string& predicate) const {
  auto it = index_.find(predicate);
  return it == index_.end() ? nullptr : &entries_[it->second];
}

const GlossaryEntry& Glossary::at(const std::string& predicate, std::optional<std::size_t> arity) const {
  const GlossaryEntry* e = find(predicate);
  if (!e) throw GlossaryError("no glossary entry for predicate " + predicate);
  if (arity && *arity != e->arity())
    throw GlossaryError("glossary entry for " + predicate + " has " + std::to_string(e->arity()) +
                        " slots but the predicate is used with arity " + std::to_string(*arity));
  return *e;
}

std::vector<std::string> Glossary::missing(const std::set<std::string>& used) const {
  std::vector<std::string> out;
  for (const auto& p : used)
    if (!find(p)) out.push_back(p);
  return out;
}

}  // namespace chaseforge

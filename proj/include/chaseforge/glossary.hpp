#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace chaseforge {

/// Question material for one argument position.
struct SlotPhrase {
  /// Replaces the answer span in questions, e.g. "which trader".
  std::string wh;
  /// Span of the sentence template the wh-phrase stands for, e.g.
  /// "the trader {x}". Defaults to the bare slot.
  std::string answer;
};

/// One piece of a parsed sentence template: literal text or a slot index.
using TemplatePiece = std::variant<std::string, std::size_t>;

struct GlossaryEntry {
  std::string predicate;
  std::vector<std::string> slots;
  std::string sentence;  // raw template with {slot} placeholders
  std::vector<TemplatePiece> pieces;
  std::map<std::string, SlotPhrase> phrases;
  /// Noun phrase naming the predicate's facts, e.g. "the returns obtained by a trader".
  std::optional<std::string> description;

  std::size_t arity() const { return slots.size(); }
  /// Fills the template; `values` is indexed by argument position.
  std::string render(const std::vector<std::string>& values) const;
  /// Slot phrase for argument i, with defaults applied.
  SlotPhrase phrase(std::size_t i) const;
  /// Fills an arbitrary text that uses this entry's {slot} placeholders.
  std::string fill(const std::string& text, const std::vector<std::string>& values) const;
};

class Glossary {
 public:
  /// Throws GlossaryError on a duplicate predicate.
  void add(GlossaryEntry entry);

  const GlossaryEntry* find(const std::string& predicate) const;
  /// Throws GlossaryError when the predicate has no entry or its arity differs.
  const GlossaryEntry& at(const std::string& predicate, std::optional<std::size_t> arity = std::nullopt) const;

  /// Entries in declaration order.
  const std::vector<GlossaryEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  /// Predicates from `used` that lack an entry.
  std::vector<std::string> missing(const std::set<std::string>& used) const;

 private:
  std::vector<GlossaryEntry> entries_;
  std::map<std::string, std::size_t> index_;
};

/// Splits a template into pieces; throws ParseError on an unknown or
/// missing slot.
std::vector<TemplatePiece> compile_template(const std::string& text, const std::vector<std::string>& slots,
                                            bool require_all_slots);

}  // namespace chaseforge

#pragma once

#include <string_view>

#include "chaseforge/ast.hpp"
#include "chaseforge/facts.hpp"
#include "chaseforge/glossary.hpp"

namespace chaseforge {

/// Parses `.vada` source: `[label:] body -> head.` rules, `#` comments.
/// Unlabeled rules get ids r1..rn by position. Throws ParseError.
Program parse_program(std::string_view text);

struct FactParseOptions {
  /// Accept `_:n<id>` labeled nulls (chase dumps only).
  bool allow_nulls = false;
};

/// Parses `.facts` source: `Pred(c1,...,cn).` lines. Duplicates collapse.
FactStore parse_facts(std::string_view text, FactParseOptions opts = {});

/// Parses a single ground atom such as `Open("EGTech",0.3,1)`.
GroundAtom parse_ground_atom(std::string_view text, FactParseOptions opts = {.allow_nulls = true});

/// Parses one constant in source syntax (`"EGTech"`, `0.3`, `true`, `_:n4`).
Value parse_value(std::string_view text);

/// Parses `.gloss` source:
///   Pred(a,b): "template {a} ... {b}" [a: "wh" "answer {a}", ...] describe "noun phrase".
Glossary parse_glossary(std::string_view text);

}  // namespace chaseforge

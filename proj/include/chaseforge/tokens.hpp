#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace chaseforge {

// Placeholder tokens have the form ⟦node.var⟧, e.g. ⟦r1.x⟧ or ⟦fact:Price.p⟧.

inline constexpr std::string_view kTokenOpen = "\xE2\x9F\xA6";   // U+27E6
inline constexpr std::string_view kTokenClose = "\xE2\x9F\xA7";  // U+27E7

std::string make_token(std::string_view node, std::string_view var);

struct TokenRef {
  std::string node;
  std::string var;
};

/// Splits "node.var" at the last dot.
std::optional<TokenRef> parse_token_body(std::string_view body);

/// Every well-formed token in the text, as full token strings.
std::set<std::string> find_tokens(std::string_view text);

/// True if the text contains a token opener or closer anywhere.
bool has_token_remnant(std::string_view text);

/// Replaces each token with `resolve(ref)`; tokens it cannot resolve are
/// left in place and reported through `unresolved`.
std::string substitute_tokens(std::string_view text,
                              const std::function<std::optional<std::string>(const TokenRef&)>& resolve,
                              std::set<std::string>* unresolved = nullptr);

}  // namespace chaseforge

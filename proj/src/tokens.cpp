#include "chaseforge/tokens.hpp"

namespace chaseforge {

std::string make_token(std::string_view node, std::string_view var) {
  std::string t(kTokenOpen);
  t += node;
  t += '.';
  t += var;
  t += kTokenClose;
  return t;
}

std::optional<TokenRef> parse_token_body(std::string_view body) {
  auto dot = body.rfind('.');
  if (dot == std::string_view::npos || dot == 0 || dot + 1 == body.size()) return std::nullopt;
  return TokenRef{std::string(body.substr(0, dot)), std::string(body.substr(dot + 1))};
}

namespace {

template <typename F>
void scan(std::string_view text, F&& on_token, std::string* rest) {
  std::size_t i = 0;
  while (i < text.size()) {
    auto open = text.find(kTokenOpen, i);
    if (open == std::string_view::npos) break;
    auto close = text.find(kTokenClose, open + kTokenOpen.size());
    if (close == std::string_view::npos) break;
    auto inner_open = text.find(kTokenOpen, open + kTokenOpen.size());
    if (inner_open != std::string_view::npos && inner_open < close) {
      if (rest) rest->append(text.substr(i, inner_open - i));
      i = inner_open;
      continue;
    }
    if (rest) rest->append(text.substr(i, open - i));
    std::string_view full = text.substr(open, close + kTokenClose.size() - open);
    std::string_view body = text.substr(open + kTokenOpen.size(), close - open - kTokenOpen.size());
    on_token(full, body);
    i = close + kTokenClose.size();
  }
  if (rest) rest->append(text.substr(i));
}

}  // namespace

std::set<std::string> find_tokens(std::string_view text) {
  std::set<std::string> out;
  scan(text, [&](std::string_view full, std::string_view body) {
    if (parse_token_body(body)) out.insert(std::string(full));
  }, nullptr);
  return out;
}

bool has_token_remnant(std::string_view text) {
  return text.find(kTokenOpen) != std::string_view::npos || text.find(kTokenClose) != std::string_view::npos;
}

std::string substitute_tokens(std::string_view text,
                              const std::function<std::optional<std::string>(const TokenRef&)>& resolve,
                              std::set<std::string>* unresolved) {
  std::string out;
  scan(text, [&](std::string_view full, std::string_view body) {
    auto ref = parse_token_body(body);
    std::optional<std::string> value;
    if (ref) value = resolve(*ref);
    if (value) {
      out += *value;
    } else {
      out += full;
      if (unresolved) unresolved->insert(std::string(full));
    }
  }, &out);
  return out;
}

}  // namespace chaseforge

#include "chaseforge/text_scan.hpp"

#include <cctype>

#include "chaseforge/tokens.hpp"

namespace chaseforge {

namespace {

bool word_byte(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }
bool digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

std::vector<std::string> word_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (std::size_t i = 0; i < text.size(); ++i) {
    auto c = static_cast<unsigned char>(text[i]);
    if (word_byte(c)) {
      cur += static_cast<char>(c);
    } else if (c == '.' && !cur.empty() && digit(cur.back()) && i + 1 < text.size() && digit(text[i + 1])) {
      cur += '.';
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::string mask_placeholders(std::string_view text) {
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    auto open = text.find(kTokenOpen, i);
    if (open == std::string_view::npos) break;
    auto close = text.find(kTokenClose, open);
    if (close == std::string_view::npos) break;
    out.append(text.substr(i, open - i));
    out += ' ';
    i = close + kTokenClose.size();
  }
  out.append(text.substr(i));
  return out;
}

bool is_numeric_token(std::string_view token) {
  if (token.empty() || !digit(token.front()) || !digit(token.back())) return false;
  for (char c : token)
    if (!digit(c) && c != '.') return false;
  return true;
}

void NgramIndex::add(std::string_view text) {
  for_each_ngram(word_tokens(text), max_n_, [&](const std::string& g) { grams_.insert(g); });
}

std::uint64_t fnv1a(std::string_view text, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace chaseforge

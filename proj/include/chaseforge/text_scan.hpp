#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace chaseforge {

/// Word tokens of a text: runs of letters, digits, '_' and non-ASCII bytes,
/// with '.' kept between two digits so that "0.3" stays one token.
std::vector<std::string> word_tokens(std::string_view text);

/// Replaces every ⟦…⟧ placeholder with a single space.
std::string mask_placeholders(std::string_view text);

/// True for tokens such as "12", "0.3".
bool is_numeric_token(std::string_view token);

/// Space-joined word n-grams of a text for n = 1..max_n.
class NgramIndex {
 public:
  explicit NgramIndex(std::size_t max_n = 1) : max_n_(max_n == 0 ? 1 : max_n) {}
  void add(std::string_view text);
  bool contains(const std::string& phrase) const { return grams_.count(phrase) != 0; }
  std::size_t max_n() const { return max_n_; }

 private:
  std::size_t max_n_;
  std::unordered_set<std::string> grams_;
};

/// Calls `f(gram)` for every space-joined n-gram of `tokens` with n <= max_n.
template <typename F>
void for_each_ngram(const std::vector<std::string>& tokens, std::size_t max_n, F&& f) {
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::string gram;
    for (std::size_t n = 0; n < max_n && i + n < tokens.size(); ++n) {
      if (n) gram += ' ';
      gram += tokens[i + n];
      f(gram);
    }
  }
}

/// Normalized form of a constant for n-gram matching; empty when the
/// constant has no word characters.
inline std::string phrase_key(std::string_view text) {
  std::string out;
  for (const auto& t : word_tokens(text)) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

/// Stable 64-bit FNV-1a hash, used to derive per-item seeds.
std::uint64_t fnv1a(std::string_view text, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace chaseforge

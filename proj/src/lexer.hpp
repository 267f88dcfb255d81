#pragma once

// Tokenizer shared by the .vada, .facts and .gloss parsers.

#include <string>
#include <string_view>
#include <vector>

#include "chaseforge/error.hpp"

namespace chaseforge::detail {

enum class Tok {
  Ident,
  String,
  Number,
  Null,  // _:n<id>
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  Dot,
  Colon,
  Question,
  Arrow,
  Not,  // `not`, `!` before an atom, or U+00AC
  Plus,
  Minus,
  Star,
  Slash,
  Assign,  // =
  Lt,
  Gt,
  Le,
  Ge,
  Eq,  // ==
  Ne,
  End,
};

struct Token {
  Tok kind;
  std::string text;  // identifier, unescaped string body, number literal, null id
  SourceLocation loc;
};

std::vector<Token> tokenize(std::string_view src);

const char* describe(Tok t);

class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  bool at(Tok k, std::size_t ahead = 0) const { return peek(ahead).kind == k; }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool accept(Tok k) {
    if (!at(k)) return false;
    next();
    return true;
  }
  const Token& expect(Tok k, const char* context) {
    if (!at(k))
      throw ParseError(std::string("expected ") + describe(k) + " " + context + ", found " + found(), peek().loc);
    return next();
  }
  std::string found() const {
    const Token& t = peek();
    if (t.kind == Tok::End) return "end of input";
    if (t.kind == Tok::Ident || t.kind == Tok::Number) return "'" + t.text + "'";
    if (t.kind == Tok::String) return "string \"" + t.text + "\"";
    return describe(t.kind);
  }
  [[noreturn]] void error(const std::string& msg) const { throw ParseError(msg, peek().loc); }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace chaseforge::detail

#include "lexer.hpp"

#include <cctype>

namespace chaseforge::detail {

const char* describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::String: return "string";
    case Tok::Number: return "number";
    case Tok::Null: return "labeled null";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::Colon: return "':'";
    case Tok::Question: return "'?'";
    case Tok::Arrow: return "'->'";
    case Tok::Not: return "'not'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Assign: return "'='";
    case Tok::Lt: return "'<'";
    case Tok::Gt: return "'>'";
    case Tok::Le: return "'<='";
    case Tok::Ge: return "'>='";
    case Tok::Eq: return "'=='";
    case Tok::Ne: return "'!='";
    case Tok::End: return "end of input";
  }
  return "?";
}

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else if ((static_cast<unsigned char>(src[i]) & 0xC0) != 0x80) {
        ++col;
      }
    }
  };
  auto starts = [&](std::string_view s) { return src.substr(i, s.size()) == s; };

  while (i < src.size()) {
    char c = src[i];
    SourceLocation loc{line, col};
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    auto push = [&](Tok k, std::size_t len, std::string text = {}) {
      out.push_back(Token{k, std::move(text), loc});
      advance(len);
    };
    if (starts("->")) { push(Tok::Arrow, 2); continue; }
    if (starts("\xE2\x86\x92")) { push(Tok::Arrow, 3); continue; }  // U+2192
    if (starts("\xC2\xAC")) { push(Tok::Not, 2); continue; }        // U+00AC
    if (starts("<=")) { push(Tok::Le, 2); continue; }
    if (starts(">=")) { push(Tok::Ge, 2); continue; }
    if (starts("==")) { push(Tok::Eq, 2); continue; }
    if (starts("!=")) { push(Tok::Ne, 2); continue; }
    if (starts("_:n")) {
      std::size_t j = i + 3;
      while (j < src.size() && digit(src[j])) ++j;
      if (j == i + 3) throw ParseError("malformed labeled null", loc);
      push(Tok::Null, j - i, std::string(src.substr(i + 3, j - i - 3)));
      continue;
    }
    switch (c) {
      case '(': push(Tok::LParen, 1); continue;
      case ')': push(Tok::RParen, 1); continue;
      case '[': push(Tok::LBracket, 1); continue;
      case ']': push(Tok::RBracket, 1); continue;
      case ',': push(Tok::Comma, 1); continue;
      case ':': push(Tok::Colon, 1); continue;
      case '?': push(Tok::Question, 1); continue;
      case '+': push(Tok::Plus, 1); continue;
      case '-': push(Tok::Minus, 1); continue;
      case '*': push(Tok::Star, 1); continue;
      case '/': push(Tok::Slash, 1); continue;
      case '=': push(Tok::Assign, 1); continue;
      case '<': push(Tok::Lt, 1); continue;
      case '>': push(Tok::Gt, 1); continue;
      case '!': push(Tok::Not, 1); continue;
      case '.':
        if (i + 1 < src.size() && digit(src[i + 1])) throw ParseError("number must start with a digit", loc);
        push(Tok::Dot, 1);
        continue;
      default: break;
    }
    if (c == '"') {
      std::string body;
      std::size_t j = i + 1;
      bool closed = false;
      while (j < src.size()) {
        char d = src[j];
        if (d == '"') {
          closed = true;
          break;
        }
        if (d == '\n') break;
        if (d == '\\' && j + 1 < src.size()) {
          char e = src[j + 1];
          switch (e) {
            case 'n': body += '\n'; break;
            case 't': body += '\t'; break;
            case '"': body += '"'; break;
            case '\\': body += '\\'; break;
            default: throw ParseError(std::string("unknown escape \\") + e, loc);
          }
          j += 2;
          continue;
        }
        body += d;
        ++j;
      }
      if (!closed) throw ParseError("unterminated string", loc);
      push(Tok::String, j + 1 - i, std::move(body));
      continue;
    }
    if (digit(c)) {
      std::size_t j = i;
      while (j < src.size() && digit(src[j])) ++j;
      if (j + 1 < src.size() && src[j] == '.' && digit(src[j + 1])) {
        ++j;
        while (j < src.size() && digit(src[j])) ++j;
      }
      push(Tok::Number, j - i, std::string(src.substr(i, j - i)));
      continue;
    }
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      std::string word(src.substr(i, j - i));
      if (word == "not")
        push(Tok::Not, j - i);
      else
        push(Tok::Ident, j - i, std::move(word));
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", loc);
  }
  out.push_back(Token{Tok::End, {}, {line, col}});
  return out;
}

}  // namespace chaseforge::detail

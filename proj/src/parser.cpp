#include "chaseforge/parser.hpp"

#include <algorithm>
#include <map>

#include "chaseforge/error.hpp"
#include "lexer.hpp"

namespace chaseforge {

using detail::Tok;
using detail::Token;
using detail::TokenStream;

namespace {

Value number_value(const Token& t, bool negative) {
  auto d = Decimal::parse((negative ? "-" : "") + t.text);
  if (!d) throw ParseError("invalid number '" + t.text + "' (at most 6 fractional digits)", t.loc);
  return Value::number(*d);
}

/// Constant in atom position: string, optionally signed number, boolean, null.
std::optional<Value> parse_constant(TokenStream& ts, bool allow_nulls) {
  const Token& t = ts.peek();
  switch (t.kind) {
    case Tok::String: {
      Value v = Value::string(t.text);
      ts.next();
      return v;
    }
    case Tok::Number: {
      Value v = number_value(t, false);
      ts.next();
      return v;
    }
    case Tok::Minus: {
      if (!ts.at(Tok::Number, 1)) return std::nullopt;
      ts.next();
      Value v = number_value(ts.peek(), true);
      ts.next();
      return v;
    }
    case Tok::Ident:
      if (t.text == "true" || t.text == "false") {
        Value v = Value::boolean(t.text == "true");
        ts.next();
        return v;
      }
      return std::nullopt;
    case Tok::Null: {
      if (!allow_nulls) ts.error("labeled nulls are not allowed in fact databases");
      Value v = Value::null(std::stoull(t.text));
      ts.next();
      return v;
    }
    default: return std::nullopt;
  }
}

std::string expect_predicate(TokenStream& ts, const char* ctx) {
  const Token& t = ts.expect(Tok::Ident, ctx);
  if (!is_predicate_name(t.text))
    throw ParseError("predicate names must start with an uppercase letter: '" + t.text + "'", t.loc);
  return t.text;
}

class ProgramParser {
 public:
  explicit ProgramParser(std::string_view text) : ts_(detail::tokenize(text)) {}

  Program parse() {
    std::vector<Rule> rules;
    std::map<std::string, std::pair<std::size_t, SourceLocation>> arities;
    while (!ts_.at(Tok::End)) {
      SourceLocation loc = ts_.peek().loc;
      Rule r = parse_rule(rules.size() + 1);
      auto check = [&](const Atom& a) {
        auto [it, fresh] = arities.try_emplace(a.predicate, a.args.size(), loc);
        if (!fresh && it->second.first != a.args.size())
          throw ParseError("arity conflict for predicate " + a.predicate + ": " + std::to_string(it->second.first) +
                               " vs " + std::to_string(a.args.size()),
                           loc);
      };
      check(r.head);
      for (const Atom* a : r.positive_atoms()) check(*a);
      for (const Atom* a : r.negated_atoms()) check(*a);
      try {
        validate_rule(r);
      } catch (const ParseError& e) {
        throw ParseError(e.what(), loc);
      }
      rules.push_back(std::move(r));
    }
    return make_program(std::move(rules));
  }

 private:
  Rule parse_rule(std::size_t position) {
    Rule r;
    if (ts_.at(Tok::Ident) && ts_.at(Tok::Colon, 1)) {
      r.id = ts_.next().text;
      ts_.next();
    } else {
      r.id = "r" + std::to_string(position);
    }
    if (!ts_.at(Tok::Arrow)) {
      r.body.push_back(parse_literal());
      while (ts_.accept(Tok::Comma)) r.body.push_back(parse_literal());
    }
    ts_.expect(Tok::Arrow, "between rule body and head");
    r.head = parse_atom(true);
    ts_.expect(Tok::Dot, "at end of rule");
    return r;
  }

  Atom parse_atom(bool head) {
    Atom a;
    a.predicate = expect_predicate(ts_, "as predicate name");
    ts_.expect(Tok::LParen, "after predicate name");
    if (!ts_.at(Tok::RParen)) {
      a.args.push_back(parse_atom_arg(head));
      while (ts_.accept(Tok::Comma)) a.args.push_back(parse_atom_arg(head));
    }
    ts_.expect(Tok::RParen, "to close atom arguments");
    return a;
  }

  Term parse_atom_arg(bool head) {
    if (ts_.at(Tok::Question)) {
      const Token& q = ts_.next();
      if (!head) throw ParseError("existential markers are only allowed in rule heads", q.loc);
      const Token& name = ts_.expect(Tok::Ident, "after '?'");
      if (!is_variable_name(name.text)) throw ParseError("invalid existential variable '" + name.text + "'", name.loc);
      return Term(Existential{name.text});
    }
    if (auto c = parse_constant(ts_, false)) return Term::constant(*c);
    const Token& t = ts_.peek();
    if (t.kind == Tok::Ident && is_variable_name(t.text)) {
      ts_.next();
      return Term::var(t.text);
    }
    ts_.error("expected a variable or constant in atom, found " + ts_.found());
  }

  BodyLiteral parse_literal() {
    if (ts_.accept(Tok::Not)) return NegatedLiteral{parse_atom(false)};
    const Token& t = ts_.peek();
    if (t.kind == Tok::Ident && is_predicate_name(t.text)) return PositiveLiteral{parse_atom(false)};
    if (t.kind == Tok::Ident && is_variable_name(t.text) && ts_.at(Tok::Assign, 1)) {
      std::string target = ts_.next().text;
      ts_.next();
      static const std::map<std::string, AggregateFunc> aggregates = {
          {"msum", AggregateFunc::Sum}, {"mcount", AggregateFunc::Count},
          {"mmin", AggregateFunc::Min}, {"mmax", AggregateFunc::Max}};
      if (ts_.at(Tok::Ident) && ts_.at(Tok::LParen, 1)) {
        auto it = aggregates.find(ts_.peek().text);
        if (it == aggregates.end()) ts_.error("unknown aggregate function '" + ts_.peek().text + "'");
        ts_.next();
        ts_.next();
        Term arg = parse_expr();
        ts_.expect(Tok::RParen, "to close aggregate");
        return Assignment{target, Aggregate{it->second, std::move(arg)}};
      }
      return Assignment{target, parse_expr()};
    }
    Term lhs = parse_expr();
    CmpOp op;
    switch (ts_.peek().kind) {
      case Tok::Lt: op = CmpOp::Lt; break;
      case Tok::Gt: op = CmpOp::Gt; break;
      case Tok::Le: op = CmpOp::Le; break;
      case Tok::Ge: op = CmpOp::Ge; break;
      case Tok::Eq: op = CmpOp::Eq; break;
      case Tok::Ne: op = CmpOp::Ne; break;
      case Tok::Assign: ts_.error("'=' assigns a fresh variable; use '==' to compare");
      default: ts_.error("expected a comparison operator, found " + ts_.found());
    }
    ts_.next();
    return Comparison{std::move(lhs), op, parse_expr()};
  }

  Term parse_expr() {
    Term t = parse_product();
    while (ts_.at(Tok::Plus) || ts_.at(Tok::Minus)) {
      ArithOp op = ts_.next().kind == Tok::Plus ? ArithOp::Add : ArithOp::Sub;
      t = Term::binary(op, std::move(t), parse_product());
    }
    return t;
  }

  Term parse_product() {
    Term t = parse_factor();
    while (ts_.at(Tok::Star) || ts_.at(Tok::Slash)) {
      ArithOp op = ts_.next().kind == Tok::Star ? ArithOp::Mul : ArithOp::Div;
      t = Term::binary(op, std::move(t), parse_factor());
    }
    return t;
  }

  Term parse_factor() {
    if (ts_.accept(Tok::LParen)) {
      Term t = parse_expr();
      ts_.expect(Tok::RParen, "to close parenthesis");
      return t;
    }
    if (auto c = parse_constant(ts_, false)) return Term::constant(*c);
    if (ts_.accept(Tok::Minus)) return Term::binary(ArithOp::Sub, Term::constant(Value::integer(0)), parse_factor());
    const Token& t = ts_.peek();
    if (t.kind == Tok::Ident && is_variable_name(t.text)) {
      ts_.next();
      return Term::var(t.text);
    }
    ts_.error("expected an expression, found " + ts_.found());
  }

  TokenStream ts_;
};

GroundAtom parse_fact_atom(TokenStream& ts, bool allow_nulls) {
  GroundAtom a;
  a.predicate = expect_predicate(ts, "as predicate name");
  ts.expect(Tok::LParen, "after predicate name");
  auto arg = [&] {
    auto c = parse_constant(ts, allow_nulls);
    if (!c) ts.error("expected a constant, found " + ts.found());
    a.args.push_back(std::move(*c));
  };
  if (!ts.at(Tok::RParen)) {
    arg();
    while (ts.accept(Tok::Comma)) arg();
  }
  ts.expect(Tok::RParen, "to close fact arguments");
  return a;
}

}  // namespace

Program parse_program(std::string_view text) { return ProgramParser(text).parse(); }

FactStore parse_facts(std::string_view text, FactParseOptions opts) {
  TokenStream ts(detail::tokenize(text));
  FactStore store;
  while (!ts.at(Tok::End)) {
    SourceLocation loc = ts.peek().loc;
    GroundAtom a = parse_fact_atom(ts, opts.allow_nulls);
    ts.expect(Tok::Dot, "at end of fact");
    if (auto ar = store.arity(a.predicate); ar && *ar != a.args.size())
      throw ParseError("arity conflict for predicate " + a.predicate + ": " + std::to_string(*ar) + " vs " +
                           std::to_string(a.args.size()),
                       loc);
    store.insert(std::move(a));
  }
  return store;
}

GroundAtom parse_ground_atom(std::string_view text, FactParseOptions opts) {
  TokenStream ts(detail::tokenize(text));
  GroundAtom a = parse_fact_atom(ts, opts.allow_nulls);
  ts.accept(Tok::Dot);
  if (!ts.at(Tok::End)) ts.error("trailing input after atom");
  return a;
}

Value parse_value(std::string_view text) {
  TokenStream ts(detail::tokenize(text));
  auto v = parse_constant(ts, true);
  if (!v || !ts.at(Tok::End)) throw ParseError("invalid constant '" + std::string(text) + "'");
  return *v;
}

Glossary parse_glossary(std::string_view text) {
  TokenStream ts(detail::tokenize(text));
  Glossary g;
  while (!ts.at(Tok::End)) {
    SourceLocation loc = ts.peek().loc;
    try {
      GlossaryEntry e;
      e.predicate = expect_predicate(ts, "as glossary predicate");
      ts.expect(Tok::LParen, "after predicate name");
      auto slot = [&] {
        const Token& s = ts.expect(Tok::Ident, "as slot name");
        for (const auto& existing : e.slots)
          if (existing == s.text) throw ParseError("duplicate slot '" + s.text + "'", s.loc);
        e.slots.push_back(s.text);
      };
      if (!ts.at(Tok::RParen)) {
        slot();
        while (ts.accept(Tok::Comma)) slot();
      }
      ts.expect(Tok::RParen, "to close slot list");
      ts.expect(Tok::Colon, "before the sentence template");
      e.sentence = ts.expect(Tok::String, "as sentence template").text;
      e.pieces = compile_template(e.sentence, e.slots, true);

      if (ts.accept(Tok::LBracket)) {
        do {
          const Token& name = ts.expect(Tok::Ident, "as slot name in phrase list");
          if (std::find(e.slots.begin(), e.slots.end(), name.text) == e.slots.end())
            throw ParseError("phrase for unknown slot '" + name.text + "'", name.loc);
          ts.expect(Tok::Colon, "after slot name");
          SlotPhrase p;
          p.wh = ts.expect(Tok::String, "as wh-phrase").text;
          if (ts.at(Tok::String)) {
            const Token& ans = ts.next();
            p.answer = ans.text;
            compile_template(p.answer, e.slots, false);
            if (p.answer.find("{" + name.text + "}") == std::string::npos)
              throw ParseError("answer phrase \"" + p.answer + "\" must contain {" + name.text + "}", ans.loc);
            if (e.sentence.find(p.answer) == std::string::npos)
              throw ParseError("answer phrase \"" + p.answer + "\" does not occur in the template", ans.loc);
          }
          if (!e.phrases.emplace(name.text, std::move(p)).second)
            throw ParseError("duplicate phrase for slot '" + name.text + "'", name.loc);
        } while (ts.accept(Tok::Comma));
        ts.expect(Tok::RBracket, "to close phrase list");
      }
      if (ts.at(Tok::Ident) && ts.peek().text == "describe") {
        ts.next();
        e.description = ts.expect(Tok::String, "after 'describe'").text;
      }
      ts.accept(Tok::Dot);
      g.add(std::move(e));
    } catch (const GlossaryError& err) {
      throw ParseError(err.what(), loc);
    }
  }
  return g;
}

}  // namespace chaseforge

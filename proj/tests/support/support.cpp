#include "support.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace testsupport {

namespace cf = chaseforge;

std::filesystem::path data_dir() { return CHASEFORGE_TEST_DATA_DIR; }
std::filesystem::path trading(const std::string& file) { return data_dir() / "trading" / file; }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Reference load_reference() {
  Reference r;
  std::string prog = slurp(trading("program.vada"));
  std::string gloss = slurp(trading("glossary.gloss"));
  r.program = cf::parse_program(prog);
  r.facts = cf::parse_facts(slurp(trading("data.facts")));
  r.glossary = cf::parse_glossary(gloss);
  r.public_text = prog + "\n" + gloss;
  return r;
}

// ---------------------------------------------------------------------------

namespace {

using Env = std::map<std::string, cf::Value>;

std::optional<cf::Value> eval(const cf::Term& t, const Env& env) {
  if (auto c = t.as_constant()) return c->value;
  if (auto v = t.as_variable()) {
    auto it = env.find(v->name);
    if (it == env.end()) return std::nullopt;
    return it->second;
  }
  const cf::BinaryExpr* b = t.as_binary();
  if (!b) return std::nullopt;
  auto l = eval(b->lhs, env), r = eval(b->rhs, env);
  if (!l || !r || !l->is_number() || !r->is_number()) return std::nullopt;
  cf::Decimal x = l->as_number(), y = r->as_number();
  switch (b->op) {
    case cf::ArithOp::Add: return cf::Value::number(x + y);
    case cf::ArithOp::Sub: return cf::Value::number(x - y);
    case cf::ArithOp::Mul: return cf::Value::number(x * y);
    case cf::ArithOp::Div: return cf::Value::number(x / y);
  }
  return std::nullopt;
}

bool holds(const cf::Value& a, cf::CmpOp op, const cf::Value& b) {
  switch (op) {
    case cf::CmpOp::Lt: return a < b;
    case cf::CmpOp::Gt: return a > b;
    case cf::CmpOp::Le: return a <= b;
    case cf::CmpOp::Ge: return a >= b;
    case cf::CmpOp::Eq: return a == b;
    case cf::CmpOp::Ne: return a != b;
  }
  return false;
}

void match(const cf::Rule& rule, const std::vector<const cf::Atom*>& atoms, std::size_t i, Env& env,
           const std::set<cf::GroundAtom>& known, std::set<cf::GroundAtom>& out) {
  if (i == atoms.size()) {
    Env e = env;
    for (const auto& lit : rule.body) {
      if (auto c = std::get_if<cf::Comparison>(&lit)) {
        auto l = eval(c->lhs, e), r = eval(c->rhs, e);
        if (!l || !r || !holds(*l, c->op, *r)) return;
      } else if (auto a = std::get_if<cf::Assignment>(&lit)) {
        auto v = eval(std::get<cf::Term>(a->source), e);
        if (!v) return;
        e[a->target] = *v;
      }
    }
    cf::GroundAtom head{rule.head.predicate, {}};
    for (const auto& t : rule.head.args) head.args.push_back(*eval(t, e));
    out.insert(std::move(head));
    return;
  }
  const cf::Atom& a = *atoms[i];
  for (const auto& f : known) {
    if (f.predicate != a.predicate || f.args.size() != a.args.size()) continue;
    Env saved = env;
    bool ok = true;
    for (std::size_t k = 0; k < a.args.size() && ok; ++k) {
      const cf::Term& t = a.args[k];
      if (auto v = t.as_variable()) {
        auto it = env.find(v->name);
        if (it == env.end())
          env[v->name] = f.args[k];
        else
          ok = it->second == f.args[k];
      } else {
        ok = t.as_constant() && t.as_constant()->value == f.args[k];
      }
    }
    if (ok) match(rule, atoms, i + 1, env, known, out);
    env = std::move(saved);
  }
}

}  // namespace

std::set<cf::GroundAtom> naive_fixpoint(const cf::Program& program, const cf::FactStore& facts) {
  std::set<cf::GroundAtom> known;
  for (const auto& f : facts.facts()) known.insert(f.atom);
  while (true) {
    std::set<cf::GroundAtom> derived;
    for (const auto& r : program.rules) {
      Env env;
      match(r, r.positive_atoms(), 0, env, known, derived);
    }
    std::size_t before = known.size();
    known.insert(derived.begin(), derived.end());
    if (known.size() == before) return known;
  }
}

// ---------------------------------------------------------------------------

RandomCase random_case(std::mt19937_64& rng) {
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  std::size_t npred = 2 + pick(3);
  std::vector<std::size_t> arity(npred);
  for (auto& a : arity) a = 1 + pick(3);
  const char* vars[] = {"x", "y", "z", "w"};
  const char* cmps[] = {"<", ">", "<=", ">=", "==", "!="};

  RandomCase c;
  std::size_t nrules = 1 + pick(5);
  for (std::size_t r = 0; r < nrules; ++r) {
    std::size_t nbody = 1 + pick(3);
    std::vector<std::string> bound;
    std::string body;
    for (std::size_t b = 0; b < nbody; ++b) {
      std::size_t p = pick(npred);
      std::string atom = "P" + std::to_string(p) + "(";
      for (std::size_t k = 0; k < arity[p]; ++k) {
        if (k) atom += ",";
        if (pick(10) == 0) {
          atom += std::to_string(pick(4));
        } else {
          std::string v = vars[pick(4)];
          atom += v;
          if (std::find(bound.begin(), bound.end(), v) == bound.end()) bound.push_back(v);
        }
      }
      body += (body.empty() ? "" : ", ") + atom + ")";
    }
    if (bound.size() >= 2 && pick(4) == 0)
      body += ", " + bound[pick(bound.size())] + " " + cmps[pick(6)] + " " + bound[pick(bound.size())];
    std::size_t h = pick(npred);
    std::string head = "P" + std::to_string(h) + "(";
    for (std::size_t k = 0; k < arity[h]; ++k) {
      if (k) head += ",";
      head += bound.empty() || pick(8) == 0 ? std::to_string(pick(4)) : bound[pick(bound.size())];
    }
    c.program += body + " -> " + head + ").\n";
  }
  std::size_t nfacts = pick(31);
  for (std::size_t f = 0; f < nfacts; ++f) {
    std::size_t p = pick(npred);
    std::string atom = "P" + std::to_string(p) + "(";
    for (std::size_t k = 0; k < arity[p]; ++k) atom += (k ? "," : "") + std::to_string(pick(4));
    c.facts += atom + ").\n";
  }
  return c;
}

std::string synthetic_trading_facts(std::size_t n) {
  std::string out;
  char name[32];
  std::size_t traders = n / 5, prices = n / 2, closures = n / 10;
  for (std::size_t i = 0; i < traders; ++i) {
    std::snprintf(name, sizeof name, "Trader%05zu", i);
    std::size_t t = 1 + i % (prices / 2 + 1);
    out += "Open(\"" + std::string(name) + "\",0." + std::to_string(1 + i % 9) + "," + std::to_string(t) + ").\n";
    out += "Close(\"" + std::string(name) + "\"," + std::to_string(t + 3) + ").\n";
  }
  for (std::size_t t = 1; t <= prices; ++t)
    out += "Price(" + std::to_string(100 + (t * 7) % 50) + "," + std::to_string(t) + ").\n";
  for (std::size_t k = 1; k <= closures; ++k) out += "MarketClosed(" + std::to_string(k * 5) + ").\n";
  return out;
}

}  // namespace testsupport

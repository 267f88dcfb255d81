#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <set>
#include <string>

#include "chaseforge/facts.hpp"
#include "chaseforge/glossary.hpp"
#include "chaseforge/parser.hpp"

namespace testsupport {

std::filesystem::path data_dir();
std::filesystem::path trading(const std::string& file);
std::string slurp(const std::filesystem::path& p);

struct Reference {
  chaseforge::Program program;
  chaseforge::FactStore facts;
  chaseforge::Glossary glossary;
  std::string public_text;
};

/// The trading program, its six facts and the glossary.
Reference load_reference();

/// Fixpoint by exhaustive re-evaluation: every rule is matched against
/// every combination of known facts until nothing new appears. Handles
/// positive atoms, comparisons and plain assignments only.
std::set<chaseforge::GroundAtom> naive_fixpoint(const chaseforge::Program& program,
                                                const chaseforge::FactStore& facts);

struct RandomCase {
  std::string program;
  std::string facts;
};

/// Positive program (at most 5 rules over at most 4 predicates, no
/// existentials) with at most 30 facts over a small numeric domain.
RandomCase random_case(std::mt19937_64& rng);

/// Facts with the trading schema: n/5 orders, n/5 closes, n/2 prices and
/// n/10 market closures. Trader names look like "Trader00042".
std::string synthetic_trading_facts(std::size_t n);

}  // namespace testsupport

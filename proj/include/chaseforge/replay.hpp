#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chaseforge/chase.hpp"

namespace chaseforge {

/// One line of a chase dump, as read back from disk.
struct DumpedStep {
  StepId step = 0;
  std::string rule;
  GroundAtom derived;
  std::optional<FactId> derived_id;
  std::vector<FactId> body;
  Substitution subst;
};

/// JSON lines, one object per step:
/// `{"step":n,"rule":"r1","derived":"Accepted(...)","derived_id":k,"body":[...],"subst":{...}}`.
/// Substitution values are written in constant source syntax.
std::string write_chase_dump(const Chase& chase);

/// Throws ParseError on malformed lines.
std::vector<DumpedStep> read_chase_dump(std::string_view text);

struct ValidationReport {
  bool ok = true;
  std::size_t steps_checked = 0;
  std::optional<StepId> failed_step;
  std::string message;
};

/// Replays every step against the program and extensional facts: body
/// facts must match the substituted body, comparisons and assignments must
/// re-evaluate, negated atoms must be absent, aggregates must equal the fold
/// of their group's contributions, and the substituted head must equal the
/// derived fact, which must be new. Reports the first violation.
ValidationReport validate_chase(const std::vector<DumpedStep>& dump, const Program& program,
                                const FactStore& extensional);

std::vector<DumpedStep> to_dump(const Chase& chase);

/// Rebuilds a chase from a dump that validates; throws ReasoningError otherwise.
Chase chase_from_dump(const std::vector<DumpedStep>& dump, const Program& program, const FactStore& extensional);

}  // namespace chaseforge

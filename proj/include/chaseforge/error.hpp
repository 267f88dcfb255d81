#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chaseforge {

/// Process exit codes used by the CLI; every library error maps onto one.
enum class ExitCode : int {
  Success = 0,
  Usage = 1,
  Parse = 2,
  Reasoning = 3,
  Backend = 4,
  Quality = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

struct SourceLocation {
  std::size_t line = 0;
  std::size_t column = 0;
};

/// Syntax or validation error in a .vada/.facts/.gloss source.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, SourceLocation loc = {})
      : Error(ExitCode::Parse, format(what, loc)), loc_(loc) {}
  const SourceLocation& location() const noexcept { return loc_; }

 private:
  static std::string format(const std::string& what, SourceLocation loc) {
    if (loc.line == 0) return what;
    return std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " + what;
  }
  SourceLocation loc_;
};

/// Missing glossary entry or a glossary/program mismatch.
class GlossaryError : public Error {
 public:
  explicit GlossaryError(const std::string& what) : Error(ExitCode::Parse, what) {}
};

class ReasoningError : public Error {
 public:
  explicit ReasoningError(const std::string& what) : Error(ExitCode::Reasoning, what) {}
};

/// Division by zero, overflow, null or non-numeric operand.
class ArithmeticError : public ReasoningError {
 public:
  explicit ArithmeticError(const std::string& what) : ReasoningError(what) {}
};

class BackendError : public Error {
 public:
  explicit BackendError(const std::string& what) : Error(ExitCode::Backend, what) {}
};

class QualityError : public Error {
 public:
  explicit QualityError(const std::string& what) : Error(ExitCode::Quality, what) {}
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ExitCode::Usage, what) {}
};

}  // namespace chaseforge

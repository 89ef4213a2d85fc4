#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hydra/minilang/interpreter.hpp"
#include "hydra/repair/candidates.hpp"

namespace hydra::repair {

enum class Outcome { Plausible, FailedFailing, FailedRegression, TypeError };

std::string_view outcome_name(Outcome o);

struct Hunk {
  StmtRef stmt;
  std::string before;  // canonical text of the original statement
  std::string after;   // canonical text of its replacement
};

struct PatchedProgram {
  Program program;
  std::vector<Hunk> hunks;
  /// Canonical text of every file after the patch.
  std::map<std::string, std::string> texts;
};

/// Applies all edits at once to a copy of `program`, renders it
/// canonically, re-parses and type-checks. Returns nullopt (with the reason
/// in `error`) when the result does not type-check.
std::optional<PatchedProgram> apply_patch(const Program& program, const std::vector<ConcreteEdit>& edits,
                                          std::string* error = nullptr);

struct Validation {
  Outcome outcome = Outcome::TypeError;
  std::optional<PatchedProgram> patched;
  std::size_t failing_after = 0;  // failing tests of the full suite, when run
  std::string detail;
};

/// Type check first, then the originally failing tests, then the full suite.
Validation validate(const Program& program, const std::vector<ConcreteEdit>& edits,
                    const std::vector<std::string>& failing_tests, std::int64_t max_steps);

/// Unified diff between two texts, three lines of context.
std::string unified_diff(const std::string& before, const std::string& after,
                         const std::string& from_name, const std::string& to_name);

}  // namespace hydra::repair

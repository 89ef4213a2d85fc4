#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "hydra/minilang/program.hpp"

namespace hydra::minilang {

enum class Verdict { Pass, Fail, Error };

std::string_view verdict_name(Verdict v);

struct TestResult {
  std::string name;
  Verdict verdict = Verdict::Pass;
  std::string message;  // failing assert or runtime error
};

struct CoverageCounts {
  int failing = 0;  // executed by tests whose verdict is fail or error
  int passing = 0;
};

/// Statement -> per-verdict-class test counts. Absent statements were never
/// executed.
using CoverageRecord = std::map<StmtRef, CoverageCounts>;

struct TestRunOptions {
  bool with_coverage = false;
  std::int64_t max_steps = 1'000'000;
  /// Restricts the run to these tests (by name) when non-empty.
  std::vector<std::string> only;
};

struct TestRun {
  std::vector<TestResult> results;
  CoverageRecord coverage;

  std::size_t failing_count() const;
  std::vector<std::string> failing_names() const;
  bool all_pass() const { return failing_count() == 0; }
};

/// Runs each test in a fresh interpreter state. Only statements of non-test
/// files are recorded in the coverage.
TestRun run_tests(const Program& program, const TestRunOptions& options = {});

}  // namespace hydra::minilang

#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "hydra/minilang/interpreter.hpp"

namespace hydra::faultloc {

using minilang::StmtRef;

class NoFailingTest : public std::runtime_error {
 public:
  NoFailingTest() : std::runtime_error("no failing test: nothing to repair") {}
};

struct SpectrumEntry {
  StmtRef stmt;
  int line = 0;
  int ef = 0;  // failing tests covering the statement
  int ep = 0;  // passing tests covering the statement
};

struct Spectrum {
  std::vector<SpectrumEntry> entries;
  int nf_total = 0;
  int np_total = 0;

  const SpectrumEntry* find(const StmtRef& stmt) const;

  /// Statements with ef > 0.
  std::vector<StmtRef> failing_covered() const;
  bool failing_covers(const StmtRef& stmt) const;
};

/// Spectrum over every covered statement. Tests with verdict `error` count as
/// failing. Throws NoFailingTest when all tests pass.
Spectrum build_spectrum(const minilang::CoverageRecord& coverage,
                        const std::vector<minilang::TestResult>& verdicts);

/// Same, with statement lines filled in from `program`.
Spectrum build_spectrum(const minilang::Program& program, const minilang::TestRun& run);

struct RankedLocation {
  StmtRef stmt;
  int line = 0;
  double score = 0.0;
  int rank = 0;  // 1-based
};

double ochiai(int ef, int ep, int nf_total);

/// Ochiai ranking, score descending, ties by (file, line, statement).
std::vector<RankedLocation> ochiai_rank(const Spectrum& spectrum, std::size_t max_locations = 200);

}  // namespace hydra::faultloc

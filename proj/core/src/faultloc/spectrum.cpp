#include "hydra/faultloc/spectrum.hpp"

#include <algorithm>
#include <cmath>

namespace hydra::faultloc {

const SpectrumEntry* Spectrum::find(const StmtRef& stmt) const {
  for (const auto& e : entries) {
    if (e.stmt == stmt) return &e;
  }
  return nullptr;
}

std::vector<StmtRef> Spectrum::failing_covered() const {
  std::vector<StmtRef> out;
  for (const auto& e : entries) {
    if (e.ef > 0) out.push_back(e.stmt);
  }
  return out;
}

bool Spectrum::failing_covers(const StmtRef& stmt) const {
  const SpectrumEntry* e = find(stmt);
  return e != nullptr && e->ef > 0;
}

Spectrum build_spectrum(const minilang::CoverageRecord& coverage,
                        const std::vector<minilang::TestResult>& verdicts) {
  Spectrum s;
  for (const auto& r : verdicts) {
    if (r.verdict == minilang::Verdict::Pass) {
      ++s.np_total;
    } else {
      ++s.nf_total;
    }
  }
  if (s.nf_total == 0) throw NoFailingTest();
  for (const auto& [stmt, counts] : coverage) {
    if (counts.failing == 0 && counts.passing == 0) continue;
    s.entries.push_back({stmt, 0, counts.failing, counts.passing});
  }
  return s;
}

Spectrum build_spectrum(const minilang::Program& program, const minilang::TestRun& run) {
  Spectrum s = build_spectrum(run.coverage, run.results);
  for (auto& e : s.entries) {
    if (const auto* node = program.statement(e.stmt)) e.line = node->line;
  }
  return s;
}

double ochiai(int ef, int ep, int nf_total) {
  if (ef <= 0) return 0.0;
  const double denom = std::sqrt(static_cast<double>(nf_total) * static_cast<double>(ef + ep));
  if (denom == 0.0) return 0.0;
  return static_cast<double>(ef) / denom;
}

std::vector<RankedLocation> ochiai_rank(const Spectrum& spectrum, std::size_t max_locations) {
  std::vector<RankedLocation> out;
  out.reserve(spectrum.entries.size());
  for (const auto& e : spectrum.entries) {
    out.push_back({e.stmt, e.line, ochiai(e.ef, e.ep, spectrum.nf_total), 0});
  }
  std::sort(out.begin(), out.end(), [](const RankedLocation& a, const RankedLocation& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.stmt.file != b.stmt.file) return a.stmt.file < b.stmt.file;
    if (a.line != b.line) return a.line < b.line;
    return a.stmt < b.stmt;
  });
  if (out.size() > max_locations) out.resize(max_locations);
  for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = static_cast<int>(i) + 1;
  return out;
}

}  // namespace hydra::faultloc

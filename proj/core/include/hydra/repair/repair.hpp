#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hydra/faultloc/spectrum.hpp"
#include "hydra/history/history.hpp"
#include "hydra/repair/candidates.hpp"
#include "hydra/repair/validate.hpp"
#include "hydra/sibling/sibling.hpp"

namespace hydra::repair {

struct RepairConfig {
  std::size_t max_locations = 200;
  std::size_t candidates_per_schema = 50;
  double timeout_seconds = 18000.0;
  std::int64_t max_steps = 1'000'000;
  treesim::SimilarityConfig similarity;
  RankWeights weights;
  EnumerationLimits limits;
  /// Checks group, mapping, hunk and patch invariants during the run and
  /// lists violations in the report.
  bool check_invariants = false;
};

enum class Variant { Full, SingleHunk, FixedContext, MinusHistory, Incremental };

struct VariantSpec {
  Variant variant = Variant::Full;
  int window = 2;  // FixedContext only
};

std::string variant_name(const VariantSpec& v);

/// Parses `sh`, `fixed-context:w`, `minus-history`, `incremental` (and
/// `full`); nullopt for anything else.
std::optional<VariantSpec> parse_variant(std::string_view text);

sibling::SiblingOptions sibling_options(const VariantSpec& v);

enum class RunStatus { Plausible, Exhausted, Timeout, NoFailingTest };

std::string_view status_name(RunStatus s);

struct Patch {
  std::string schema;
  std::vector<Hunk> hunks;
  std::map<std::string, std::string> before_texts;  // canonical, changed files only
  std::map<std::string, std::string> after_texts;
};

struct RepairResult {
  RunStatus status = RunStatus::Exhausted;
  std::optional<Patch> patch;
  /// Deterministic report; wall-clock values live under "timing" only.
  nlohmann::json report;
};

/// Generate-and-validate over the Ochiai-ranked locations. `lineage` may be
/// null when no history bundle is available.
RepairResult repair_loop(const minilang::Program& project, const history::Lineage* lineage,
                         const RepairConfig& cfg, const VariantSpec& variant = {});

nlohmann::json patch_json(const Patch& p);
std::string patch_diff(const Patch& p);

/// Candidates a single location yields on its own (group of one).
std::size_t single_location_count(const minilang::Program& project, const StmtRef& stmt,
                                   const RepairConfig& cfg, const sibling::SiblingOptions& options);

}  // namespace hydra::repair

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hydra/context/context.hpp"
#include "hydra/faultloc/spectrum.hpp"
#include "hydra/history/history.hpp"
#include "hydra/minilang/program.hpp"
#include "hydra/treesim/zhang_shasha.hpp"

namespace hydra::sibling {

using minilang::Node;
using minilang::Program;
using minilang::StmtRef;

enum class Provenance { Spectrum, Similarity, HistoryDiscovered };

std::string_view provenance_name(Provenance p);

struct Member {
  StmtRef stmt;
  const Node* node = nullptr;
  Provenance provenance = Provenance::Spectrum;
  double statement_zeta = 1.0;
  double zeta = 1.0;  // context-level
  double xi = 1.0;
  context::ContextSet context;
  /// Reference node -> member node, statement and context pairs combined.
  treesim::NodeMapping mapping;
};

/// Star-shaped group around the reference, which is always members[0].
struct SiblingGroup {
  std::vector<Member> members;

  const Member& reference() const { return members.front(); }
  std::size_t size() const { return members.size(); }
  std::vector<StmtRef> refs() const;
};

enum class ContextMode { ReachingDefinitions, FixedWindow };

struct SiblingOptions {
  ContextMode context_mode = ContextMode::ReachingDefinitions;
  int window = 2;            // fixed-window half width
  bool use_history = true;   // step 3
  bool single = false;       // force groups of one
};

history::ContextFn context_function(const SiblingOptions& options);

struct Step1Candidate {
  StmtRef stmt;
  const Node* node = nullptr;
  double zeta = 0.0;
  treesim::NodeMapping mapping;
};

/// Failing-covered statements other than the reference whose statement-level
/// similarity to it exceeds t1.
std::vector<Step1Candidate> step1_similar_locations(const StmtRef& ref,
                                                    const faultloc::Spectrum& spectrum,
                                                    const Program& project,
                                                    const treesim::SimilarityConfig& cfg);

struct Step2Survivor {
  Step1Candidate candidate;
  double zeta = 0.0;  // context-level
  context::ContextSet context;
  treesim::NodeMapping mapping;  // combined
};

std::vector<Step2Survivor> step2_context_filter(const StmtRef& ref,
                                                const std::vector<Step1Candidate>& candidates,
                                                const Program& project,
                                                const treesim::SimilarityConfig& cfg,
                                                const history::ContextFn& context_of);

/// Merges co-changed discoveries, then drops members whose history
/// similarity to the reference is at most t2. Without a lineage every xi is 1.
SiblingGroup step3_history_revision(const StmtRef& ref, const std::vector<Step2Survivor>& survivors,
                                    const history::Lineage* lineage, const Program& project,
                                    const treesim::SimilarityConfig& cfg,
                                    const history::ContextFn& context_of);

SiblingGroup identify_siblings(const StmtRef& ref, const faultloc::Spectrum& spectrum,
                               const Program& project, const history::Lineage* lineage,
                               const treesim::SimilarityConfig& cfg,
                               const SiblingOptions& options = {});

/// Violations of the group invariants; empty when the group is well formed.
std::vector<std::string> group_violations(const SiblingGroup& group,
                                          const faultloc::Spectrum& spectrum,
                                          const treesim::SimilarityConfig& cfg);

}  // namespace hydra::sibling

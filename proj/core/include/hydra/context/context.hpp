#pragma once

#include <optional>
#include <vector>

#include "hydra/context/reaching.hpp"
#include "hydra/treesim/zhang_shasha.hpp"

namespace hydra::context {

/// A repair location and the statements its reads depend on. The function
/// node itself stands for the function header.
struct ContextSet {
  const Node* focus = nullptr;
  std::vector<const Node*> members;  // by line, focus included

  std::vector<int> lines() const;
};

/// Focus plus all reaching definitions of the variables it reads. When no
/// definition reaches it, the previous statement in preorder is added, or the
/// function header if the focus is the first statement.
ContextSet extract_context(const Node& function, const Node& focus);

/// Statements of the function within `w` lines of the focus, with the same
/// fallback as extract_context when the window holds only the focus.
ContextSet fixed_window_context(const Node& function, const Node& focus, int w);

treesim::TreeView context_tree(const ContextSet& c);

struct ContextMatch {
  bool similar = false;
  double zeta = 0.0;
  /// Context-level pairs (synthetic roots excluded) when zeta > t1.
  std::optional<treesim::NodeMapping> mapping;
  /// Union of the statement-level and context-level pairs when similar.
  std::optional<treesim::NodeMapping> combined;
};

/// Similar iff zeta over the lifted contexts exceeds t1 and the union of
/// `statement_mapping` with the context mapping stays one-to-one.
ContextMatch contexts_similar(const ContextSet& a, const ContextSet& b,
                              const treesim::NodeMapping& statement_mapping,
                              const treesim::SimilarityConfig& cfg);

/// Same, mapping the foci with statement_similarity first.
ContextMatch contexts_similar(const ContextSet& a, const ContextSet& b,
                              const treesim::SimilarityConfig& cfg);

/// Union of two mappings, or nullopt when some node would get two partners.
std::optional<treesim::NodeMapping> merge_mappings(const treesim::NodeMapping& a,
                                                   const treesim::NodeMapping& b);

}  // namespace hydra::context

#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hydra/treesim/similarity.hpp"

namespace hydra::treesim {

/// A tree over AST nodes, flattened in postorder, with a choice of which
/// children are visible. Slot value null is a synthetic root.
class TreeView {
 public:
  /// Whole subtree.
  static TreeView full(const Node& root);

  /// Statement-local shape: an If or While contributes only its condition,
  /// nested blocks are excluded, a Function contributes its header (params).
  static TreeView statement(const Node& stmt);

  /// Synthetic root whose children are the statement views of `stmts`.
  static TreeView forest(const std::vector<const Node*>& stmts);

  std::size_t size() const { return nodes_.size(); }
  /// Postorder position -> node; positions are 0-based.
  const Node* node(std::size_t i) const { return nodes_[i]; }
  std::size_t leftmost(std::size_t i) const { return lml_[i]; }
  /// Parent position, or npos for the root.
  std::size_t parent(std::size_t i) const { return parent_[i]; }
  std::optional<std::size_t> position(const Node* n) const;

  /// Whether position `a` is a proper ancestor of position `b`.
  bool is_ancestor(std::size_t a, std::size_t b) const { return lml_[a] <= b && b < a; }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  /// Children visible in the statement-local shape of `n`.
  static std::vector<const Node*> statement_children(const Node& n);

 private:
  void add_subtree(const Node* n, bool shallow, std::size_t parent_slot);
  std::vector<const Node*> nodes_;
  std::vector<std::size_t> lml_;
  std::vector<std::size_t> parent_;
  std::unordered_map<const Node*, std::size_t> index_;
};

/// One-to-one node pairs (left tree, right tree).
struct NodeMapping {
  std::vector<std::pair<const Node*, const Node*>> pairs;

  const Node* right_of(const Node* left) const;
  const Node* left_of(const Node* right) const;
  bool empty() const { return pairs.empty(); }
  std::size_t size() const { return pairs.size(); }
};

struct EditOp {
  enum class Kind { Match, Relabel, Delete, Insert };
  Kind kind;
  const Node* left = nullptr;   // Match, Relabel, Delete
  const Node* right = nullptr;  // Match, Relabel, Insert
};

std::string_view edit_kind_name(EditOp::Kind kind);

struct TreeMatch {
  int distance = 0;
  double zeta = 0.0;
  /// Cost-0 pairs of an optimal edit script, present only when zeta > t1.
  std::optional<NodeMapping> mapping;
};

/// Zhang-Shasha distance with unit insert/delete and relabel cost 0 for
/// similar nodes, 1 otherwise.
int tree_distance(const TreeView& a, const TreeView& b, const SimilarityConfig& cfg);

/// One optimal edit script (matches, relabels, deletes, inserts).
std::vector<EditOp> edit_script(const TreeView& a, const TreeView& b, const SimilarityConfig& cfg,
                                int* distance = nullptr);

/// zeta = 1 - distance / max(|a|, |b|), floored at 0.
TreeMatch tree_similarity(const TreeView& a, const TreeView& b, const SimilarityConfig& cfg);

/// tree_similarity over statement views.
TreeMatch statement_similarity(const Node& a, const Node& b, const SimilarityConfig& cfg);

/// Cost-0 pairs of the optimal script regardless of the threshold.
NodeMapping optimal_mapping(const TreeView& a, const TreeView& b, const SimilarityConfig& cfg);

/// Node-by-node equality of two views (kind, name, operator, literal,
/// declared type); positions, ids and resolved types are ignored.
bool same_view(const TreeView& a, const TreeView& b);

/// Violations of the mapping invariants (one-to-one, similar pairs,
/// ancestor and sibling order preserved); empty when legal.
std::vector<std::string> mapping_violations(const NodeMapping& m, const TreeView& a,
                                            const TreeView& b, const SimilarityConfig& cfg);

}  // namespace hydra::treesim

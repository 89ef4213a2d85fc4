#pragma once

#include <set>
#include <string>
#include <vector>

#include "hydra/minilang/ast.hpp"

namespace hydra::context {

using minilang::Node;

/// Statement-level control-flow graph of one function. Node 0 is the entry
/// (where parameters are defined), node 1 the exit, and statement k sits at
/// node k + 2 where k is its preorder statement index.
class ControlFlowGraph {
 public:
  explicit ControlFlowGraph(const Node& function);

  static constexpr std::size_t kEntry = 0;
  static constexpr std::size_t kExit = 1;

  std::size_t size() const { return succ_.size(); }
  const std::vector<std::size_t>& successors(std::size_t n) const { return succ_[n]; }
  const std::vector<std::size_t>& predecessors(std::size_t n) const { return pred_[n]; }

  /// Statement at a CFG node; null for entry and exit.
  const Node* statement(std::size_t n) const { return nodes_[n]; }
  std::size_t node_of(const Node& stmt) const { return static_cast<std::size_t>(stmt.stmt_index) + 2; }
  const Node& function() const { return *function_; }

  /// Whether CFG node `n` defines variable `v`.
  bool defines(std::size_t n, const std::string& v) const;

 private:
  std::size_t build_sequence(const Node& block, std::size_t next);
  std::size_t build_statement(const Node& stmt, std::size_t next);
  void edge(std::size_t from, std::size_t to);

  const Node* function_;
  std::vector<const Node*> nodes_;
  std::vector<std::vector<std::size_t>> succ_;
  std::vector<std::vector<std::size_t>> pred_;
  std::set<std::string> params_;
};

/// Names of variables read by a statement. Plain assignment targets are
/// writes and excluded; an If or While reads only its condition.
std::set<std::string> extract_variable_accesses(const Node& stmt);

/// Definitions of `v` reaching `stmt` without an intervening redefinition.
/// Definitions are initialized declarations, assignments to the plain
/// variable and, for parameters, the function itself (its header). Ordered
/// by statement index with the header first.
std::vector<const Node*> reaching_definitions(const Node& function, const Node& stmt,
                                              const std::string& v);
std::vector<const Node*> reaching_definitions(const ControlFlowGraph& cfg, const Node& stmt,
                                              const std::string& v);

}  // namespace hydra::context

#include "hydra/context/reaching.hpp"

#include <algorithm>

#include "hydra/treesim/zhang_shasha.hpp"

namespace hydra::context {

using minilang::NodeKind;

ControlFlowGraph::ControlFlowGraph(const Node& function) : function_(&function) {
  const auto stmts = minilang::function_statements(function);
  nodes_.assign(stmts.size() + 2, nullptr);
  for (const Node* s : stmts) nodes_[node_of(*s)] = s;
  succ_.resize(nodes_.size());
  pred_.resize(nodes_.size());
  for (const auto& c : function.children) {
    if (c->kind == NodeKind::Param) params_.insert(c->name);
  }
  const Node* body = function.children.back().get();
  edge(kEntry, build_sequence(*body, kExit));
}

void ControlFlowGraph::edge(std::size_t from, std::size_t to) {
  auto& s = succ_[from];
  if (std::find(s.begin(), s.end(), to) != s.end()) return;
  s.push_back(to);
  pred_[to].push_back(from);
}

std::size_t ControlFlowGraph::build_sequence(const Node& block, std::size_t next) {
  for (auto it = block.children.rbegin(); it != block.children.rend(); ++it) {
    next = build_statement(**it, next);
  }
  return next;
}

std::size_t ControlFlowGraph::build_statement(const Node& stmt, std::size_t next) {
  const std::size_t self = node_of(stmt);
  switch (stmt.kind) {
    case NodeKind::If: {
      edge(self, build_sequence(*stmt.child(1), next));
      edge(self, stmt.arity() > 2 ? build_sequence(*stmt.child(2), next) : next);
      break;
    }
    case NodeKind::While:
      edge(self, build_sequence(*stmt.child(1), self));
      edge(self, next);
      break;
    case NodeKind::Return:
      edge(self, kExit);
      break;
    default:
      edge(self, next);
  }
  return self;
}

bool ControlFlowGraph::defines(std::size_t n, const std::string& v) const {
  if (n == kEntry) return params_.count(v) != 0;
  const Node* s = nodes_[n];
  if (s == nullptr) return false;
  if (s->kind == NodeKind::VarDecl) return s->name == v && s->arity() == 1;
  if (s->kind == NodeKind::Assign) {
    const Node* target = s->child(0);
    return target->kind == NodeKind::VarAccess && target->name == v;
  }
  return false;
}

namespace {

void collect_reads(const Node& n, std::set<std::string>& out) {
  if (n.kind == NodeKind::VarAccess) {
    out.insert(n.name);
    return;
  }
  for (const auto& c : n.children) collect_reads(*c, out);
}

}  // namespace

std::set<std::string> extract_variable_accesses(const Node& stmt) {
  std::set<std::string> out;
  if (stmt.kind == NodeKind::Assign) {
    const Node* target = stmt.child(0);
    if (target->kind != NodeKind::VarAccess) collect_reads(*target, out);
    collect_reads(*stmt.child(1), out);
    return out;
  }
  for (const Node* c : treesim::TreeView::statement_children(stmt)) collect_reads(*c, out);
  return out;
}

std::vector<const Node*> reaching_definitions(const ControlFlowGraph& cfg, const Node& stmt,
                                              const std::string& v) {
  const std::size_t n = cfg.size();
  // in[k][d]: definition d reaches the start of node k.
  std::vector<std::vector<bool>> in(n, std::vector<bool>(n, false));
  std::vector<std::vector<bool>> out(n, std::vector<bool>(n, false));
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t k = 0; k < n; ++k) {
      std::vector<bool> inset(n, false);
      for (std::size_t p : cfg.predecessors(k)) {
        for (std::size_t d = 0; d < n; ++d) {
          if (out[p][d]) inset[d] = true;
        }
      }
      std::vector<bool> outset = inset;
      if (cfg.defines(k, v)) {
        outset.assign(n, false);
        outset[k] = true;
      }
      if (inset != in[k] || outset != out[k]) {
        in[k] = std::move(inset);
        out[k] = std::move(outset);
        changed = true;
      }
    }
  }
  std::vector<const Node*> result;
  const auto& reach = in[cfg.node_of(stmt)];
  for (std::size_t d = 0; d < n; ++d) {
    if (!reach[d]) continue;
    result.push_back(d == ControlFlowGraph::kEntry ? &cfg.function() : cfg.statement(d));
  }
  return result;
}

std::vector<const Node*> reaching_definitions(const Node& function, const Node& stmt,
                                              const std::string& v) {
  return reaching_definitions(ControlFlowGraph(function), stmt, v);
}

}  // namespace hydra::context

#include "hydra/context/context.hpp"

#include <algorithm>
#include <cstdlib>

namespace hydra::context {

using minilang::NodeKind;

std::vector<int> ContextSet::lines() const {
  std::vector<int> out;
  out.reserve(members.size());
  for (const Node* m : members) out.push_back(m->line);
  return out;
}

namespace {

// Sort key placing the header before the statements of its function.
int order_key(const Node* n) { return n->kind == NodeKind::Function ? -1 : n->stmt_index; }

void sort_members(std::vector<const Node*>& members) {
  std::sort(members.begin(), members.end(), [](const Node* a, const Node* b) {
    if (a->line != b->line) return a->line < b->line;
    return order_key(a) < order_key(b);
  });
  members.erase(std::unique(members.begin(), members.end()), members.end());
}

void add_fallback(const Node& function, const Node& focus, std::vector<const Node*>& members) {
  if (focus.stmt_index <= 0) {
    members.push_back(&function);
    return;
  }
  for (const Node* s : minilang::function_statements(function)) {
    if (s->stmt_index == focus.stmt_index - 1) {
      members.push_back(s);
      return;
    }
  }
}

}  // namespace

ContextSet extract_context(const Node& function, const Node& focus) {
  ControlFlowGraph cfg(function);
  ContextSet c;
  c.focus = &focus;
  c.members.push_back(&focus);
  for (const auto& v : extract_variable_accesses(focus)) {
    for (const Node* d : reaching_definitions(cfg, focus, v)) c.members.push_back(d);
  }
  sort_members(c.members);
  if (c.members.size() == 1) {
    add_fallback(function, focus, c.members);
    sort_members(c.members);
  }
  return c;
}

ContextSet fixed_window_context(const Node& function, const Node& focus, int w) {
  ContextSet c;
  c.focus = &focus;
  for (const Node* s : minilang::function_statements(function)) {
    if (std::abs(s->line - focus.line) <= w) c.members.push_back(s);
  }
  sort_members(c.members);
  if (c.members.size() == 1) {
    add_fallback(function, focus, c.members);
    sort_members(c.members);
  }
  return c;
}

treesim::TreeView context_tree(const ContextSet& c) { return treesim::TreeView::forest(c.members); }

std::optional<treesim::NodeMapping> merge_mappings(const treesim::NodeMapping& a,
                                                   const treesim::NodeMapping& b) {
  treesim::NodeMapping out = a;
  for (const auto& [l, r] : b.pairs) {
    const Node* have_r = out.right_of(l);
    const Node* have_l = out.left_of(r);
    if (have_r == r && have_l == l) continue;
    if (have_r != nullptr || have_l != nullptr) return std::nullopt;
    out.pairs.emplace_back(l, r);
  }
  return out;
}

ContextMatch contexts_similar(const ContextSet& a, const ContextSet& b,
                              const treesim::NodeMapping& statement_mapping,
                              const treesim::SimilarityConfig& cfg) {
  ContextMatch out;
  const auto m = treesim::tree_similarity(context_tree(a), context_tree(b), cfg);
  out.zeta = m.zeta;
  out.mapping = m.mapping;
  if (!m.mapping) return out;
  out.combined = merge_mappings(statement_mapping, *m.mapping);
  out.similar = out.combined.has_value();
  return out;
}

ContextMatch contexts_similar(const ContextSet& a, const ContextSet& b,
                              const treesim::SimilarityConfig& cfg) {
  const auto s = treesim::statement_similarity(*a.focus, *b.focus, cfg);
  return contexts_similar(a, b, s.mapping.value_or(treesim::NodeMapping{}), cfg);
}

}  // namespace hydra::context

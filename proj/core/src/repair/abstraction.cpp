#include "hydra/repair/abstraction.hpp"

#include <set>

#include "hydra/treesim/zhang_shasha.hpp"

namespace hydra::repair {

using minilang::NodeKind;

std::string placeholder(std::size_t k) { return "$v" + std::to_string(k); }

bool is_placeholder(std::string_view name) { return name.size() > 2 && name.substr(0, 2) == "$v"; }

NodePtr shallow_clone(const Node& stmt) {
  if (stmt.kind != NodeKind::If && stmt.kind != NodeKind::While) return stmt.clone();
  auto out = minilang::make_node(stmt.kind, stmt.line, stmt.column);
  out->add(stmt.child(0)->clone());
  return out;
}

NodePtr rename_variables(const Node& tree, const std::map<std::string, std::string>& names) {
  NodePtr out = tree.clone();
  std::vector<Node*> stack{out.get()};
  while (!stack.empty()) {
    Node* n = stack.back();
    stack.pop_back();
    if (n->kind == NodeKind::VarAccess) {
      auto it = names.find(n->name);
      if (it != names.end()) n->name = it->second;
    }
    for (auto& c : n->children) stack.push_back(c.get());
  }
  return out;
}

namespace {

bool variable_node(const Node& n) {
  return n.kind == NodeKind::VarAccess || n.kind == NodeKind::VarDecl || n.kind == NodeKind::Param;
}

// Variable-carrying nodes of the statement view, in preorder.
std::vector<const Node*> view_variables(const Node& stmt) {
  std::vector<const Node*> out;
  std::vector<const Node*> stack{&stmt};
  while (!stack.empty()) {
    const Node* n = stack.back();
    stack.pop_back();
    if (n->kind == NodeKind::VarAccess) out.push_back(n);
    const auto kids = treesim::TreeView::statement_children(*n);
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

std::vector<const Node*> context_variables(const context::ContextSet& ctx) {
  std::vector<const Node*> out;
  for (const Node* m : ctx.members) {
    std::vector<const Node*> stack{m};
    while (!stack.empty()) {
      const Node* n = stack.back();
      stack.pop_back();
      if (variable_node(*n)) out.push_back(n);
      const auto kids = treesim::TreeView::statement_children(*n);
      for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
    }
  }
  return out;
}

bool bind_name(MemberAbstraction& m, const std::string& ph, const std::string& name) {
  auto a = m.to_concrete.find(ph);
  auto b = m.to_abstract.find(name);
  if (a != m.to_concrete.end() || b != m.to_abstract.end()) {
    return a != m.to_concrete.end() && b != m.to_abstract.end() && a->second == name && b->second == ph;
  }
  m.to_concrete[ph] = name;
  m.to_abstract[name] = ph;
  return true;
}

}  // namespace

AbstractHunk abstract_group(const sibling::SiblingGroup& group) {
  const auto& ref = group.reference();
  // Placeholders: statement variables first, then the rest of the context.
  std::map<std::string, std::string> ref_names;
  std::vector<std::string> order;
  auto assign = [&](const std::string& name) {
    if (ref_names.count(name) != 0) return;
    ref_names[name] = placeholder(order.size() + 1);
    order.push_back(name);
  };
  for (const Node* v : view_variables(*ref.node)) assign(v->name);
  for (const Node* v : context_variables(ref.context)) assign(v->name);

  AbstractHunk hunk;
  hunk.tree = rename_variables(*shallow_clone(*ref.node), ref_names);
  const auto ref_stmt_list = view_variables(*ref.node);
  const std::set<const Node*> ref_stmt_vars(ref_stmt_list.begin(), ref_stmt_list.end());
  const auto ref_ctx_vars = context_variables(ref.context);

  std::vector<std::size_t> bad;
  std::string why;
  for (std::size_t i = 0; i < group.members.size(); ++i) {
    const auto& member = group.members[i];
    MemberAbstraction ma;
    ma.stmt = member.stmt;
    ma.node = member.node;
    if (i == 0) {
      for (const auto& [name, ph] : ref_names) bind_name(ma, ph, name);
      hunk.members.push_back(std::move(ma));
      continue;
    }
    bool ok = true;
    for (const Node* v : ref_stmt_list) {
      const Node* partner = member.mapping.right_of(v);
      if (partner == nullptr || !variable_node(*partner)) continue;
      if (!bind_name(ma, ref_names.at(v->name), partner->name)) {
        ok = false;
        why = "conflicting variable mapping at " + member.stmt.to_string();
      }
    }
    for (const Node* v : ref_ctx_vars) {
      if (ref_stmt_vars.count(v) != 0) continue;
      const Node* partner = member.mapping.right_of(v);
      if (partner == nullptr || !variable_node(*partner)) continue;
      (void)bind_name(ma, ref_names.at(v->name), partner->name);  // conflicts are skipped
    }
    for (const Node* v : view_variables(*member.node)) {
      if (ma.to_abstract.count(v->name) == 0) {
        ok = false;
        why = "unmapped variable " + v->name + " at " + member.stmt.to_string();
      }
    }
    if (ok) {
      const auto abstract = rename_variables(*shallow_clone(*member.node), ma.to_abstract);
      if (!minilang::same_tree(*abstract, *hunk.tree)) {
        ok = false;
        why = "abstract trees differ at " + member.stmt.to_string();
      }
    }
    if (!ok) bad.push_back(i);
    hunk.members.push_back(std::move(ma));
  }
  if (!bad.empty()) throw InconsistentMapping(std::move(bad), why);
  return hunk;
}

std::vector<std::string> hunk_violations(const AbstractHunk& hunk) {
  std::vector<std::string> out;
  if (!hunk.tree) {
    out.push_back("missing abstract tree");
    return out;
  }
  for (const auto& m : hunk.members) {
    if (m.node == nullptr) {
      out.push_back("member without node");
      continue;
    }
    std::set<std::string> images;
    for (const auto& [ph, name] : m.to_concrete) {
      if (!images.insert(name).second) out.push_back("inverse map not injective at " + m.stmt.to_string());
      auto back = m.to_abstract.find(name);
      if (back == m.to_abstract.end() || back->second != ph) {
        out.push_back("inverse maps disagree at " + m.stmt.to_string());
      }
    }
    const auto abstract = rename_variables(*shallow_clone(*m.node), m.to_abstract);
    if (!minilang::same_tree(*abstract, *hunk.tree)) {
      out.push_back("abstraction differs at " + m.stmt.to_string());
    }
    const auto back = rename_variables(*hunk.tree, m.to_concrete);
    if (!minilang::same_tree(*back, *shallow_clone(*m.node))) {
      out.push_back("concretization does not restore " + m.stmt.to_string());
    }
  }
  return out;
}

}  // namespace hydra::repair

#include "hydra/repair/candidates.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "hydra/minilang/unparse.hpp"

namespace hydra::repair {

using minilang::NodeKind;
using minilang::TypeTag;

std::string_view schema_name(SchemaId s) {
  switch (s) {
    case SchemaId::InsertNullCheck: return "InsertNullCheck";
    case SchemaId::ChangeCall: return "ChangeCall";
    case SchemaId::InsertCallWrap: return "InsertCallWrap";
    case SchemaId::ChangeIfCondition: return "ChangeIfCondition";
    case SchemaId::InsertIfGuard: return "InsertIfGuard";
    case SchemaId::ReplaceOperand: return "ReplaceOperand";
  }
  return "?";
}

double schema_prior(SchemaId s) {
  switch (s) {
    case SchemaId::ChangeIfCondition: return 0.9;
    case SchemaId::InsertCallWrap: return 0.8;
    case SchemaId::ChangeCall: return 0.7;
    case SchemaId::ReplaceOperand: return 0.6;
    case SchemaId::InsertIfGuard: return 0.5;
    case SchemaId::InsertNullCheck: return 0.4;
  }
  return 0.0;
}

namespace {

NodePtr var(const std::string& name, const Type& type) {
  auto n = minilang::make_node(NodeKind::VarAccess);
  n->name = name;
  n->type = type;
  return n;
}

NodePtr literal(const std::string& text, const Type& type) {
  auto n = minilang::make_node(NodeKind::Literal);
  n->literal = text;
  n->type = type;
  return n;
}

NodePtr binary(const std::string& op, NodePtr lhs, NodePtr rhs, const Type& type) {
  auto n = minilang::make_node(NodeKind::BinaryExpr);
  n->op = op;
  n->type = type;
  n->add(std::move(lhs));
  n->add(std::move(rhs));
  return n;
}

NodePtr unary(const std::string& op, NodePtr operand) {
  auto n = minilang::make_node(NodeKind::UnaryExpr);
  n->op = op;
  n->type = operand->type;
  n->add(std::move(operand));
  return n;
}

NodePtr call(const std::string& name, std::vector<NodePtr> args, const Type& type) {
  auto n = minilang::make_node(NodeKind::Call);
  n->name = name;
  n->type = type;
  for (auto& a : args) n->add(std::move(a));
  return n;
}

const Node* at_path(const Node& root, const NodePath& path) {
  const Node* n = &root;
  for (std::size_t i : path) n = n->child(i);
  return n;
}

void walk(const Node& n, NodePath& path, const std::function<void(const Node&, const NodePath&)>& fn) {
  fn(n, path);
  for (std::size_t i = 0; i < n.arity(); ++i) {
    path.push_back(i);
    walk(*n.child(i), path, fn);
    path.pop_back();
  }
}

// Expressions of the abstract tree with their paths, preorder.
std::vector<std::pair<const Node*, NodePath>> expressions(const Node& tree) {
  std::vector<std::pair<const Node*, NodePath>> out;
  NodePath path;
  walk(tree, path, [&](const Node& n, const NodePath& p) {
    if (n.is_expression()) out.emplace_back(&n, p);
  });
  return out;
}

void identifiers(const Node& n, std::set<std::string>& out) {
  if (n.kind == NodeKind::VarAccess || n.kind == NodeKind::Call) out.insert(n.name);
  for (const auto& c : n.children) identifiers(*c, out);
}

bool is_comparison(const std::string& op) {
  return op == "<" || op == "<=" || op == ">" || op == ">=" || op == "==" || op == "!=";
}

bool is_relational(const std::string& op) { return op == "<" || op == "<=" || op == ">" || op == ">="; }

const char* const kComparisons[] = {"<", "<=", ">", ">=", "==", "!="};

bool assign_target(const Node& tree, const NodePath& p) {
  return tree.kind == NodeKind::Assign && p.size() == 1 && p[0] == 0;
}

class Enumerator {
 public:
  Enumerator(const AbstractHunk& hunk, const Ingredients& ing, const Program& program,
             const std::vector<std::string>& ctx_ids, const treesim::SimilarityConfig& cfg,
             const EnumerationLimits& limits)
      : hunk_(hunk), ing_(ing), program_(program), ctx_ids_(ctx_ids), cfg_(cfg), limits_(limits) {}

  std::vector<CandidatePatch> run() {
    for (SchemaId s : kAllSchemas) {
      schema_ = s;
      emitted_ = 0;
      switch (s) {
        case SchemaId::InsertNullCheck: null_checks(); break;
        case SchemaId::ChangeCall: change_calls(); break;
        case SchemaId::InsertCallWrap: call_wraps(); break;
        case SchemaId::ChangeIfCondition: condition_changes(); break;
        case SchemaId::InsertIfGuard: if_guards(); break;
        case SchemaId::ReplaceOperand: operand_replacements(); break;
      }
    }
    return std::move(out_);
  }

 private:
  const Node& tree() const { return *hunk_.tree; }

  bool full() const { return emitted_ >= limits_.max_per_schema; }

  void emit(EditKind kind, NodePath path, NodePtr expr) {
    if (full()) return;
    CandidatePatch p;
    p.schema = schema_;
    p.edit.kind = kind;
    p.edit.path = std::move(path);
    std::set<std::string> before;
    if (kind == EditKind::ReplaceExpr) {
      identifiers(*at_path(tree(), p.edit.path), before);
    } else {
      identifiers(tree(), before);
    }
    std::set<std::string> now;
    identifiers(*expr, now);
    for (const auto& id : now) {
      if (before.count(id) == 0) p.inserted.push_back(id);
    }
    p.edit.expr = std::shared_ptr<const Node>(std::move(expr));
    for (const auto& m : hunk_.members) {
      ConcreteEdit e;
      e.stmt = m.stmt;
      e.kind = p.edit.kind;
      e.path = p.edit.path;
      e.expr = std::shared_ptr<const Node>(rename_variables(*p.edit.expr, m.to_concrete));
      p.edits.push_back(std::move(e));
    }
    p.affinity = affinity(p.inserted);
    p.sequence = out_.size();
    out_.push_back(std::move(p));
    ++emitted_;
  }

  double affinity(const std::vector<std::string>& inserted) const {
    if (inserted.empty()) return 1.0;
    const auto& names = hunk_.members.front().to_concrete;
    double total = 0.0;
    for (const auto& id : inserted) {
      auto it = names.find(id);
      const std::string& concrete = it == names.end() ? id : it->second;
      double best = 0.0;
      for (const auto& c : ctx_ids_) best = std::max(best, treesim::name_similarity(concrete, c, cfg_));
      total += best;
    }
    return total / static_cast<double>(inserted.size());
  }

  std::vector<const VariableIngredient*> variables_where(const std::function<bool(const Type&)>& pred) const {
    std::vector<const VariableIngredient*> out;
    for (const auto& v : ing_.variables) {
      if (pred(v.type)) out.push_back(&v);
    }
    return out;
  }

  bool wrappable_statement() const { return tree().kind != NodeKind::VarDecl; }

  void null_checks() {
    if (!wrappable_statement()) return;
    std::set<std::string> seen;
    for (const auto& [n, path] : expressions(tree())) {
      if (n->kind != NodeKind::VarAccess || n->type.tag != TypeTag::Record) continue;
      if (!seen.insert(n->name).second) continue;
      emit(EditKind::WrapGuard, {},
           binary("!=", var(n->name, n->type), literal("null", Type::null()), Type::bool_()));
    }
  }

  void change_calls() {
    for (const auto& [n, path] : expressions(tree())) {
      if (n->kind != NodeKind::Call || program_.function(n->name) == nullptr) continue;
      for (const auto& g : ing_.functions) {
        if (g.name == n->name || g.params.size() != n->arity()) continue;
        if (!minilang::is_assignable(g.result, n->type, &program_.records())) continue;
        bool ok = true;
        for (std::size_t k = 0; k < n->arity() && ok; ++k) {
          ok = minilang::is_assignable(n->child(k)->type, g.params[k], &program_.records());
        }
        if (!ok) continue;
        std::vector<NodePtr> args;
        for (const auto& a : n->children) args.push_back(a->clone());
        emit(EditKind::ReplaceExpr, path, call(g.name, std::move(args), g.result));
      }
    }
  }

  void call_wraps() {
    for (const auto& [n, path] : expressions(tree())) {
      if (assign_target(tree(), path)) continue;
      if (n->type.is_none() || n->type.tag == TypeTag::Void || n->type.tag == TypeTag::Null) continue;
      for (const auto& f : ing_.functions) {
        if (f.params.empty()) continue;
        if (!minilang::is_assignable(n->type, f.params[0], &program_.records())) continue;
        if (!minilang::is_assignable(f.result, n->type, &program_.records())) continue;
        std::vector<std::vector<const VariableIngredient*>> choices;
        bool feasible = true;
        for (std::size_t k = 1; k < f.params.size(); ++k) {
          const Type& want = f.params[k];
          choices.push_back(variables_where([&](const Type& t) {
            return minilang::is_assignable(t, want, &program_.records());
          }));
          if (choices.back().empty()) feasible = false;
        }
        if (!feasible) continue;
        std::vector<std::size_t> pick(choices.size(), 0);
        while (!full()) {
          std::vector<NodePtr> args;
          args.push_back(n->clone());
          for (std::size_t k = 0; k < choices.size(); ++k) {
            args.push_back(var(choices[k][pick[k]]->name, choices[k][pick[k]]->type));
          }
          emit(EditKind::ReplaceExpr, path, call(f.name, std::move(args), f.result));
          bool done = true;
          for (std::size_t k = choices.size(); k-- > 0;) {
            if (++pick[k] < choices[k].size()) {
              done = false;
              break;
            }
            pick[k] = 0;
          }
          if (done) break;
        }
      }
    }
  }

  void condition_changes() {
    if (tree().kind != NodeKind::If && tree().kind != NodeKind::While) return;
    const Node& cond = *tree().child(0);
    NodePath base{0};
    std::vector<std::pair<const Node*, NodePath>> nodes;
    walk(cond, base, [&](const Node& n, const NodePath& p) { nodes.emplace_back(&n, p); });
    for (const auto& [n, path] : nodes) {
      if (n->kind != NodeKind::BinaryExpr) continue;
      if (is_comparison(n->op)) {
        const bool numeric = n->child(0)->type.is_numeric() && n->child(1)->type.is_numeric();
        for (const char* op : kComparisons) {
          if (n->op == op) continue;
          if (!numeric && is_relational(op)) continue;
          emit(EditKind::ReplaceExpr, path,
               binary(op, n->child(0)->clone(), n->child(1)->clone(), Type::bool_()));
        }
        if (is_relational(n->op)) {
          emit(EditKind::ReplaceExpr, path,
               binary(n->op, n->child(1)->clone(), n->child(0)->clone(), Type::bool_()));
        }
      } else if (n->op == "&&" || n->op == "||") {
        emit(EditKind::ReplaceExpr, path,
             binary(n->op == "&&" ? "||" : "&&", n->child(0)->clone(), n->child(1)->clone(),
                    Type::bool_()));
      }
    }
    for (const auto* b : variables_where([](const Type& t) { return t.tag == TypeTag::Bool; })) {
      for (const char* op : {"&&", "||"}) {
        emit(EditKind::ReplaceExpr, {0}, binary(op, cond.clone(), var(b->name, b->type), Type::bool_()));
        emit(EditKind::ReplaceExpr, {0},
             binary(op, cond.clone(), unary("!", var(b->name, b->type)), Type::bool_()));
      }
    }
    for (const auto* r : variables_where([](const Type& t) { return t.tag == TypeTag::Record; })) {
      emit(EditKind::ReplaceExpr, {0},
           binary("&&", binary("!=", var(r->name, r->type), literal("null", Type::null()), Type::bool_()),
                  cond.clone(), Type::bool_()));
      emit(EditKind::ReplaceExpr, {0},
           binary("||", binary("==", var(r->name, r->type), literal("null", Type::null()), Type::bool_()),
                  cond.clone(), Type::bool_()));
    }
  }

  void if_guards() {
    if (!wrappable_statement()) return;
    for (const auto* b : variables_where([](const Type& t) { return t.tag == TypeTag::Bool; })) {
      emit(EditKind::WrapGuard, {}, var(b->name, b->type));
      emit(EditKind::WrapGuard, {}, unary("!", var(b->name, b->type)));
    }
    const auto nums = variables_where([](const Type& t) { return t.is_numeric(); });
    for (std::size_t i = 0; i < nums.size(); ++i) {
      for (std::size_t j = i + 1; j < nums.size(); ++j) {
        for (const char* op : kComparisons) {
          emit(EditKind::WrapGuard, {},
               binary(op, var(nums[i]->name, nums[i]->type), var(nums[j]->name, nums[j]->type),
                      Type::bool_()));
        }
      }
    }
    for (const auto* x : nums) {
      for (const char* op : kComparisons) {
        emit(EditKind::WrapGuard, {},
             binary(op, var(x->name, x->type), literal("0", Type::int_()), Type::bool_()));
      }
    }
    const auto arrays = variables_where([](const Type& t) { return t.tag == TypeTag::Array; });
    for (const auto* a : arrays) {
      emit(EditKind::WrapGuard, {},
           binary(">", len_of(*a), literal("0", Type::int_()), Type::bool_()));
      for (const auto* x : nums) {
        if (!x->type.is_integral()) continue;
        emit(EditKind::WrapGuard, {}, binary("<", var(x->name, x->type), len_of(*a), Type::bool_()));
      }
    }
  }

  static NodePtr len_of(const VariableIngredient& a) {
    std::vector<NodePtr> args;
    args.push_back(var(a.name, a.type));
    return call("len", std::move(args), Type::int_());
  }

  void operand_replacements() {
    for (const auto& [n, path] : expressions(tree())) {
      if (n->kind != NodeKind::VarAccess || assign_target(tree(), path)) continue;
      for (const auto& v : ing_.variables) {
        if (v.name == n->name) continue;
        if (!(v.type == n->type) && !minilang::is_assignable(v.type, n->type, &program_.records())) continue;
        emit(EditKind::ReplaceExpr, path, var(v.name, v.type));
      }
    }
  }

  const AbstractHunk& hunk_;
  const Ingredients& ing_;
  const Program& program_;
  const std::vector<std::string>& ctx_ids_;
  const treesim::SimilarityConfig& cfg_;
  EnumerationLimits limits_;
  SchemaId schema_ = SchemaId::InsertNullCheck;
  std::size_t emitted_ = 0;
  std::vector<CandidatePatch> out_;
};

std::string trim_newline(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == ' ')) s.pop_back();
  return s;
}

std::string render(const Node& stmt) {
  if (stmt.kind == NodeKind::If || stmt.kind == NodeKind::While) {
    std::string head = stmt.kind == NodeKind::If ? "if (" : "while (";
    return head + minilang::unparse_expression(*stmt.child(0)) + ")";
  }
  return trim_newline(minilang::unparse(stmt, 0));
}

}  // namespace

Ingredients collect_ingredients(const AbstractHunk& hunk, const Program& program) {
  Ingredients out;
  std::vector<std::map<std::string, Type>> per_member;
  for (const auto& m : hunk.members) {
    std::map<std::string, Type> vars;
    for (const auto& v : minilang::visible_variables(*m.node)) {
      auto it = m.to_abstract.find(v.name);
      vars.emplace(it == m.to_abstract.end() ? v.name : it->second, v.type);
    }
    per_member.push_back(std::move(vars));
  }
  const auto& ref = hunk.members.front();
  for (const auto& v : minilang::visible_variables(*ref.node)) {
    auto it = ref.to_abstract.find(v.name);
    const std::string name = it == ref.to_abstract.end() ? v.name : it->second;
    if (!is_placeholder(name)) {
      // A concrete name is only shared if no member uses it for a placeholder.
      bool clash = false;
      for (const auto& m : hunk.members) clash = clash || m.to_abstract.count(name) != 0;
      if (clash) continue;
    }
    bool everywhere = true;
    for (const auto& vars : per_member) {
      auto f = vars.find(name);
      everywhere = everywhere && f != vars.end() && f->second == v.type;
    }
    if (everywhere) out.variables.push_back({name, v.type});
  }
  std::set<const Node*> enclosing;
  for (const auto& m : hunk.members) enclosing.insert(m.node->enclosing_function());
  for (const Node* fn : program.project_functions()) {
    if (enclosing.count(fn) != 0) continue;
    FunctionIngredient f;
    f.name = fn->name;
    f.result = fn->declared;
    for (const auto& c : fn->children) {
      if (c->kind == NodeKind::Param) f.params.push_back(c->declared);
    }
    out.functions.push_back(std::move(f));
  }
  return out;
}

std::vector<CandidatePatch> enumerate_candidates(const AbstractHunk& hunk,
                                                 const Ingredients& ingredients,
                                                 const Program& program,
                                                 const std::vector<std::string>& context_ids,
                                                 const treesim::SimilarityConfig& cfg,
                                                 const EnumerationLimits& limits) {
  return Enumerator(hunk, ingredients, program, context_ids, cfg, limits).run();
}

void rank_candidates(std::vector<CandidatePatch>& cands, double flscore, const RankWeights& w) {
  for (auto& c : cands) {
    c.score = w.prior * schema_prior(c.schema) + w.affinity * c.affinity + w.flscore * flscore;
  }
  std::stable_sort(cands.begin(), cands.end(), [](const CandidatePatch& a, const CandidatePatch& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.schema != b.schema) return a.schema < b.schema;
    return a.sequence < b.sequence;
  });
  for (std::size_t i = 0; i < cands.size(); ++i) cands[i].rank = static_cast<int>(i) + 1;
}

std::vector<CandidatePatch> top_per_schema(const std::vector<CandidatePatch>& ranked,
                                           std::size_t per_schema) {
  std::map<SchemaId, std::size_t> taken;
  std::vector<CandidatePatch> out;
  for (const auto& c : ranked) {
    if (taken[c.schema]++ < per_schema) out.push_back(c);
  }
  return out;
}

std::vector<std::string> context_identifiers(const context::ContextSet& ctx) {
  std::set<std::string> ids;
  for (const Node* m : ctx.members) {
    minilang::for_each_node(*m, [&](const Node& n) {
      if (n.kind == NodeKind::Block) return;
      const auto name = treesim::similarity_name(n);
      if (!name.empty()) ids.insert(std::string(name));
    });
  }
  return {ids.begin(), ids.end()};
}

NodePtr apply_abstract(const AbstractHunk& hunk, const AbstractEdit& edit) {
  NodePtr tree = hunk.tree->clone();
  if (edit.kind == EditKind::WrapGuard) {
    auto guard = minilang::make_node(NodeKind::If);
    guard->add(edit.expr->clone());
    auto block = minilang::make_node(NodeKind::Block);
    block->add(std::move(tree));
    guard->add(std::move(block));
    return guard;
  }
  if (edit.path.empty()) return edit.expr->clone();
  Node* parent = tree.get();
  for (std::size_t i = 0; i + 1 < edit.path.size(); ++i) parent = parent->child(edit.path[i]);
  auto repl = edit.expr->clone();
  repl->parent = parent;
  parent->children[edit.path.back()] = std::move(repl);
  return tree;
}

std::string CandidatePatch::describe(const AbstractHunk& hunk) const {
  const NodePtr t = apply_abstract(hunk, edit);
  if (edit.kind == EditKind::WrapGuard) {
    return "if (" + minilang::unparse_expression(*t->child(0)) + ") { " + render(*t->child(1)->child(0)) + " }";
  }
  return render(*t);
}

std::vector<std::string> patch_violations(const CandidatePatch& p, const AbstractHunk& hunk) {
  std::vector<std::string> out;
  if (p.edits.size() != hunk.members.size()) out.push_back("edit count differs from group size");
  for (std::size_t i = 0; i < p.edits.size() && i < hunk.members.size(); ++i) {
    const auto& e = p.edits[i];
    const auto& m = hunk.members[i];
    if (!(e.stmt == m.stmt)) out.push_back("edit targets a non-member statement");
    if (e.kind != p.edit.kind || e.path != p.edit.path) out.push_back("edit shape differs at " + e.stmt.to_string());
    const auto back = rename_variables(*e.expr, m.to_abstract);
    if (!minilang::same_tree(*back, *p.edit.expr)) {
      out.push_back("edit at " + e.stmt.to_string() + " is not the shared abstract edit");
    }
  }
  return out;
}

}  // namespace hydra::repair

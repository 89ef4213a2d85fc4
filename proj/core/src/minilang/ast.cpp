#include "hydra/minilang/ast.hpp"

#include <charconv>
#include <stdexcept>

namespace hydra::minilang {

std::string_view kind_name(NodeKind kind) {
  switch (kind) {
    case NodeKind::Program: return "Program";
    case NodeKind::Record: return "Record";
    case NodeKind::Field: return "Field";
    case NodeKind::Function: return "Function";
    case NodeKind::Param: return "Param";
    case NodeKind::Block: return "Block";
    case NodeKind::VarDecl: return "VarDecl";
    case NodeKind::Assign: return "Assign";
    case NodeKind::If: return "If";
    case NodeKind::While: return "While";
    case NodeKind::Return: return "Return";
    case NodeKind::Assert: return "Assert";
    case NodeKind::ExprStmt: return "ExprStmt";
    case NodeKind::Call: return "Call";
    case NodeKind::VarAccess: return "VarAccess";
    case NodeKind::ArrayAccess: return "ArrayAccess";
    case NodeKind::FieldAccess: return "FieldAccess";
    case NodeKind::BinaryExpr: return "BinaryExpr";
    case NodeKind::UnaryExpr: return "UnaryExpr";
    case NodeKind::Literal: return "Literal";
    case NodeKind::ArrayLiteral: return "ArrayLiteral";
  }
  return "?";
}

bool is_statement_kind(NodeKind kind) {
  switch (kind) {
    case NodeKind::VarDecl:
    case NodeKind::Assign:
    case NodeKind::If:
    case NodeKind::While:
    case NodeKind::Return:
    case NodeKind::Assert:
    case NodeKind::ExprStmt:
      return true;
    default:
      return false;
  }
}

bool is_expression_kind(NodeKind kind) {
  switch (kind) {
    case NodeKind::Call:
    case NodeKind::VarAccess:
    case NodeKind::ArrayAccess:
    case NodeKind::FieldAccess:
    case NodeKind::BinaryExpr:
    case NodeKind::UnaryExpr:
    case NodeKind::Literal:
    case NodeKind::ArrayLiteral:
      return true;
    default:
      return false;
  }
}

Node* Node::add(std::unique_ptr<Node> c) {
  c->parent = this;
  children.push_back(std::move(c));
  return children.back().get();
}

std::unique_ptr<Node> Node::clone() const {
  auto copy = std::make_unique<Node>(kind);
  copy->id = id;
  copy->name = name;
  copy->op = op;
  copy->literal = literal;
  copy->extends = extends;
  copy->type = type;
  copy->declared = declared;
  copy->line = line;
  copy->column = column;
  copy->stmt_index = stmt_index;
  copy->children.reserve(children.size());
  for (const auto& c : children) copy->add(c->clone());
  return copy;
}

const Node* Node::enclosing_function() const {
  const Node* n = this;
  while (n != nullptr && n->kind != NodeKind::Function) n = n->parent;
  return n;
}

NodePtr make_node(NodeKind kind, int line, int column) {
  auto n = std::make_unique<Node>(kind);
  n->line = line;
  n->column = column;
  return n;
}

bool same_tree(const Node& a, const Node& b) {
  if (a.kind != b.kind || a.name != b.name || a.op != b.op || a.literal != b.literal ||
      a.extends != b.extends || a.declared != b.declared || a.arity() != b.arity()) {
    return false;
  }
  for (std::size_t i = 0; i < a.arity(); ++i) {
    if (!same_tree(*a.child(i), *b.child(i))) return false;
  }
  return true;
}

void for_each_node(const Node& root, const std::function<void(const Node&)>& fn) {
  fn(root);
  for (const auto& c : root.children) for_each_node(*c, fn);
}

std::vector<const Node*> function_statements(const Node& function) {
  std::vector<const Node*> out;
  for_each_node(function, [&](const Node& n) {
    if (n.is_statement()) out.push_back(&n);
  });
  return out;
}

Ast::Ast(NodePtr r, std::string file, bool test)
    : root(std::move(r)), source_file(std::move(file)), is_test(test) {
  renumber();
}

Ast Ast::clone() const {
  Ast copy;
  copy.root = root ? root->clone() : nullptr;
  copy.source_file = source_file;
  copy.node_count = node_count;
  copy.is_test = is_test;
  return copy;
}

namespace {

void renumber_rec(Node& n, Node* parent, NodeId& next, int& stmt_counter) {
  n.parent = parent;
  n.id = next++;
  if (n.kind == NodeKind::Function) stmt_counter = 0;
  n.stmt_index = n.is_statement() ? stmt_counter++ : -1;
  for (auto& c : n.children) renumber_rec(*c, &n, next, stmt_counter);
}

}  // namespace

void Ast::renumber() {
  if (!root) {
    node_count = 0;
    return;
  }
  NodeId next = 0;
  int stmt_counter = 0;
  renumber_rec(*root, nullptr, next, stmt_counter);
  node_count = next;
}

const Node* Ast::function(std::string_view name) const {
  if (!root) return nullptr;
  for (const auto& c : root->children) {
    if (c->kind == NodeKind::Function && c->name == name) return c.get();
  }
  return nullptr;
}

std::vector<const Node*> Ast::functions() const {
  std::vector<const Node*> out;
  if (!root) return out;
  for (const auto& c : root->children) {
    if (c->kind == NodeKind::Function) out.push_back(c.get());
  }
  return out;
}

std::string StmtRef::to_string() const {
  return file + ":" + function + ":" + std::to_string(index);
}

StmtRef StmtRef::parse(std::string_view text) {
  auto last = text.rfind(':');
  if (last == std::string_view::npos) throw std::invalid_argument("bad statement ref");
  auto mid = text.rfind(':', last == 0 ? 0 : last - 1);
  if (mid == std::string_view::npos || mid == last) {
    throw std::invalid_argument("bad statement ref: " + std::string(text));
  }
  StmtRef ref;
  ref.file = std::string(text.substr(0, mid));
  ref.function = std::string(text.substr(mid + 1, last - mid - 1));
  auto digits = text.substr(last + 1);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), ref.index);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) {
    throw std::invalid_argument("bad statement index: " + std::string(text));
  }
  return ref;
}

StmtRef StmtRef::of(const Node& stmt, const std::string& file) {
  const Node* fn = stmt.enclosing_function();
  return StmtRef{file, fn != nullptr ? fn->name : std::string(), stmt.stmt_index};
}

}  // namespace hydra::minilang

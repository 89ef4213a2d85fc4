#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "hydra/minilang/types.hpp"

namespace hydra::minilang {

enum class NodeKind : std::uint8_t {
  Program,
  Record,
  Field,
  Function,
  Param,
  Block,
  // statements
  VarDecl,
  Assign,
  If,
  While,
  Return,
  Assert,
  ExprStmt,
  // expressions
  Call,
  VarAccess,
  ArrayAccess,
  FieldAccess,
  BinaryExpr,
  UnaryExpr,
  Literal,
  ArrayLiteral,
};

std::string_view kind_name(NodeKind kind);
bool is_statement_kind(NodeKind kind);
bool is_expression_kind(NodeKind kind);

/// Preorder index of a node inside its file.
using NodeId = std::uint32_t;

/// One node of an ordered MiniLang syntax tree.
///
/// Child layout per kind:
///   Program      records and functions
///   Record       Field*                     name, extends
///   Function     Param*, Block              name, declared = return type
///   Param/Field  (none)                     name, declared
///   VarDecl      [init]                     name, declared
///   Assign       target, value
///   If           cond, Block, [Block]
///   While        cond, Block
///   Return       [value]
///   Assert/ExprStmt  expr
///   Call         args                       name = callee
///   FieldAccess  base                       name = field
///   ArrayAccess  base, index
///   BinaryExpr   lhs, rhs                   op
///   UnaryExpr    operand                    op
///   Literal      (none)                     literal spelling
///   ArrayLiteral elements
struct Node {
  NodeKind kind = NodeKind::Program;
  NodeId id = 0;
  std::string name;
  std::string op;
  std::string literal;
  std::string extends;
  Type type;      // resolved type of expressions
  Type declared;  // declared type of VarDecl/Param/Field, return type of Function
  int line = 0;
  int column = 0;
  int stmt_index = -1;  // preorder index among the enclosing function's statements
  Node* parent = nullptr;
  std::vector<std::unique_ptr<Node>> children;

  explicit Node(NodeKind k) : kind(k) {}

  Node* child(std::size_t i) const { return children[i].get(); }
  std::size_t arity() const { return children.size(); }
  Node* add(std::unique_ptr<Node> c);

  bool is_statement() const { return is_statement_kind(kind); }
  bool is_expression() const { return is_expression_kind(kind); }

  /// Deep copy. Parent links inside the copy are rebuilt; the copy's own
  /// parent is null.
  std::unique_ptr<Node> clone() const;

  const Node* enclosing_function() const;
};

using NodePtr = std::unique_ptr<Node>;

NodePtr make_node(NodeKind kind, int line = 0, int column = 0);

/// Structural equality ignoring ids, positions and resolved types.
bool same_tree(const Node& a, const Node& b);

/// Preorder traversal.
void for_each_node(const Node& root, const std::function<void(const Node&)>& fn);

/// Statements of a function body in preorder.
std::vector<const Node*> function_statements(const Node& function);

/// Parsed source file.
struct Ast {
  NodePtr root;
  std::string source_file;
  std::size_t node_count = 0;
  bool is_test = false;

  Ast() = default;
  Ast(NodePtr root, std::string file, bool test = false);
  Ast(Ast&&) noexcept = default;
  Ast& operator=(Ast&&) noexcept = default;

  Ast clone() const;

  /// Reassigns preorder ids, parent links and statement indices.
  void renumber();

  const Node* function(std::string_view name) const;
  std::vector<const Node*> functions() const;
};

/// Stable statement identity: file, enclosing function, preorder index among
/// that function's statements.
struct StmtRef {
  std::string file;
  std::string function;
  int index = -1;

  std::string to_string() const;
  static StmtRef parse(std::string_view text);
  static StmtRef of(const Node& stmt, const std::string& file);

  friend auto operator<=>(const StmtRef&, const StmtRef&) = default;
  friend bool operator==(const StmtRef&, const StmtRef&) = default;
};

}  // namespace hydra::minilang

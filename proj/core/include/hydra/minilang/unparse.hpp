#pragma once

#include <string>

#include "hydra/minilang/ast.hpp"

namespace hydra::minilang {

/// Canonical MiniLang text: one statement per line, 4-space indents, minimal
/// parentheses. parse(unparse(t)) is tree-isomorphic to t.
std::string unparse(const Ast& ast);
std::string unparse(const Node& node, int indent = 0);

/// Single-line rendering of an expression.
std::string unparse_expression(const Node& expr);

/// Single-line rendering of a statement header: blocks are elided, so
/// `if (x < 1) { ... }` renders as `if (x < 1)`.
std::string statement_header(const Node& stmt);

}  // namespace hydra::minilang

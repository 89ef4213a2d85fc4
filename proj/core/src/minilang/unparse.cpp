#include "hydra/minilang/unparse.hpp"

#include <sstream>

namespace hydra::minilang {

namespace {

int binary_precedence(const std::string& op) {
  if (op == "||") return 1;
  if (op == "&&") return 2;
  if (op == "==" || op == "!=") return 3;
  if (op == "<" || op == "<=" || op == ">" || op == ">=") return 4;
  if (op == "+" || op == "-") return 5;
  if (op == "*" || op == "/" || op == "%") return 6;
  return 0;
}

constexpr int kUnaryPrecedence = 7;
constexpr int kPostfixPrecedence = 8;

int expr_precedence(const Node& e) {
  switch (e.kind) {
    case NodeKind::BinaryExpr: return binary_precedence(e.op);
    case NodeKind::UnaryExpr: return kUnaryPrecedence;
    default: return kPostfixPrecedence + 1;
  }
}

void write_expr(std::ostream& os, const Node& e);

void write_operand(std::ostream& os, const Node& e, int min_prec) {
  if (expr_precedence(e) < min_prec) {
    os << '(';
    write_expr(os, e);
    os << ')';
  } else {
    write_expr(os, e);
  }
}

void write_list(std::ostream& os, const Node& n) {
  for (std::size_t i = 0; i < n.arity(); ++i) {
    if (i) os << ", ";
    write_expr(os, *n.child(i));
  }
}

void write_expr(std::ostream& os, const Node& e) {
  switch (e.kind) {
    case NodeKind::Literal:
      os << e.literal;
      break;
    case NodeKind::VarAccess:
      os << e.name;
      break;
    case NodeKind::Call:
      os << e.name << '(';
      write_list(os, e);
      os << ')';
      break;
    case NodeKind::ArrayLiteral:
      os << '[';
      write_list(os, e);
      os << ']';
      break;
    case NodeKind::FieldAccess:
      write_operand(os, *e.child(0), kPostfixPrecedence);
      os << '.' << e.name;
      break;
    case NodeKind::ArrayAccess:
      write_operand(os, *e.child(0), kPostfixPrecedence);
      os << '[';
      write_expr(os, *e.child(1));
      os << ']';
      break;
    case NodeKind::UnaryExpr:
      os << e.op;
      write_operand(os, *e.child(0), kUnaryPrecedence);
      break;
    case NodeKind::BinaryExpr: {
      int prec = binary_precedence(e.op);
      write_operand(os, *e.child(0), prec);
      os << ' ' << e.op << ' ';
      write_operand(os, *e.child(1), prec + 1);
      break;
    }
    default:
      os << "<" << kind_name(e.kind) << ">";
  }
}

void indent_to(std::ostream& os, int indent) {
  for (int i = 0; i < indent; ++i) os << "    ";
}

void write_block(std::ostream& os, const Node& block, int indent);

void write_stmt(std::ostream& os, const Node& s, int indent) {
  indent_to(os, indent);
  switch (s.kind) {
    case NodeKind::VarDecl:
      os << "var " << s.name << ": " << s.declared.to_string();
      if (s.arity() == 1) {
        os << " = ";
        write_expr(os, *s.child(0));
      }
      os << ";\n";
      break;
    case NodeKind::Assign:
      write_expr(os, *s.child(0));
      os << " = ";
      write_expr(os, *s.child(1));
      os << ";\n";
      break;
    case NodeKind::If:
      os << "if (";
      write_expr(os, *s.child(0));
      os << ") ";
      write_block(os, *s.child(1), indent);
      if (s.arity() == 3) {
        os << " else ";
        write_block(os, *s.child(2), indent);
      }
      os << '\n';
      break;
    case NodeKind::While:
      os << "while (";
      write_expr(os, *s.child(0));
      os << ") ";
      write_block(os, *s.child(1), indent);
      os << '\n';
      break;
    case NodeKind::Return:
      os << "return";
      if (s.arity() == 1) {
        os << ' ';
        write_expr(os, *s.child(0));
      }
      os << ";\n";
      break;
    case NodeKind::Assert:
      os << "assert ";
      write_expr(os, *s.child(0));
      os << ";\n";
      break;
    case NodeKind::ExprStmt:
      write_expr(os, *s.child(0));
      os << ";\n";
      break;
    default:
      os << "<" << kind_name(s.kind) << ">\n";
  }
}

void write_block(std::ostream& os, const Node& block, int indent) {
  if (block.arity() == 0) {
    os << "{ }";
    return;
  }
  os << "{\n";
  for (const auto& s : block.children) write_stmt(os, *s, indent + 1);
  indent_to(os, indent);
  os << '}';
}

void write_decl(std::ostream& os, const Node& d, int indent) {
  if (d.kind == NodeKind::Record) {
    indent_to(os, indent);
    os << "record " << d.name;
    if (!d.extends.empty()) os << " extends " << d.extends;
    if (d.arity() == 0) {
      os << " { }\n";
      return;
    }
    os << " {\n";
    for (const auto& f : d.children) {
      indent_to(os, indent + 1);
      os << f->name << ": " << f->declared.to_string() << ";\n";
    }
    indent_to(os, indent);
    os << "}\n";
    return;
  }
  if (d.kind == NodeKind::Function) {
    indent_to(os, indent);
    os << "fn " << d.name << '(';
    bool first = true;
    for (const auto& c : d.children) {
      if (c->kind != NodeKind::Param) continue;
      if (!first) os << ", ";
      first = false;
      os << c->name << ": " << c->declared.to_string();
    }
    os << ')';
    if (d.declared.tag != TypeTag::Void && !d.declared.is_none()) {
      os << " -> " << d.declared.to_string();
    }
    os << ' ';
    write_block(os, *d.children.back(), indent);
    os << '\n';
  }
}

}  // namespace

std::string unparse(const Ast& ast) { return ast.root ? unparse(*ast.root) : std::string(); }

std::string unparse(const Node& node, int indent) {
  std::ostringstream os;
  if (node.kind == NodeKind::Program) {
    bool first = true;
    for (const auto& d : node.children) {
      if (!first) os << '\n';
      first = false;
      write_decl(os, *d, indent);
    }
  } else if (node.kind == NodeKind::Record || node.kind == NodeKind::Function) {
    write_decl(os, node, indent);
  } else if (node.kind == NodeKind::Block) {
    write_block(os, node, indent);
  } else if (node.is_statement()) {
    write_stmt(os, node, indent);
  } else {
    write_expr(os, node);
  }
  return os.str();
}

std::string unparse_expression(const Node& expr) {
  std::ostringstream os;
  write_expr(os, expr);
  return os.str();
}

std::string statement_header(const Node& stmt) {
  std::ostringstream os;
  switch (stmt.kind) {
    case NodeKind::If:
      os << "if (";
      write_expr(os, *stmt.child(0));
      os << ")";
      return os.str();
    case NodeKind::While:
      os << "while (";
      write_expr(os, *stmt.child(0));
      os << ")";
      return os.str();
    case NodeKind::Function: {
      os << "fn " << stmt.name << '(';
      bool first = true;
      for (const auto& c : stmt.children) {
        if (c->kind != NodeKind::Param) continue;
        if (!first) os << ", ";
        first = false;
        os << c->name << ": " << c->declared.to_string();
      }
      os << ')';
      return os.str();
    }
    default: {
      std::string s = unparse(stmt);
      while (!s.empty() && s.back() == '\n') s.pop_back();
      return s;
    }
  }
}

}  // namespace hydra::minilang

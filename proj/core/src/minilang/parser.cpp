#include "hydra/minilang/parser.hpp"

#include <cctype>
#include <optional>
#include <vector>

namespace hydra::minilang {

SyntaxError::SyntaxError(std::string file, int line, int column, const std::string& message)
    : std::runtime_error(file + ":" + std::to_string(line) + ":" + std::to_string(column) +
                         ": syntax error: " + message),
      file_(std::move(file)),
      line_(line),
      column_(column) {}

namespace {

enum class Tok {
  End,
  Ident,
  IntLit,
  LongLit,
  FloatLit,
  DoubleLit,
  StringLit,
  Punct,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  Lexer(std::string_view src, const std::string& file) : src_(src), file_(file) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.line = line_;
      t.column = col_;
      if (pos_ >= src_.size()) {
        t.kind = Tok::End;
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Tok::Ident;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
          t.text += advance();
        }
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        lex_number(t);
      } else if (c == '"') {
        lex_string(t);
      } else {
        lex_punct(t);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  [[noreturn]] void fail(const std::string& msg) { throw SyntaxError(file_, line_, col_, msg); }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  void lex_number(Token& t) {
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
      t.text += advance();
    }
    bool floating = false;
    if (pos_ + 1 < src_.size() && src_[pos_] == '.' &&
        std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
      floating = true;
      t.text += advance();
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        t.text += advance();
      }
    }
    if (pos_ < src_.size() && (src_[pos_] == 'L' || src_[pos_] == 'l') && !floating) {
      t.text += advance();
      t.kind = Tok::LongLit;
    } else if (pos_ < src_.size() && (src_[pos_] == 'f' || src_[pos_] == 'F')) {
      t.text += advance();
      t.kind = Tok::FloatLit;
    } else {
      t.kind = floating ? Tok::DoubleLit : Tok::IntLit;
    }
    if (pos_ < src_.size() &&
        (std::isalpha(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      fail("malformed number literal");
    }
  }

  void lex_string(Token& t) {
    t.kind = Tok::StringLit;
    t.text += advance();
    while (true) {
      if (pos_ >= src_.size() || src_[pos_] == '\n') fail("unterminated string literal");
      char c = advance();
      t.text += c;
      if (c == '\\') {
        if (pos_ >= src_.size()) fail("unterminated string literal");
        t.text += advance();
      } else if (c == '"') {
        break;
      }
    }
  }

  void lex_punct(Token& t) {
    static const char* two[] = {"->", "==", "!=", "<=", ">=", "&&", "||"};
    t.kind = Tok::Punct;
    if (pos_ + 1 < src_.size()) {
      std::string_view pair = src_.substr(pos_, 2);
      for (const char* p : two) {
        if (pair == p) {
          t.text += advance();
          t.text += advance();
          return;
        }
      }
    }
    static const std::string_view singles = "(){}[],;:.=<>+-*/%!";
    if (singles.find(src_[pos_]) == std::string_view::npos) {
      fail(std::string("unexpected character '") + src_[pos_] + "'");
    }
    t.text += advance();
  }

  std::string_view src_;
  const std::string& file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

bool is_keyword(const std::string& s) {
  static const char* kws[] = {"fn",     "record", "extends", "var",   "if",   "else",
                              "while",  "return", "assert",  "true",  "false", "null"};
  for (const char* k : kws) {
    if (s == k) return true;
  }
  return false;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, std::string file) : toks_(std::move(toks)), file_(std::move(file)) {}

  NodePtr program() {
    auto root = make_node(NodeKind::Program, 1, 1);
    while (!at_end()) {
      if (is_word("record")) {
        root->add(record_decl());
      } else if (is_word("fn")) {
        root->add(fn_decl());
      } else {
        fail_here("expected 'record' or 'fn'");
      }
    }
    return root;
  }

  NodePtr lone_statement() {
    auto s = statement();
    if (!at_end()) fail_here("trailing input after statement");
    return s;
  }

  NodePtr lone_expression() {
    auto e = expression();
    if (!at_end()) fail_here("trailing input after expression");
    return e;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  bool at_end() const { return peek().kind == Tok::End; }
  const Token& take() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool is_punct(std::string_view p, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Punct && peek(ahead).text == p;
  }
  bool is_word(std::string_view w) const { return peek().kind == Tok::Ident && peek().text == w; }

  [[noreturn]] void fail_here(const std::string& msg) const {
    const Token& t = peek();
    std::string near = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw SyntaxError(file_, t.line, t.column, msg + " near " + near);
  }

  void expect_punct(std::string_view p) {
    if (!is_punct(p)) fail_here("expected '" + std::string(p) + "'");
    take();
  }
  void expect_word(std::string_view w) {
    if (!is_word(w)) fail_here("expected '" + std::string(w) + "'");
    take();
  }
  std::string expect_name() {
    if (peek().kind != Tok::Ident || is_keyword(peek().text)) fail_here("expected identifier");
    return take().text;
  }

  Type type_spec() {
    if (peek().kind != Tok::Ident) fail_here("expected type");
    std::string word = take().text;
    if (word == "int") return Type::int_();
    if (word == "long") return Type::long_();
    if (word == "float") return Type::float_();
    if (word == "double") return Type::double_();
    if (word == "bool") return Type::bool_();
    if (word == "string") return Type::string_();
    if (word == "array") {
      expect_punct("<");
      Type elem = type_spec();
      if (!is_primitive_tag(elem.tag)) fail_here("array elements must be primitive");
      expect_punct(">");
      return Type::array_of(elem.tag);
    }
    if (is_keyword(word)) fail_here("expected type");
    return Type::record_named(word);
  }

  NodePtr record_decl() {
    const Token& kw = take();
    auto rec = make_node(NodeKind::Record, kw.line, kw.column);
    rec->name = expect_name();
    if (is_word("extends")) {
      take();
      rec->extends = expect_name();
    }
    expect_punct("{");
    while (!is_punct("}")) {
      const Token& t = peek();
      auto field = make_node(NodeKind::Field, t.line, t.column);
      field->name = expect_name();
      expect_punct(":");
      field->declared = type_spec();
      expect_punct(";");
      rec->add(std::move(field));
    }
    expect_punct("}");
    return rec;
  }

  NodePtr fn_decl() {
    const Token& kw = take();
    auto fn = make_node(NodeKind::Function, kw.line, kw.column);
    fn->name = expect_name();
    expect_punct("(");
    if (!is_punct(")")) {
      for (;;) {
        const Token& t = peek();
        auto param = make_node(NodeKind::Param, t.line, t.column);
        param->name = expect_name();
        expect_punct(":");
        param->declared = type_spec();
        fn->add(std::move(param));
        if (is_punct(",")) {
          take();
          continue;
        }
        break;
      }
    }
    expect_punct(")");
    fn->declared = Type::void_();
    if (is_punct("->")) {
      take();
      fn->declared = type_spec();
    }
    fn->add(block());
    return fn;
  }

  NodePtr block() {
    const Token& open = peek();
    expect_punct("{");
    auto blk = make_node(NodeKind::Block, open.line, open.column);
    while (!is_punct("}")) {
      if (at_end()) fail_here("expected '}'");
      blk->add(statement());
    }
    take();
    return blk;
  }

  NodePtr statement() {
    const Token& t = peek();
    if (is_word("var")) {
      take();
      auto decl = make_node(NodeKind::VarDecl, t.line, t.column);
      decl->name = expect_name();
      expect_punct(":");
      decl->declared = type_spec();
      if (is_punct("=")) {
        take();
        decl->add(expression());
      }
      expect_punct(";");
      return decl;
    }
    if (is_word("if")) {
      take();
      auto node = make_node(NodeKind::If, t.line, t.column);
      expect_punct("(");
      node->add(expression());
      expect_punct(")");
      node->add(block());
      if (is_word("else")) {
        take();
        node->add(block());
      }
      return node;
    }
    if (is_word("while")) {
      take();
      auto node = make_node(NodeKind::While, t.line, t.column);
      expect_punct("(");
      node->add(expression());
      expect_punct(")");
      node->add(block());
      return node;
    }
    if (is_word("return")) {
      take();
      auto node = make_node(NodeKind::Return, t.line, t.column);
      if (!is_punct(";")) node->add(expression());
      expect_punct(";");
      return node;
    }
    if (is_word("assert")) {
      take();
      auto node = make_node(NodeKind::Assert, t.line, t.column);
      node->add(expression());
      expect_punct(";");
      return node;
    }
    auto expr = expression();
    if (is_punct("=")) {
      if (expr->kind != NodeKind::VarAccess && expr->kind != NodeKind::FieldAccess &&
          expr->kind != NodeKind::ArrayAccess) {
        fail_here("left side of '=' is not assignable");
      }
      take();
      auto node = make_node(NodeKind::Assign, t.line, t.column);
      node->add(std::move(expr));
      node->add(expression());
      expect_punct(";");
      return node;
    }
    auto node = make_node(NodeKind::ExprStmt, t.line, t.column);
    node->add(std::move(expr));
    expect_punct(";");
    return node;
  }

  NodePtr expression() { return binary(0); }

  static int precedence(const std::string& op) {
    if (op == "||") return 1;
    if (op == "&&") return 2;
    if (op == "==" || op == "!=") return 3;
    if (op == "<" || op == "<=" || op == ">" || op == ">=") return 4;
    if (op == "+" || op == "-") return 5;
    if (op == "*" || op == "/" || op == "%") return 6;
    return -1;
  }

  NodePtr binary(int min_prec) {
    auto lhs = unary();
    for (;;) {
      if (peek().kind != Tok::Punct) return lhs;
      int prec = precedence(peek().text);
      if (prec < 0 || prec < min_prec) return lhs;
      const Token& op = take();
      auto rhs = binary(prec + 1);
      auto node = make_node(NodeKind::BinaryExpr, lhs->line, lhs->column);
      node->op = op.text;
      node->add(std::move(lhs));
      node->add(std::move(rhs));
      lhs = std::move(node);
    }
  }

  NodePtr unary() {
    if (is_punct("-") || is_punct("!")) {
      const Token& op = take();
      auto node = make_node(NodeKind::UnaryExpr, op.line, op.column);
      node->op = op.text;
      node->add(unary());
      return node;
    }
    return postfix(primary());
  }

  NodePtr postfix(NodePtr base) {
    for (;;) {
      if (is_punct(".")) {
        const Token& dot = take();
        auto node = make_node(NodeKind::FieldAccess, dot.line, dot.column);
        node->name = expect_name();
        node->add(std::move(base));
        base = std::move(node);
      } else if (is_punct("[")) {
        const Token& br = take();
        auto node = make_node(NodeKind::ArrayAccess, br.line, br.column);
        node->add(std::move(base));
        node->add(expression());
        expect_punct("]");
        base = std::move(node);
      } else {
        return base;
      }
    }
  }

  NodePtr literal(const Token& t, Type type) {
    auto node = make_node(NodeKind::Literal, t.line, t.column);
    node->literal = t.text;
    node->type = std::move(type);
    return node;
  }

  NodePtr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::IntLit: take(); return literal(t, Type::int_());
      case Tok::LongLit: take(); return literal(t, Type::long_());
      case Tok::FloatLit: take(); return literal(t, Type::float_());
      case Tok::DoubleLit: take(); return literal(t, Type::double_());
      case Tok::StringLit: take(); return literal(t, Type::string_());
      case Tok::Punct:
        if (t.text == "(") {
          take();
          auto e = expression();
          expect_punct(")");
          return e;
        }
        if (t.text == "[") {
          take();
          auto node = make_node(NodeKind::ArrayLiteral, t.line, t.column);
          if (!is_punct("]")) {
            for (;;) {
              node->add(expression());
              if (is_punct(",")) {
                take();
                continue;
              }
              break;
            }
          }
          expect_punct("]");
          return node;
        }
        fail_here("expected expression");
      case Tok::Ident: {
        if (t.text == "true" || t.text == "false") {
          take();
          return literal(t, Type::bool_());
        }
        if (t.text == "null") {
          take();
          return literal(t, Type::null());
        }
        if (is_keyword(t.text)) fail_here("expected expression");
        take();
        if (is_punct("(")) {
          take();
          auto call = make_node(NodeKind::Call, t.line, t.column);
          call->name = t.text;
          if (!is_punct(")")) {
            for (;;) {
              call->add(expression());
              if (is_punct(",")) {
                take();
                continue;
              }
              break;
            }
          }
          expect_punct(")");
          return call;
        }
        auto var = make_node(NodeKind::VarAccess, t.line, t.column);
        var->name = t.text;
        return var;
      }
      case Tok::End:
        fail_here("unexpected end of input");
    }
    fail_here("expected expression");
  }

  std::vector<Token> toks_;
  std::string file_;
  std::size_t pos_ = 0;
};

}  // namespace

Ast parse(std::string_view source_text, const std::string& file, bool is_test) {
  Parser p(Lexer(source_text, file).run(), file);
  return Ast(p.program(), file, is_test);
}

NodePtr parse_statement(std::string_view source_text) {
  const std::string file = "<statement>";
  Parser p(Lexer(source_text, file).run(), file);
  return p.lone_statement();
}

NodePtr parse_expression(std::string_view source_text) {
  const std::string file = "<expression>";
  Parser p(Lexer(source_text, file).run(), file);
  return p.lone_expression();
}

}  // namespace hydra::minilang

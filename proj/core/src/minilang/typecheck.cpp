#include <map>
#include <set>

#include "hydra/minilang/program.hpp"

namespace hydra::minilang {

namespace {

class Checker {
 public:
  explicit Checker(Program& program) : program_(program) {}

  std::vector<TypeError> run() {
    collect_declarations();
    if (!errors_.empty()) return errors_;
    for (auto& f : program_.files()) {
      file_ = f.source_file;
      for (auto& decl : f.root->children) {
        if (decl->kind == NodeKind::Function) check_function(*decl, f.is_test);
      }
    }
    return errors_;
  }

 private:
  void error(const Node& n, std::string message) {
    errors_.push_back({file_, n.line, n.column, std::move(message)});
  }

  bool type_exists(const Type& t) const {
    return t.tag != TypeTag::Record || program_.records().contains(t.record);
  }

  void collect_declarations() {
    RecordTable records;
    std::map<std::string, const Node*, std::less<>> functions;
    std::set<std::string> names;
    for (auto& f : program_.files()) {
      file_ = f.source_file;
      for (auto& decl : f.root->children) {
        if (is_builtin_function(decl->name)) {
          error(*decl, "'" + decl->name + "' is a builtin");
          continue;
        }
        if (!names.insert(decl->name).second) {
          error(*decl, "duplicate declaration of '" + decl->name + "'");
          continue;
        }
        if (decl->kind == NodeKind::Record) {
          RecordInfo info{decl->name, std::nullopt, {}};
          if (!decl->extends.empty()) info.extends = decl->extends;
          for (auto& field : decl->children) info.own_fields.push_back({field->name, field->declared});
          records.add(std::move(info));
        } else {
          functions[decl->name] = decl.get();
        }
      }
    }
    program_.records() = std::move(records);
    program_.set_function_table(std::move(functions));

    for (auto& f : program_.files()) {
      file_ = f.source_file;
      for (auto& decl : f.root->children) {
        if (decl->kind == NodeKind::Record) check_record(*decl);
        if (decl->kind == NodeKind::Function) check_signature(*decl, f.is_test);
      }
    }
  }

  void check_record(const Node& rec) {
    const auto& records = program_.records();
    if (!rec.extends.empty()) {
      if (!records.contains(rec.extends)) {
        error(rec, "unknown supertype '" + rec.extends + "'");
      } else {
        std::set<std::string> seen{rec.name};
        for (const RecordInfo* r = records.find(rec.extends); r != nullptr;
             r = r->extends ? records.find(*r->extends) : nullptr) {
          if (!seen.insert(r->name).second) {
            error(rec, "cyclic inheritance through '" + r->name + "'");
            break;
          }
        }
      }
    }
    std::set<std::string> fields;
    for (const auto& fd : records.all_fields(rec.name)) {
      if (!fields.insert(fd.name).second) error(rec, "duplicate field '" + fd.name + "'");
    }
    for (const auto& field : rec.children) {
      if (!type_exists(field->declared)) {
        error(*field, "unknown type '" + field->declared.to_string() + "'");
      }
    }
  }

  void check_signature(const Node& fn, bool in_test_file) {
    std::set<std::string> params;
    for (const auto& c : fn.children) {
      if (c->kind != NodeKind::Param) continue;
      if (!params.insert(c->name).second) error(*c, "duplicate parameter '" + c->name + "'");
      if (!type_exists(c->declared)) error(*c, "unknown type '" + c->declared.to_string() + "'");
    }
    if (!type_exists(fn.declared)) error(fn, "unknown type '" + fn.declared.to_string() + "'");
    if (in_test_file && fn.name.rfind("test_", 0) == 0) {
      if (!params.empty() || fn.declared.tag != TypeTag::Void) {
        error(fn, "test '" + fn.name + "' must take no parameters and return nothing");
      }
    }
  }

  // scopes

  const Type* lookup(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) return &f->second;
    }
    return nullptr;
  }

  void declare(const Node& at, const std::string& name, const Type& type) {
    if (lookup(name) != nullptr) {
      error(at, "redeclaration of '" + name + "'");
      return;
    }
    scopes_.back()[name] = type;
  }

  void check_function(Node& fn, bool /*in_test_file*/) {
    scopes_.clear();
    scopes_.emplace_back();
    return_type_ = fn.declared;
    for (auto& c : fn.children) {
      if (c->kind == NodeKind::Param) scopes_.back()[c->name] = c->declared;
    }
    check_block(*fn.children.back());
  }

  void check_block(Node& block) {
    scopes_.emplace_back();
    for (auto& s : block.children) check_statement(*s);
    scopes_.pop_back();
  }

  void expect_assignable(const Node& at, const Type& from, const Type& to, const char* what) {
    if (from.is_none() || to.is_none()) return;  // already reported
    if (!is_assignable(from, to, &program_.records())) {
      error(at, std::string("incompatible ") + what + ": " + from.to_string() + " to " +
                    to.to_string());
    }
  }

  void check_statement(Node& s) {
    switch (s.kind) {
      case NodeKind::VarDecl: {
        if (!type_exists(s.declared)) error(s, "unknown type '" + s.declared.to_string() + "'");
        if (s.arity() == 1) {
          Type t = check_expr(*s.child(0));
          expect_assignable(*s.child(0), t, s.declared, "initializer");
        }
        declare(s, s.name, s.declared);
        break;
      }
      case NodeKind::Assign: {
        Node& target = *s.child(0);
        Type tt = check_expr(target);
        Type vt = check_expr(*s.child(1));
        expect_assignable(*s.child(1), vt, tt, "assignment");
        break;
      }
      case NodeKind::If:
      case NodeKind::While: {
        Type c = check_expr(*s.child(0));
        if (!c.is_none() && c.tag != TypeTag::Bool) error(*s.child(0), "condition must be bool");
        for (std::size_t i = 1; i < s.arity(); ++i) check_block(*s.child(i));
        break;
      }
      case NodeKind::Return: {
        if (s.arity() == 0) {
          if (return_type_.tag != TypeTag::Void) error(s, "missing return value");
        } else {
          Type t = check_expr(*s.child(0));
          if (return_type_.tag == TypeTag::Void) {
            error(s, "void function returns a value");
          } else {
            expect_assignable(*s.child(0), t, return_type_, "return value");
          }
        }
        break;
      }
      case NodeKind::Assert: {
        Type c = check_expr(*s.child(0));
        if (!c.is_none() && c.tag != TypeTag::Bool) error(*s.child(0), "assert needs bool");
        break;
      }
      case NodeKind::ExprStmt:
        check_expr(*s.child(0));
        break;
      default:
        error(s, "unexpected node in block");
    }
  }

  Type check_expr(Node& e) {
    Type t = infer(e);
    e.type = t;
    return t;
  }

  Type infer(Node& e) {
    const auto& records = program_.records();
    switch (e.kind) {
      case NodeKind::Literal:
        return e.type;
      case NodeKind::VarAccess: {
        const Type* t = lookup(e.name);
        if (t == nullptr) {
          error(e, "undeclared identifier '" + e.name + "'");
          return Type::none();
        }
        return *t;
      }
      case NodeKind::FieldAccess: {
        Type base = check_expr(*e.child(0));
        if (base.is_none()) return base;
        if (base.tag != TypeTag::Record) {
          error(e, "field access on non-record " + base.to_string());
          return Type::none();
        }
        for (const auto& f : records.all_fields(base.record)) {
          if (f.name == e.name) return f.type;
        }
        error(e, "record " + base.record + " has no field '" + e.name + "'");
        return Type::none();
      }
      case NodeKind::ArrayAccess: {
        Type base = check_expr(*e.child(0));
        Type idx = check_expr(*e.child(1));
        if (!idx.is_none() && !idx.is_integral()) error(*e.child(1), "array index must be integral");
        if (base.is_none()) return base;
        if (base.tag != TypeTag::Array) {
          error(e, "indexing non-array " + base.to_string());
          return Type::none();
        }
        return Type{base.element};
      }
      case NodeKind::ArrayLiteral: {
        if (e.arity() == 0) {
          error(e, "empty array literal");
          return Type::none();
        }
        Type elem;
        for (auto& c : e.children) {
          Type t = check_expr(*c);
          if (t.is_none()) return t;
          if (!is_primitive_tag(t.tag)) {
            error(*c, "array elements must be primitive");
            return Type::none();
          }
          if (elem.is_none()) {
            elem = t;
          } else if (is_assignable(t, elem, nullptr)) {
          } else if (is_assignable(elem, t, nullptr)) {
            elem = t;
          } else {
            error(*c, "mixed array element types");
            return Type::none();
          }
        }
        return Type::array_of(elem.tag);
      }
      case NodeKind::Call:
        return infer_call(e);
      case NodeKind::UnaryExpr: {
        Type t = check_expr(*e.child(0));
        if (t.is_none()) return t;
        if (e.op == "-") {
          if (!t.is_numeric()) {
            error(e, "unary '-' needs a number");
            return Type::none();
          }
          return t;
        }
        if (t.tag != TypeTag::Bool) {
          error(e, "'!' needs bool");
          return Type::none();
        }
        return t;
      }
      case NodeKind::BinaryExpr:
        return infer_binary(e);
      default:
        error(e, "not an expression");
        return Type::none();
    }
  }

  Type infer_call(Node& e) {
    std::vector<Type> args;
    for (auto& c : e.children) args.push_back(check_expr(*c));
    for (const auto& a : args) {
      if (a.is_none()) return Type::none();
    }
    if (e.name == "len") {
      if (args.size() != 1 ||
          (args[0].tag != TypeTag::Array && args[0].tag != TypeTag::String)) {
        error(e, "len expects one array or string");
        return Type::none();
      }
      return Type::int_();
    }
    const auto& records = program_.records();
    if (records.contains(e.name)) {
      auto fields = records.all_fields(e.name);
      if (fields.size() != args.size()) {
        error(e, "constructor " + e.name + " expects " + std::to_string(fields.size()) +
                     " arguments");
        return Type::none();
      }
      for (std::size_t i = 0; i < args.size(); ++i) {
        expect_assignable(*e.child(i), args[i], fields[i].type, "argument");
      }
      return Type::record_named(e.name);
    }
    const Node* fn = program_.function(e.name);
    if (fn == nullptr) {
      error(e, "undeclared function '" + e.name + "'");
      return Type::none();
    }
    std::vector<Type> params;
    for (const auto& c : fn->children) {
      if (c->kind == NodeKind::Param) params.push_back(c->declared);
    }
    if (params.size() != args.size()) {
      error(e, "arity mismatch calling '" + e.name + "': expected " +
                   std::to_string(params.size()) + ", got " + std::to_string(args.size()));
      return Type::none();
    }
    for (std::size_t i = 0; i < args.size(); ++i) {
      expect_assignable(*e.child(i), args[i], params[i], "argument");
    }
    return fn->declared;
  }

  Type infer_binary(Node& e) {
    Type l = check_expr(*e.child(0));
    Type r = check_expr(*e.child(1));
    if (l.is_none() || r.is_none()) return Type::none();
    const std::string& op = e.op;
    auto wider = [](const Type& a, const Type& b) {
      return numeric_rank(a.tag) >= numeric_rank(b.tag) ? a : b;
    };
    if (op == "&&" || op == "||") {
      if (l.tag != TypeTag::Bool || r.tag != TypeTag::Bool) {
        error(e, "'" + op + "' needs bool operands");
        return Type::none();
      }
      return Type::bool_();
    }
    if (op == "==" || op == "!=") {
      bool ok = (l.is_numeric() && r.is_numeric()) ||
                (l.is_record_like() && r.is_record_like() &&
                 types_compatible(l, r, &program_.records())) ||
                (l == r && l.tag != TypeTag::Void && l.tag != TypeTag::Array);
      if (!ok) {
        error(e, "cannot compare " + l.to_string() + " with " + r.to_string());
        return Type::none();
      }
      return Type::bool_();
    }
    if (op == "<" || op == "<=" || op == ">" || op == ">=") {
      if (!l.is_numeric() || !r.is_numeric()) {
        error(e, "'" + op + "' needs numbers");
        return Type::none();
      }
      return Type::bool_();
    }
    if (op == "+" && l.tag == TypeTag::String && r.tag == TypeTag::String) return l;
    if (!l.is_numeric() || !r.is_numeric()) {
      error(e, "'" + op + "' needs numbers");
      return Type::none();
    }
    if (op == "%" && (!l.is_integral() || !r.is_integral())) {
      error(e, "'%' needs integral operands");
      return Type::none();
    }
    return wider(l, r);
  }

  Program& program_;
  std::vector<TypeError> errors_;
  std::string file_;
  std::vector<std::map<std::string, Type>> scopes_;
  Type return_type_;
};

}  // namespace

std::vector<TypeError> type_check(Program& program) { return Checker(program).run(); }

}  // namespace hydra::minilang

#include "hydra/minilang/program.hpp"

#include <stdexcept>

#include "hydra/minilang/parser.hpp"

namespace hydra::minilang {

std::string TypeError::to_string() const {
  return file + ":" + std::to_string(line) + ":" + std::to_string(column) +
         ": type error: " + message;
}

Program Program::parse_sources(const std::vector<SourceFile>& sources) {
  Program p;
  p.files_.reserve(sources.size());
  for (const auto& s : sources) p.files_.push_back(parse(s.text, s.path, s.is_test));
  return p;
}

Program Program::clone() const {
  Program p;
  p.files_.reserve(files_.size());
  for (const auto& f : files_) p.files_.push_back(f.clone());
  for (auto& f : p.files_) f.renumber();
  type_check(p);
  return p;
}

const Ast* Program::file(std::string_view path) const {
  for (const auto& f : files_) {
    if (f.source_file == path) return &f;
  }
  return nullptr;
}

Ast* Program::file(std::string_view path) {
  for (auto& f : files_) {
    if (f.source_file == path) return &f;
  }
  return nullptr;
}

const Node* Program::function(std::string_view name) const {
  auto it = functions_.find(name);
  return it == functions_.end() ? nullptr : it->second;
}

const Node* Program::statement(const StmtRef& ref) const {
  const Ast* f = file(ref.file);
  if (f == nullptr) return nullptr;
  const Node* fn = f->function(ref.function);
  if (fn == nullptr) return nullptr;
  for (const Node* s : function_statements(*fn)) {
    if (s->stmt_index == ref.index) return s;
  }
  return nullptr;
}

const std::string& Program::file_of(const Node& node) const {
  const Node* root = &node;
  while (root->parent != nullptr) root = root->parent;
  for (const auto& f : files_) {
    if (f.root.get() == root) return f.source_file;
  }
  static const std::string unknown;
  return unknown;
}

StmtRef Program::ref_of(const Node& stmt) const { return StmtRef::of(stmt, file_of(stmt)); }

std::vector<const Node*> Program::project_statements() const {
  std::vector<const Node*> out;
  for (const auto& f : files_) {
    if (f.is_test) continue;
    for (const Node* fn : f.functions()) {
      for (const Node* s : function_statements(*fn)) out.push_back(s);
    }
  }
  return out;
}

std::vector<const Node*> Program::tests() const {
  std::vector<const Node*> out;
  for (const auto& f : files_) {
    if (!f.is_test) continue;
    for (const Node* fn : f.functions()) {
      if (fn->name.rfind("test_", 0) == 0) out.push_back(fn);
    }
  }
  return out;
}

std::vector<const Node*> Program::project_functions() const {
  std::vector<const Node*> out;
  for (const auto& f : files_) {
    if (f.is_test) continue;
    for (const Node* fn : f.functions()) out.push_back(fn);
  }
  return out;
}

bool Program::is_test_node(const Node& node) const {
  const std::string& path = file_of(node);
  const Ast* f = file(path);
  return f != nullptr && f->is_test;
}

Program load_program(const std::vector<SourceFile>& sources) {
  Program p = Program::parse_sources(sources);
  auto errors = type_check(p);
  if (!errors.empty()) throw std::runtime_error(errors.front().to_string());
  return p;
}

std::vector<VisibleVariable> visible_variables(const Node& stmt) {
  std::vector<std::vector<VisibleVariable>> layers;
  const Node* child = &stmt;
  for (const Node* n = stmt.parent; n != nullptr; child = n, n = n->parent) {
    std::vector<VisibleVariable> layer;
    if (n->kind == NodeKind::Block) {
      for (const auto& s : n->children) {
        if (s.get() == child) break;
        if (s->kind == NodeKind::VarDecl) layer.push_back({s->name, s->declared});
      }
    } else if (n->kind == NodeKind::Function) {
      for (const auto& c : n->children) {
        if (c->kind == NodeKind::Param) layer.push_back({c->name, c->declared});
      }
      layers.push_back(std::move(layer));
      break;
    }
    layers.push_back(std::move(layer));
  }
  std::vector<VisibleVariable> out;
  for (auto it = layers.rbegin(); it != layers.rend(); ++it) {
    for (auto& v : *it) out.push_back(std::move(v));
  }
  return out;
}

bool is_builtin_function(std::string_view name) { return name == "len"; }

}  // namespace hydra::minilang

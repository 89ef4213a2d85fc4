#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "hydra/minilang/ast.hpp"
#include "hydra/minilang/types.hpp"

namespace hydra::minilang {

struct SourceFile {
  std::string path;  // relative path, used in statement ids
  std::string text;
  bool is_test = false;
};

struct TypeError {
  std::string file;
  int line = 0;
  int column = 0;
  std::string message;

  std::string to_string() const;
};

/// A variable visible at some program point.
struct VisibleVariable {
  std::string name;
  Type type;
};

/// All files of a project plus its test files, with the program-wide symbol
/// tables built by type_check().
class Program {
 public:
  Program() = default;
  Program(Program&&) noexcept = default;
  Program& operator=(Program&&) noexcept = default;
  Program(const Program&) = delete;
  Program& operator=(const Program&) = delete;

  /// Parses every file; throws SyntaxError on the first malformed one.
  static Program parse_sources(const std::vector<SourceFile>& sources);

  /// Deep copy; the copy is re-type-checked.
  Program clone() const;

  std::vector<Ast>& files() { return files_; }
  const std::vector<Ast>& files() const { return files_; }
  const Ast* file(std::string_view path) const;
  Ast* file(std::string_view path);

  const RecordTable& records() const { return records_; }
  RecordTable& records() { return records_; }

  const Node* function(std::string_view name) const;
  const std::map<std::string, const Node*, std::less<>>& function_table() const {
    return functions_;
  }
  void set_function_table(std::map<std::string, const Node*, std::less<>> table) {
    functions_ = std::move(table);
  }

  /// Statement lookup by stable reference; null when absent.
  const Node* statement(const StmtRef& ref) const;
  StmtRef ref_of(const Node& stmt) const;
  const std::string& file_of(const Node& node) const;

  /// Statements of all non-test files, in file then preorder order.
  std::vector<const Node*> project_statements() const;

  /// `test_*` functions of the test files, in file then declaration order.
  std::vector<const Node*> tests() const;

  /// Functions declared in non-test files.
  std::vector<const Node*> project_functions() const;

  bool is_test_node(const Node& node) const;

 private:
  std::vector<Ast> files_;
  RecordTable records_;
  std::map<std::string, const Node*, std::less<>> functions_;
};

/// Type-checks the whole program, annotating every expression with its type.
/// Returns an empty list on success.
std::vector<TypeError> type_check(Program& program);

/// Parses and type-checks; throws SyntaxError, or std::runtime_error carrying
/// the first type error.
Program load_program(const std::vector<SourceFile>& sources);

/// Variables in scope just before `stmt` executes: parameters plus
/// declarations of enclosing blocks that precede it, outermost first.
std::vector<VisibleVariable> visible_variables(const Node& stmt);

/// Whether `name` is a builtin function (currently only `len`).
bool is_builtin_function(std::string_view name);

}  // namespace hydra::minilang

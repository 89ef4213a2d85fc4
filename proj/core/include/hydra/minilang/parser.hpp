#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "hydra/minilang/ast.hpp"

namespace hydra::minilang {

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(std::string file, int line, int column, const std::string& message);

  const std::string& file() const { return file_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string file_;
  int line_;
  int column_;
};

/// Parses one `.mini` source file. Throws SyntaxError on the first violation.
Ast parse(std::string_view source_text, const std::string& file, bool is_test = false);

/// Parses a single statement, e.g. for tooling and tests.
NodePtr parse_statement(std::string_view source_text);

/// Parses a single expression.
NodePtr parse_expression(std::string_view source_text);

}  // namespace hydra::minilang

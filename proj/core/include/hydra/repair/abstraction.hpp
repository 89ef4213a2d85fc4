#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "hydra/sibling/sibling.hpp"

namespace hydra::repair {

using minilang::Node;
using minilang::NodePtr;
using minilang::StmtRef;

/// Raised when some members cannot be abstracted onto the reference's
/// abstract tree; `members()` holds their group indices.
class InconsistentMapping : public std::runtime_error {
 public:
  InconsistentMapping(std::vector<std::size_t> members, const std::string& what)
      : std::runtime_error(what), members_(std::move(members)) {}
  const std::vector<std::size_t>& members() const { return members_; }

 private:
  std::vector<std::size_t> members_;
};

struct MemberAbstraction {
  StmtRef stmt;
  const Node* node = nullptr;
  std::map<std::string, std::string> to_concrete;  // placeholder -> variable
  std::map<std::string, std::string> to_abstract;  // variable -> placeholder
};

/// The group's shared statement shape with variables renamed to
/// placeholders `$v1`, `$v2`, ... assigned in reference preorder.
struct AbstractHunk {
  NodePtr tree;  // statement-local shape, see shallow_clone
  std::vector<MemberAbstraction> members;  // group order, reference first
};

std::string placeholder(std::size_t k);
bool is_placeholder(std::string_view name);

/// Copy of the statement-local part of a statement: an If or While keeps its
/// condition only.
NodePtr shallow_clone(const Node& stmt);

/// Copy with every VarAccess whose name is a key of `names` renamed.
NodePtr rename_variables(const Node& tree, const std::map<std::string, std::string>& names);

/// Builds the abstract hunk. Throws InconsistentMapping naming every member
/// whose abstraction differs from the reference's.
AbstractHunk abstract_group(const sibling::SiblingGroup& group);

/// Violations of the hunk invariants; empty when well formed.
std::vector<std::string> hunk_violations(const AbstractHunk& hunk);

}  // namespace hydra::repair

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hydra/minilang/program.hpp"
#include "hydra/repair/abstraction.hpp"

namespace hydra::repair {

using minilang::Program;
using minilang::Type;

enum class SchemaId {
  InsertNullCheck,
  ChangeCall,
  InsertCallWrap,
  ChangeIfCondition,
  InsertIfGuard,
  ReplaceOperand,
};

inline constexpr SchemaId kAllSchemas[] = {
    SchemaId::InsertNullCheck,   SchemaId::ChangeCall,    SchemaId::InsertCallWrap,
    SchemaId::ChangeIfCondition, SchemaId::InsertIfGuard, SchemaId::ReplaceOperand,
};

std::string_view schema_name(SchemaId s);
double schema_prior(SchemaId s);

enum class EditKind {
  ReplaceExpr,  // replace the expression at `path` below the statement
  WrapGuard,    // wrap the statement in `if (expr) { ... }`
};

/// Child indices from a statement down to one of its expressions.
using NodePath = std::vector<std::size_t>;

struct AbstractEdit {
  EditKind kind = EditKind::ReplaceExpr;
  NodePath path;
  std::shared_ptr<const Node> expr;
};

struct ConcreteEdit {
  StmtRef stmt;
  EditKind kind = EditKind::ReplaceExpr;
  NodePath path;
  std::shared_ptr<const Node> expr;
};

/// A schema instantiated once on the abstract hunk and concretized at every
/// group member.
struct CandidatePatch {
  SchemaId schema = SchemaId::ReplaceOperand;
  AbstractEdit edit;
  std::vector<ConcreteEdit> edits;  // one per group member, group order
  std::vector<std::string> inserted;  // identifiers introduced, abstract names
  std::size_t sequence = 0;          // enumeration order
  double affinity = 1.0;
  double score = 0.0;
  int rank = 0;

  /// Abstract statement after the edit, e.g. `return best($v1, previous, $v4);`.
  std::string describe(const AbstractHunk& hunk) const;
};

struct VariableIngredient {
  std::string name;  // abstract name: a placeholder or a concrete shared name
  Type type;
};

struct FunctionIngredient {
  std::string name;
  std::vector<Type> params;
  Type result;
};

/// Identifiers usable at every member after mapping.
struct Ingredients {
  std::vector<VariableIngredient> variables;
  std::vector<FunctionIngredient> functions;
};

/// Variables visible at every member under the same abstract name and type,
/// and project functions other than the members' enclosing functions.
Ingredients collect_ingredients(const AbstractHunk& hunk, const Program& program);

struct EnumerationLimits {
  std::size_t max_per_schema = 20000;  // hard cap on raw enumeration
};

/// Every schema instantiation on the abstract hunk, in schema then
/// enumeration order, concretized per member. Affinity is filled in from
/// `context_identifiers` (concrete names around the reference).
std::vector<CandidatePatch> enumerate_candidates(const AbstractHunk& hunk,
                                                 const Ingredients& ingredients,
                                                 const Program& program,
                                                 const std::vector<std::string>& context_identifiers,
                                                 const treesim::SimilarityConfig& cfg,
                                                 const EnumerationLimits& limits = {});

struct RankWeights {
  double prior = 0.5;
  double affinity = 0.3;
  double flscore = 0.2;
};

/// Scores, sorts (score desc, then schema, then enumeration order) and
/// assigns 1-based ranks.
void rank_candidates(std::vector<CandidatePatch>& cands, double flscore, const RankWeights& w = {});

/// Keeps the first `per_schema` candidates of each schema, preserving order.
std::vector<CandidatePatch> top_per_schema(const std::vector<CandidatePatch>& ranked,
                                           std::size_t per_schema);

/// Identifiers (variables, callees, fields, declared names) of a context.
std::vector<std::string> context_identifiers(const context::ContextSet& ctx);

/// Abstract tree after applying the edit.
NodePtr apply_abstract(const AbstractHunk& hunk, const AbstractEdit& edit);

/// Violations of the patch invariants against its hunk.
std::vector<std::string> patch_violations(const CandidatePatch& p, const AbstractHunk& hunk);

}  // namespace hydra::repair

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hydra/minilang/ast.hpp"
#include "hydra/minilang/types.hpp"

namespace hydra::treesim {

using minilang::Node;

struct SimilarityConfig {
  double t1 = 0.8;                  // tree similarity threshold
  double name_sim_threshold = 0.5;  // strict lower bound on name similarity
  std::vector<std::string> accessor_prefixes{"get", "set", "is"};
  double t2 = 0.5;  // history similarity threshold
  /// Record hierarchy for subtype compatibility. Without one, record types
  /// are compatible only by name.
  const minilang::RecordTable* records = nullptr;
};

/// Expression kinds (value-producing calls included) are mutually compatible;
/// everything else only with itself.
bool kind_compatible(const Node& a, const Node& b);

/// Vacuously true unless both nodes are expressions.
bool type_compatible(const Node& a, const Node& b, const minilang::RecordTable* records = nullptr);

/// Lowercases and strips one accessor prefix. A prefix is only stripped at a
/// camel-case or underscore boundary, so `getLength` becomes `length` while
/// `issue` stays `issue`.
std::string normalize_name(std::string_view name, const std::vector<std::string>& prefixes);

std::size_t levenshtein(std::string_view a, std::string_view b);

/// 1 - lev/max over normalized names; 1 when both are empty, 0 when exactly
/// one is.
double name_similarity(std::string_view a, std::string_view b, const SimilarityConfig& cfg);
double name_similarity(const Node& a, const Node& b, const SimilarityConfig& cfg);

/// Identifier carried by a node for similarity purposes; empty for nameless
/// kinds such as BinaryExpr or Literal.
std::string_view similarity_name(const Node& n);

bool node_similar(const Node& a, const Node& b, const SimilarityConfig& cfg);

/// Null stands for a synthetic root; it is similar only to another null.
bool node_similar(const Node* a, const Node* b, const SimilarityConfig& cfg);

}  // namespace hydra::treesim

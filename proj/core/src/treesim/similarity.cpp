#include "hydra/treesim/similarity.hpp"

#include <algorithm>
#include <cctype>

namespace hydra::treesim {

using minilang::NodeKind;

namespace {

bool expression_family(const Node& n) {
  if (!n.is_expression()) return false;
  if (n.kind == NodeKind::Call && n.type.tag == minilang::TypeTag::Void) return false;
  return true;
}

}  // namespace

bool kind_compatible(const Node& a, const Node& b) {
  if (expression_family(a) && expression_family(b)) return true;
  return a.kind == b.kind;
}

bool type_compatible(const Node& a, const Node& b, const minilang::RecordTable* records) {
  if (!a.is_expression() || !b.is_expression()) return true;
  if (a.type.is_none() || b.type.is_none()) return a.type == b.type;
  return minilang::types_compatible(a.type, b.type, records);
}

std::string normalize_name(std::string_view name, const std::vector<std::string>& prefixes) {
  std::string_view rest = name;
  for (const auto& p : prefixes) {
    if (name.size() <= p.size() || name.substr(0, p.size()) != p) continue;
    const char next = name[p.size()];
    if (std::isupper(static_cast<unsigned char>(next)) != 0 || next == '_') {
      rest = name.substr(p.size());
      if (!rest.empty() && rest.front() == '_') rest.remove_prefix(1);
      break;
    }
  }
  std::string out(rest);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double name_similarity(std::string_view a, std::string_view b, const SimilarityConfig& cfg) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  const std::string na = normalize_name(a, cfg.accessor_prefixes);
  const std::string nb = normalize_name(b, cfg.accessor_prefixes);
  const std::size_t longest = std::max(na.size(), nb.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(levenshtein(na, nb)) / static_cast<double>(longest);
}

std::string_view similarity_name(const Node& n) {
  switch (n.kind) {
    case NodeKind::Record:
    case NodeKind::Field:
    case NodeKind::Function:
    case NodeKind::Param:
    case NodeKind::VarDecl:
    case NodeKind::Call:
    case NodeKind::VarAccess:
    case NodeKind::FieldAccess:
      return n.name;
    default:
      return {};
  }
}

double name_similarity(const Node& a, const Node& b, const SimilarityConfig& cfg) {
  return name_similarity(similarity_name(a), similarity_name(b), cfg);
}

bool node_similar(const Node& a, const Node& b, const SimilarityConfig& cfg) {
  return kind_compatible(a, b) && type_compatible(a, b, cfg.records) &&
         name_similarity(a, b, cfg) > cfg.name_sim_threshold;
}

bool node_similar(const Node* a, const Node* b, const SimilarityConfig& cfg) {
  if (a == nullptr || b == nullptr) return a == b;
  return node_similar(*a, *b, cfg);
}

}  // namespace hydra::treesim

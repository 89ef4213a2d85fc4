#include "hydra/treesim/zhang_shasha.hpp"

#include <algorithm>
#include <cassert>
#include <set>

namespace hydra::treesim {

using minilang::NodeKind;

std::vector<const Node*> TreeView::statement_children(const Node& n) {
  std::vector<const Node*> out;
  switch (n.kind) {
    case NodeKind::If:
    case NodeKind::While:
      out.push_back(n.child(0));
      break;
    case NodeKind::Block:
      break;
    case NodeKind::Function:
      for (const auto& c : n.children) {
        if (c->kind == NodeKind::Param) out.push_back(c.get());
      }
      break;
    default:
      for (const auto& c : n.children) out.push_back(c.get());
  }
  return out;
}

void TreeView::add_subtree(const Node* n, bool shallow, std::size_t parent_slot) {
  // Children first (postorder); parent slots are patched once known.
  const std::size_t first = nodes_.size();
  std::vector<std::size_t> child_roots;
  std::vector<const Node*> kids;
  if (n != nullptr) {
    if (shallow) {
      kids = statement_children(*n);
    } else {
      for (const auto& c : n->children) kids.push_back(c.get());
    }
  }
  for (const Node* c : kids) {
    add_subtree(c, shallow, npos);
    child_roots.push_back(nodes_.size() - 1);
  }
  const std::size_t self = nodes_.size();
  nodes_.push_back(n);
  lml_.push_back(kids.empty() ? self : first);
  parent_.push_back(parent_slot);
  for (std::size_t c : child_roots) parent_[c] = self;
  if (n != nullptr) index_[n] = self;
}

TreeView TreeView::full(const Node& root) {
  TreeView v;
  v.add_subtree(&root, false, npos);
  return v;
}

TreeView TreeView::statement(const Node& stmt) {
  TreeView v;
  v.add_subtree(&stmt, true, npos);
  return v;
}

TreeView TreeView::forest(const std::vector<const Node*>& stmts) {
  TreeView v;
  std::vector<std::size_t> roots;
  for (const Node* s : stmts) {
    v.add_subtree(s, true, npos);
    roots.push_back(v.nodes_.size() - 1);
  }
  const std::size_t self = v.nodes_.size();
  v.nodes_.push_back(nullptr);
  v.lml_.push_back(stmts.empty() ? self : 0);
  v.parent_.push_back(npos);
  for (std::size_t r : roots) v.parent_[r] = self;
  return v;
}

std::optional<std::size_t> TreeView::position(const Node* n) const {
  auto it = index_.find(n);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const Node* NodeMapping::right_of(const Node* left) const {
  for (const auto& [l, r] : pairs) {
    if (l == left) return r;
  }
  return nullptr;
}

const Node* NodeMapping::left_of(const Node* right) const {
  for (const auto& [l, r] : pairs) {
    if (r == right) return l;
  }
  return nullptr;
}

std::string_view edit_kind_name(EditOp::Kind kind) {
  switch (kind) {
    case EditOp::Kind::Match: return "match";
    case EditOp::Kind::Relabel: return "relabel";
    case EditOp::Kind::Delete: return "delete";
    case EditOp::Kind::Insert: return "insert";
  }
  return "?";
}

namespace {

// 1-based postorder indexing throughout, as in the original formulation;
// index 0 is the empty forest.
class ZhangShasha {
 public:
  ZhangShasha(const TreeView& a, const TreeView& b, const SimilarityConfig& cfg)
      : a_(a), b_(b), n_(a.size()), m_(b.size()), td_((n_ + 1) * (m_ + 1), 0),
        cost_((n_ + 1) * (m_ + 1), 0) {
    for (std::size_t i = 1; i <= n_; ++i) {
      for (std::size_t j = 1; j <= m_; ++j) {
        cost_[at(i, j)] = node_similar(a.node(i - 1), b.node(j - 1), cfg) ? 0 : 1;
      }
    }
    for (std::size_t i : keyroots(a_)) {
      for (std::size_t j : keyroots(b_)) forest(i, j, nullptr);
    }
  }

  int distance() const { return n_ == 0 ? static_cast<int>(m_) : m_ == 0 ? static_cast<int>(n_) : td_[at(n_, m_)]; }

  std::vector<EditOp> script() {
    std::vector<EditOp> out;
    std::vector<bool> left_used(n_ + 1, false);
    std::vector<bool> right_used(m_ + 1, false);
    std::vector<std::pair<std::size_t, std::size_t>> stack;
    if (n_ > 0 && m_ > 0) stack.emplace_back(n_, m_);
    std::vector<int> fd;
    while (!stack.empty()) {
      auto [i, j] = stack.back();
      stack.pop_back();
      forest(i, j, &fd);
      const std::size_t li = lml(a_, i);
      const std::size_t lj = lml(b_, j);
      const std::size_t w = j - lj + 2;
      auto f = [&](std::size_t x, std::size_t y) {
        return fd[(x + 1 - li) * w + (y + 1 - lj)];
      };
      std::size_t x = i;
      std::size_t y = j;
      while (x >= li || y >= lj) {
        const bool hx = x >= li;
        const bool hy = y >= lj;
        const int here = f(x, y);
        if (hx && hy) {
          if (lml(a_, x) == li && lml(b_, y) == lj) {
            const int c = cost_[at(x, y)];
            if (here == f(x - 1, y - 1) + c) {
              out.push_back({c == 0 ? EditOp::Kind::Match : EditOp::Kind::Relabel,
                             a_.node(x - 1), b_.node(y - 1)});
              left_used[x] = right_used[y] = true;
              --x;
              --y;
              continue;
            }
          } else if (here == f(lml(a_, x) - 1, lml(b_, y) - 1) + td_[at(x, y)]) {
            stack.emplace_back(x, y);
            x = lml(a_, x) - 1;
            y = lml(b_, y) - 1;
            continue;
          }
        }
        if (hx && here == f(x - 1, y) + 1) {
          --x;
          continue;
        }
        if (hy && here == f(x, y - 1) + 1) {
          --y;
          continue;
        }
        assert(false && "edit script backtrack failed");
        break;
      }
    }
    for (std::size_t x = 1; x <= n_; ++x) {
      if (!left_used[x]) out.push_back({EditOp::Kind::Delete, a_.node(x - 1), nullptr});
    }
    for (std::size_t y = 1; y <= m_; ++y) {
      if (!right_used[y]) out.push_back({EditOp::Kind::Insert, nullptr, b_.node(y - 1)});
    }
    return out;
  }

 private:
  std::size_t at(std::size_t i, std::size_t j) const { return i * (m_ + 1) + j; }

  static std::size_t lml(const TreeView& v, std::size_t i) { return v.leftmost(i - 1) + 1; }

  static std::vector<std::size_t> keyroots(const TreeView& v) {
    // Highest node for each distinct leftmost leaf.
    std::vector<std::size_t> best(v.size() + 1, 0);
    for (std::size_t i = 1; i <= v.size(); ++i) best[lml(v, i)] = i;
    std::vector<std::size_t> out;
    for (std::size_t l = 1; l <= v.size(); ++l) {
      if (best[l] != 0) out.push_back(best[l]);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  // Forest distances for the subtrees rooted at i and j; fills td_ for every
  // pair of subtrees sharing their leftmost leaves. When `out` is given the
  // whole table is kept, indexed from (li - 1, lj - 1).
  void forest(std::size_t i, std::size_t j, std::vector<int>* out) {
    const std::size_t li = lml(a_, i);
    const std::size_t lj = lml(b_, j);
    const std::size_t h = i - li + 2;
    const std::size_t w = j - lj + 2;
    std::vector<int> local;
    std::vector<int>& fd = out != nullptr ? *out : local;
    fd.assign(h * w, 0);
    auto idx = [&](std::size_t x, std::size_t y) { return (x + 1 - li) * w + (y + 1 - lj); };
    for (std::size_t x = li; x <= i; ++x) fd[idx(x, lj - 1)] = fd[idx(x - 1, lj - 1)] + 1;
    for (std::size_t y = lj; y <= j; ++y) fd[idx(li - 1, y)] = fd[idx(li - 1, y - 1)] + 1;
    for (std::size_t x = li; x <= i; ++x) {
      for (std::size_t y = lj; y <= j; ++y) {
        const int del = fd[idx(x - 1, y)] + 1;
        const int ins = fd[idx(x, y - 1)] + 1;
        if (lml(a_, x) == li && lml(b_, y) == lj) {
          const int rel = fd[idx(x - 1, y - 1)] + cost_[at(x, y)];
          fd[idx(x, y)] = std::min({del, ins, rel});
          td_[at(x, y)] = fd[idx(x, y)];
        } else {
          const int sub = fd[idx(lml(a_, x) - 1, lml(b_, y) - 1)] + td_[at(x, y)];
          fd[idx(x, y)] = std::min({del, ins, sub});
        }
      }
    }
  }

  const TreeView& a_;
  const TreeView& b_;
  std::size_t n_;
  std::size_t m_;
  std::vector<int> td_;
  std::vector<int> cost_;
};

NodeMapping zero_cost_pairs(const std::vector<EditOp>& script) {
  NodeMapping m;
  for (const auto& op : script) {
    if (op.kind == EditOp::Kind::Match && op.left != nullptr && op.right != nullptr) {
      m.pairs.emplace_back(op.left, op.right);
    }
  }
  std::reverse(m.pairs.begin(), m.pairs.end());
  return m;
}

}  // namespace

int tree_distance(const TreeView& a, const TreeView& b, const SimilarityConfig& cfg) {
  return ZhangShasha(a, b, cfg).distance();
}

std::vector<EditOp> edit_script(const TreeView& a, const TreeView& b, const SimilarityConfig& cfg,
                                int* distance) {
  ZhangShasha zs(a, b, cfg);
  if (distance != nullptr) *distance = zs.distance();
  return zs.script();
}

NodeMapping optimal_mapping(const TreeView& a, const TreeView& b, const SimilarityConfig& cfg) {
  return zero_cost_pairs(edit_script(a, b, cfg));
}

TreeMatch tree_similarity(const TreeView& a, const TreeView& b, const SimilarityConfig& cfg) {
  ZhangShasha zs(a, b, cfg);
  TreeMatch out;
  out.distance = zs.distance();
  const std::size_t longest = std::max(a.size(), b.size());
  // Shape mismatches can push the distance past the larger size.
  out.zeta = longest == 0 ? 1.0
                          : std::max(0.0, 1.0 - static_cast<double>(out.distance) / static_cast<double>(longest));
  if (out.zeta > cfg.t1) out.mapping = zero_cost_pairs(zs.script());
  return out;
}

TreeMatch statement_similarity(const Node& a, const Node& b, const SimilarityConfig& cfg) {
  return tree_similarity(TreeView::statement(a), TreeView::statement(b), cfg);
}

bool same_view(const TreeView& a, const TreeView& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Node* x = a.node(i);
    const Node* y = b.node(i);
    if (x == nullptr || y == nullptr) {
      if (x != y) return false;
      continue;
    }
    if (a.leftmost(i) != b.leftmost(i)) return false;
    if (x->kind != y->kind || x->name != y->name || x->op != y->op || x->literal != y->literal ||
        x->declared != y->declared) {
      return false;
    }
  }
  return true;
}

std::vector<std::string> mapping_violations(const NodeMapping& m, const TreeView& a,
                                            const TreeView& b, const SimilarityConfig& cfg) {
  std::vector<std::string> out;
  std::set<const Node*> seen_left;
  std::set<const Node*> seen_right;
  std::vector<std::pair<std::size_t, std::size_t>> pos;
  for (const auto& [l, r] : m.pairs) {
    if (!seen_left.insert(l).second) out.push_back("left node mapped twice");
    if (!seen_right.insert(r).second) out.push_back("right node mapped twice");
    if (l == nullptr || r == nullptr) {
      out.push_back("synthetic root in mapping");
      continue;
    }
    if (!kind_compatible(*l, *r)) out.push_back("kind-incompatible pair");
    if (!type_compatible(*l, *r, cfg.records)) out.push_back("type-incompatible pair");
    auto pl = a.position(l);
    auto pr = b.position(r);
    if (!pl || !pr) {
      out.push_back("pair outside the compared trees");
      continue;
    }
    pos.emplace_back(*pl, *pr);
  }
  for (std::size_t p = 0; p < pos.size(); ++p) {
    for (std::size_t q = 0; q < pos.size(); ++q) {
      if (p == q) continue;
      const auto [x1, y1] = pos[p];
      const auto [x2, y2] = pos[q];
      if (a.is_ancestor(x1, x2) != b.is_ancestor(y1, y2)) {
        out.push_back("ancestor order not preserved");
      }
      const bool left_a = x1 < x2 && !a.is_ancestor(x2, x1);
      const bool left_b = y1 < y2 && !b.is_ancestor(y2, y1);
      if (!a.is_ancestor(x1, x2) && !a.is_ancestor(x2, x1) && left_a != left_b) {
        out.push_back("sibling order not preserved");
      }
    }
  }
  return out;
}

}  // namespace hydra::treesim

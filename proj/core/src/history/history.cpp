#include "hydra/history/history.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hydra/minilang/parser.hpp"
#include "hydra/treesim/zhang_shasha.hpp"

namespace hydra::history {

namespace fs = std::filesystem;
using minilang::SourceFile;

std::string_view op_name(OpKind op) {
  switch (op) {
    case OpKind::Insert: return "insert";
    case OpKind::Delete: return "delete";
    case OpKind::Modify: return "modify";
  }
  return "?";
}

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<SourceFile> read_snapshot(const fs::path& root) {
  std::vector<SourceFile> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file() || e.path().extension() != ".mini") continue;
    files.push_back({fs::relative(e.path(), root).generic_string(), read_file(e.path()), false});
  }
  std::sort(files.begin(), files.end(),
            [](const SourceFile& a, const SourceFile& b) { return a.path < b.path; });
  return files;
}

}  // namespace

HistoryBundle load_history(const fs::path& dir) {
  const fs::path manifest = dir / "history.json";
  if (!fs::is_regular_file(manifest)) {
    throw BundleFormatError("missing manifest " + manifest.string());
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(manifest));
  } catch (const nlohmann::json::exception& e) {
    throw BundleFormatError("malformed manifest: " + std::string(e.what()));
  }
  if (!doc.is_object() || !doc.contains("commits") || !doc["commits"].is_array()) {
    throw BundleFormatError("manifest needs a \"commits\" array");
  }
  HistoryBundle bundle;
  std::set<std::string> ids;
  for (const auto& c : doc["commits"]) {
    if (!c.is_object() || !c.contains("id") || !c["id"].is_string() || !c.contains("path") ||
        !c["path"].is_string()) {
      throw BundleFormatError("each commit needs string \"id\" and \"path\"");
    }
    Commit commit;
    commit.id = c["id"].get<std::string>();
    if (!ids.insert(commit.id).second) throw BundleFormatError("duplicate commit id " + commit.id);
    if (c.contains("message") && c["message"].is_string()) commit.message = c["message"].get<std::string>();
    const fs::path root = dir / c["path"].get<std::string>();
    if (!fs::is_directory(root)) {
      throw BundleFormatError("commit " + commit.id + ": missing directory " + root.string());
    }
    const auto sources = read_snapshot(root);
    for (const auto& s : sources) {
      try {
        (void)minilang::parse(s.text, s.path);
      } catch (const minilang::SyntaxError& e) {
        throw SnapshotParseError(commit.id, s.path, e.what());
      }
    }
    commit.snapshot = Program::parse_sources(sources);
    const auto errors = minilang::type_check(commit.snapshot);
    if (!errors.empty()) {
      throw SnapshotParseError(commit.id, errors.front().file, errors.front().to_string());
    }
    bundle.commits.push_back(std::move(commit));
  }
  return bundle;
}

namespace {

struct Candidate {
  double zeta;
  bool identical;
  std::size_t i;
  std::size_t j;
};

}  // namespace

CommitDiff diff_commit(const Program& prev, const Program& next,
                       const treesim::SimilarityConfig& cfg) {
  CommitDiff diff;
  std::map<std::string, const Node*> prev_fns;
  for (const Node* fn : prev.project_functions()) prev_fns[fn->name] = fn;
  std::set<std::string> seen;

  for (const Node* nfn : next.project_functions()) {
    seen.insert(nfn->name);
    const auto after = minilang::function_statements(*nfn);
    auto it = prev_fns.find(nfn->name);
    if (it == prev_fns.end()) {
      for (const Node* s : after) diff.ops.push_back({OpKind::Insert, -1, "", next.ref_of(*s)});
      continue;
    }
    const auto before = minilang::function_statements(*it->second);
    std::vector<treesim::TreeView> bv;
    std::vector<treesim::TreeView> av;
    for (const Node* s : before) bv.push_back(treesim::TreeView::statement(*s));
    for (const Node* s : after) av.push_back(treesim::TreeView::statement(*s));

    std::vector<Candidate> cands;
    for (std::size_t i = 0; i < before.size(); ++i) {
      for (std::size_t j = 0; j < after.size(); ++j) {
        const auto m = treesim::tree_similarity(bv[i], av[j], cfg);
        if (m.zeta <= cfg.t1) continue;
        cands.push_back({m.zeta, treesim::same_view(bv[i], av[j]), i, j});
      }
    }
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
      if (a.zeta != b.zeta) return a.zeta > b.zeta;
      if (a.identical != b.identical) return a.identical;
      const auto da = a.i > a.j ? a.i - a.j : a.j - a.i;
      const auto db = b.i > b.j ? b.i - b.j : b.j - b.i;
      if (da != db) return da < db;
      if (a.i != b.i) return a.i < b.i;
      return a.j < b.j;
    });
    std::vector<bool> used_b(before.size(), false);
    std::vector<bool> used_a(after.size(), false);
    for (const auto& c : cands) {
      if (used_b[c.i] || used_a[c.j]) continue;
      used_b[c.i] = used_a[c.j] = true;
      const StmtRef to = next.ref_of(*after[c.j]);
      diff.matches[to] = prev.ref_of(*before[c.i]);
      if (!c.identical) diff.ops.push_back({OpKind::Modify, -1, "", to});
    }
    for (std::size_t i = 0; i < before.size(); ++i) {
      if (!used_b[i]) diff.ops.push_back({OpKind::Delete, -1, "", prev.ref_of(*before[i])});
    }
    for (std::size_t j = 0; j < after.size(); ++j) {
      if (!used_a[j]) diff.ops.push_back({OpKind::Insert, -1, "", next.ref_of(*after[j])});
    }
  }
  for (const auto& [name, fn] : prev_fns) {
    if (seen.count(name) != 0) continue;
    for (const Node* s : minilang::function_statements(*fn)) {
      diff.ops.push_back({OpKind::Delete, -1, "", prev.ref_of(*s)});
    }
  }
  return diff;
}

const EditHistory& Lineage::history_of(const StmtRef& stmt) const {
  static const EditHistory empty;
  auto it = final_.find(stmt);
  if (it == final_.end()) return empty;
  auto h = histories_.find(it->second);
  return h == histories_.end() ? empty : h->second;
}

std::vector<StmtRef> Lineage::edited_in(const std::string& commit_id) const {
  std::vector<StmtRef> out;
  for (const auto& [stmt, id] : final_) {
    auto h = histories_.find(id);
    if (h == histories_.end()) continue;
    for (const auto& op : h->second.ops) {
      if (op.commit_id == commit_id) {
        out.push_back(stmt);
        break;
      }
    }
  }
  return out;
}

Lineage track_lineage(const HistoryBundle& bundle, const treesim::SimilarityConfig& cfg) {
  Lineage out;
  if (bundle.empty()) return out;
  int next_id = 0;
  std::map<StmtRef, int> current;
  for (const Node* s : bundle.commits.front().snapshot.project_statements()) {
    current[bundle.commits.front().snapshot.ref_of(*s)] = next_id++;
  }
  out.commit_ids_.push_back(bundle.commits.front().id);
  for (std::size_t c = 1; c < bundle.commits.size(); ++c) {
    const Commit& commit = bundle.commits[c];
    out.commit_ids_.push_back(commit.id);
    const CommitDiff diff =
        diff_commit(bundle.commits[c - 1].snapshot, commit.snapshot, cfg);
    std::map<StmtRef, int> updated;
    for (const auto& [to, from] : diff.matches) updated[to] = current.at(from);
    for (EditOp op : diff.ops) {
      op.commit_id = commit.id;
      if (op.op == OpKind::Delete) {
        op.lineage = current.at(op.stmt);
      } else if (op.op == OpKind::Insert) {
        op.lineage = next_id++;
        updated[op.stmt] = op.lineage;
      } else {
        op.lineage = updated.at(op.stmt);
      }
      auto& h = out.histories_[op.lineage];
      h.lineage = op.lineage;
      h.ops.push_back(std::move(op));
    }
    current = std::move(updated);
  }
  out.final_ = std::move(current);
  return out;
}

double history_similarity(const EditHistory& a, const EditHistory& b) {
  std::set<std::pair<std::string, OpKind>> sa;
  std::set<std::pair<std::string, OpKind>> sb;
  for (const auto& op : a.ops) sa.emplace(op.commit_id, op.op);
  for (const auto& op : b.ops) sb.emplace(op.commit_id, op.op);
  if (sa.empty() && sb.empty()) return 1.0;
  std::size_t common = 0;
  for (const auto& x : sa) common += sb.count(x);
  const std::size_t uni = sa.size() + sb.size() - common;
  return static_cast<double>(common) / static_cast<double>(uni);
}

std::vector<StmtRef> discover_cochanged(const Lineage& lineage, const Program& project,
                                        const StmtRef& reference,
                                        const std::vector<StmtRef>& group,
                                        const treesim::SimilarityConfig& cfg,
                                        const ContextFn& context_of) {
  std::vector<StmtRef> out;
  const Node* ref = project.statement(reference);
  if (ref == nullptr) return out;
  const std::set<StmtRef> members(group.begin(), group.end());
  std::set<std::string> commits;
  for (const auto& m : group) {
    for (const auto& op : lineage.history_of(m).ops) commits.insert(op.commit_id);
  }
  const Node* ref_fn = ref->enclosing_function();
  const context::ContextSet ref_ctx = context_of(*ref_fn, *ref);
  std::set<StmtRef> tried;
  for (const auto& commit : lineage.commit_ids()) {
    if (commits.count(commit) == 0) continue;
    for (const auto& cand : lineage.edited_in(commit)) {
      if (members.count(cand) != 0 || !tried.insert(cand).second) continue;
      const Node* s = project.statement(cand);
      if (s == nullptr) continue;
      const auto sm = treesim::statement_similarity(*ref, *s, cfg);
      if (!sm.mapping) continue;
      const auto ctx = context_of(*s->enclosing_function(), *s);
      if (!context::contexts_similar(ref_ctx, ctx, *sm.mapping, cfg).similar) continue;
      out.push_back(cand);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace hydra::history

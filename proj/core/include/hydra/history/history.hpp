#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "hydra/context/context.hpp"
#include "hydra/minilang/program.hpp"
#include "hydra/treesim/similarity.hpp"

namespace hydra::history {

using minilang::Node;
using minilang::Program;
using minilang::StmtRef;

class BundleFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SnapshotParseError : public std::runtime_error {
 public:
  SnapshotParseError(std::string commit, std::string file, const std::string& what)
      : std::runtime_error("commit " + commit + ", " + file + ": " + what),
        commit_(std::move(commit)), file_(std::move(file)) {}
  const std::string& commit() const { return commit_; }
  const std::string& file() const { return file_; }

 private:
  std::string commit_;
  std::string file_;
};

struct Commit {
  std::string id;
  std::string message;
  Program snapshot;
};

/// Ordered full-snapshot history; the last commit is the version under repair.
struct HistoryBundle {
  std::vector<Commit> commits;

  bool empty() const { return commits.empty(); }
  const Program& final_snapshot() const { return commits.back().snapshot; }
};

/// Reads `<dir>/history.json` and every `.mini` file below each commit path.
HistoryBundle load_history(const std::filesystem::path& dir);

enum class OpKind { Insert, Delete, Modify };

std::string_view op_name(OpKind op);

struct EditOp {
  OpKind op = OpKind::Modify;
  int lineage = -1;
  std::string commit_id;
  StmtRef stmt;  // in the commit's snapshot; in the parent's for deletes
};

struct CommitDiff {
  std::vector<EditOp> ops;  // lineage ids unassigned (-1)
  /// Statement in `next` -> matched statement in `prev`.
  std::map<StmtRef, StmtRef> matches;
};

/// Statement-level AST diff. Functions are matched by name, statements
/// greedily by decreasing similarity among pairs with zeta > t1.
CommitDiff diff_commit(const Program& prev, const Program& next,
                       const treesim::SimilarityConfig& cfg);

struct EditHistory {
  int lineage = -1;
  std::vector<EditOp> ops;  // commit order
};

/// Edit histories of the statements of the final snapshot.
class Lineage {
 public:
  /// Empty history for statements without a lineage.
  const EditHistory& history_of(const StmtRef& stmt) const;

  /// Final-snapshot statements whose lineage was edited in `commit_id`.
  std::vector<StmtRef> edited_in(const std::string& commit_id) const;

  const std::map<StmtRef, int>& final_lineages() const { return final_; }
  const std::vector<std::string>& commit_ids() const { return commit_ids_; }

 private:
  friend Lineage track_lineage(const HistoryBundle&, const treesim::SimilarityConfig&);
  std::map<StmtRef, int> final_;
  std::map<int, EditHistory> histories_;
  std::vector<std::string> commit_ids_;
};

/// Threads lineage ids through diff_commit matches; the first commit is the
/// baseline and contributes no ops.
Lineage track_lineage(const HistoryBundle& bundle, const treesim::SimilarityConfig& cfg);

/// Jaccard similarity over (commit, op) sets; 1 when both are empty.
double history_similarity(const EditHistory& a, const EditHistory& b);

using ContextFn = std::function<context::ContextSet(const Node& function, const Node& stmt)>;

/// Statements of `project` co-edited with a group member in some commit that
/// pass the statement and context similarity checks against `reference`.
/// Group members are never returned.
std::vector<StmtRef> discover_cochanged(const Lineage& lineage, const Program& project,
                                        const StmtRef& reference,
                                        const std::vector<StmtRef>& group,
                                        const treesim::SimilarityConfig& cfg,
                                        const ContextFn& context_of);

}  // namespace hydra::history

#include <gtest/gtest.h>

#include <unistd.h>

#include <fstream>

#include "corpus.hpp"
#include "hydra/history/history.hpp"
#include "hydra/sibling/sibling.hpp"

using namespace hydra::history;
namespace fs = std::filesystem;

namespace {

Program snapshot(const std::string& src) { return hydra::testing::program_of(src); }

struct TempBundle {
  fs::path dir;
  explicit TempBundle(const std::string& tag) {
    dir = fs::temp_directory_path() / ("hydra-history-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~TempBundle() { fs::remove_all(dir); }
  void write(const std::string& rel, const std::string& text) const {
    fs::create_directories((dir / rel).parent_path());
    std::ofstream(dir / rel) << text;
  }
};

EditHistory history_of(std::vector<std::pair<std::string, OpKind>> ops) {
  EditHistory h;
  for (auto& [c, k] : ops) h.ops.push_back({k, 0, c, {}});
  return h;
}

HistoryBundle bundle_of(const std::vector<std::string>& versions) {
  HistoryBundle b;
  for (std::size_t i = 0; i < versions.size(); ++i) {
    b.commits.push_back({"c" + std::to_string(i + 1), "", snapshot(versions[i])});
  }
  return b;
}

}  // namespace

TEST(LoadHistory, MissingManifest) {
  TempBundle t("nomanifest");
  EXPECT_THROW(load_history(t.dir), BundleFormatError);
}

TEST(LoadHistory, MalformedManifest) {
  TempBundle t("malformed");
  t.write("history.json", "{\"commits\": 3}");
  EXPECT_THROW(load_history(t.dir), BundleFormatError);
  t.write("history.json", "not json");
  EXPECT_THROW(load_history(t.dir), BundleFormatError);
}

TEST(LoadHistory, MissingCommitDirectory) {
  TempBundle t("missingdir");
  t.write("history.json", R"({"commits": [{"id": "a", "path": "a"}]})");
  EXPECT_THROW(load_history(t.dir), BundleFormatError);
}

TEST(LoadHistory, DuplicateIds) {
  TempBundle t("dup");
  t.write("history.json", R"({"commits": [{"id": "a", "path": "a"}, {"id": "a", "path": "a"}]})");
  t.write("a/m.mini", "fn f() -> int { return 1; }");
  EXPECT_THROW(load_history(t.dir), BundleFormatError);
}

TEST(LoadHistory, SnapshotParseError) {
  TempBundle t("parse");
  t.write("history.json", R"({"commits": [{"id": "a", "path": "a"}, {"id": "b", "path": "b"}]})");
  t.write("a/m.mini", "fn f() -> int { return 1; }");
  t.write("b/m.mini", "fn f( { }");
  try {
    (void)load_history(t.dir);
    FAIL() << "expected SnapshotParseError";
  } catch (const SnapshotParseError& e) {
    EXPECT_EQ(e.commit(), "b");
    EXPECT_EQ(e.file(), "m.mini");
  }
}

TEST(LoadHistory, BrentBundle) {
  const auto b = load_history(hydra::testing::corpus_dir() / "brent/history");
  ASSERT_EQ(b.commits.size(), 4u);
  EXPECT_EQ(b.commits.front().id, "c1");
  EXPECT_EQ(b.commits.back().id, "c4");
  EXPECT_NE(b.final_snapshot().function("optimize"), nullptr);
}

TEST(DiffCommit, IdenticalIsEmpty) {
  const std::string src = "fn f(a: int) -> int { var b: int = a + 1; return b; }";
  Program p = snapshot(src);
  Program q = snapshot(src);
  const auto d = diff_commit(p, q, {});
  EXPECT_TRUE(d.ops.empty());
  EXPECT_EQ(d.matches.size(), 2u);
}

TEST(DiffCommit, LiteralChangeIsModify) {
  Program p = snapshot("fn f(a: int) -> int { var b: int = a + 1; var c: int = b * 2; return c; }");
  Program q = snapshot("fn f(a: int) -> int { var b: int = a + 1; var c: int = b * 3; return c; }");
  const auto d = diff_commit(p, q, {});
  ASSERT_EQ(d.ops.size(), 1u);
  EXPECT_EQ(d.ops[0].op, OpKind::Modify);
  EXPECT_EQ(d.ops[0].stmt.to_string(), "main.mini:f:1");
}

TEST(DiffCommit, InsertAndDelete) {
  Program p = snapshot("fn f(a: int) -> int { var b: int = a + 1; return b; }");
  Program q = snapshot("fn f(a: int) -> int { var b: int = a + 1; assert b > 0; return b; }");
  const auto ins = diff_commit(p, q, {});
  ASSERT_EQ(ins.ops.size(), 1u);
  EXPECT_EQ(ins.ops[0].op, OpKind::Insert);
  EXPECT_EQ(ins.ops[0].stmt.index, 1);
  const auto del = diff_commit(q, p, {});
  ASSERT_EQ(del.ops.size(), 1u);
  EXPECT_EQ(del.ops[0].op, OpKind::Delete);
  EXPECT_EQ(del.ops[0].stmt.index, 1);
}

TEST(DiffCommit, DissimilarRewriteIsDeletePlusInsert) {
  Program p = snapshot("fn f(a: int) -> int { return a; }");
  Program q = snapshot("fn f(a: int) -> int { return len([a, a, a]) * 7 - a; }");
  const auto d = diff_commit(p, q, {});
  ASSERT_EQ(d.ops.size(), 2u);
  std::set<OpKind> kinds{d.ops[0].op, d.ops[1].op};
  EXPECT_EQ(kinds, (std::set<OpKind>{OpKind::Delete, OpKind::Insert}));
}

TEST(Lineage, BrentReturnsModifiedInC3) {
  auto p = hydra::testing::load_case("brent");
  hydra::treesim::SimilarityConfig cfg;
  cfg.records = &p.records();
  const auto bundle = load_history(hydra::testing::corpus_dir() / "brent/history");
  const Lineage lin = track_lineage(bundle, cfg);
  EXPECT_EQ(lin.commit_ids(), (std::vector<std::string>{"c1", "c2", "c3", "c4"}));
  for (int idx : {12, 17}) {
    const auto& h = lin.history_of({"brent.mini", "optimize", idx});
    ASSERT_EQ(h.ops.size(), 1u) << idx;
    EXPECT_EQ(h.ops[0].op, OpKind::Modify);
    EXPECT_EQ(h.ops[0].commit_id, "c3");
  }
  const auto a = lin.history_of({"brent.mini", "optimize", 12});
  const auto b = lin.history_of({"brent.mini", "optimize", 17});
  EXPECT_DOUBLE_EQ(history_similarity(a, b), 1.0);
  EXPECT_EQ(lin.history_of({"brent.mini", "nosuch", 0}).ops.size(), 0u);
}

TEST(Lineage, EditedIn) {
  auto bundle = bundle_of({"fn f(a: int) -> int { var b: int = a + 1; return b; }",
                           "fn f(a: int) -> int { var b: int = a + 2; return b; }",
                           "fn f(a: int) -> int { var b: int = a + 2; return b * 1; }"});
  const Lineage lin = track_lineage(bundle, {});
  EXPECT_EQ(lin.edited_in("c2"), (std::vector<hydra::minilang::StmtRef>{{"main.mini", "f", 0}}));
  const auto& h = lin.history_of({"main.mini", "f", 0});
  ASSERT_EQ(h.ops.size(), 1u);
  EXPECT_EQ(h.ops[0].commit_id, "c2");
  EXPECT_TRUE(lin.edited_in("c1").empty());
}

TEST(Lineage, ThreadsThroughInsertions) {
  auto bundle = bundle_of({"fn f(a: int) -> int { var b: int = a + 1; return b; }",
                           "fn f(a: int) -> int { assert a > 0; var b: int = a + 1; return b; }",
                           "fn f(a: int) -> int { assert a > 0; var b: int = a + 5; return b; }"});
  const Lineage lin = track_lineage(bundle, {});
  const auto& decl = lin.history_of({"main.mini", "f", 1});
  ASSERT_EQ(decl.ops.size(), 1u);
  EXPECT_EQ(decl.ops[0].commit_id, "c3");
  const auto& inserted = lin.history_of({"main.mini", "f", 0});
  ASSERT_EQ(inserted.ops.size(), 1u);
  EXPECT_EQ(inserted.ops[0].op, OpKind::Insert);
}

TEST(HistorySimilarity, Examples) {
  EXPECT_DOUBLE_EQ(history_similarity({}, {}), 1.0);
  const auto m3 = history_of({{"c3", OpKind::Modify}});
  EXPECT_DOUBLE_EQ(history_similarity(m3, m3), 1.0);
  EXPECT_DOUBLE_EQ(history_similarity(m3, {}), 0.0);
  const auto m23 = history_of({{"c2", OpKind::Modify}, {"c3", OpKind::Modify}});
  EXPECT_DOUBLE_EQ(history_similarity(m3, m23), 0.5);
  EXPECT_DOUBLE_EQ(history_similarity(m3, history_of({{"c3", OpKind::Insert}})), 0.0);
  // Repeated (commit, op) pairs collapse.
  const auto twice = history_of({{"c3", OpKind::Modify}, {"c3", OpKind::Modify}});
  EXPECT_DOUBLE_EQ(history_similarity(m3, twice), 1.0);
}

TEST(HistorySimilarity, Properties) {
  const std::vector<std::string> commits{"a", "b", "c"};
  const std::vector<OpKind> kinds{OpKind::Insert, OpKind::Delete, OpKind::Modify};
  std::vector<EditHistory> all;
  for (int mask = 0; mask < 64; ++mask) {
    std::vector<std::pair<std::string, OpKind>> ops;
    for (int bit = 0; bit < 6; ++bit) {
      if (mask & (1 << bit)) ops.emplace_back(commits[bit % 3], kinds[bit / 2 % 3]);
    }
    all.push_back(history_of(ops));
  }
  for (const auto& a : all) {
    EXPECT_DOUBLE_EQ(history_similarity(a, a), 1.0);
    for (const auto& b : all) {
      const double x = history_similarity(a, b);
      EXPECT_DOUBLE_EQ(x, history_similarity(b, a));
      EXPECT_GE(x, 0.0);
      EXPECT_LE(x, 1.0);
    }
  }
}

TEST(DiscoverCochanged, BrentFirstReturn) {
  auto p = hydra::testing::load_case("brent");
  hydra::treesim::SimilarityConfig cfg;
  cfg.records = &p.records();
  const auto bundle = load_history(hydra::testing::corpus_dir() / "brent/history");
  const Lineage lin = track_lineage(bundle, cfg);
  const hydra::minilang::StmtRef ref{"brent.mini", "optimize", 17};
  const auto found = discover_cochanged(lin, p, ref, {ref}, cfg,
                                        hydra::sibling::context_function({}));
  EXPECT_EQ(found, (std::vector<hydra::minilang::StmtRef>{{"brent.mini", "optimize", 12}}));
  // Members already in the group are never returned.
  const auto again = discover_cochanged(lin, p, ref, {ref, {"brent.mini", "optimize", 12}}, cfg,
                                        hydra::sibling::context_function({}));
  EXPECT_TRUE(again.empty());
}

TEST(DiscoverCochanged, NeedsSimilarity) {
  auto bundle = bundle_of({"fn f(a: int) -> int { var b: int = a + 1; return b; }\n"
                           "fn g(a: int) -> int { var c: int = len([a]); return c; }",
                           "fn f(a: int) -> int { var b: int = a + 2; return b; }\n"
                           "fn g(a: int) -> int { var c: int = len([a, a]); return c; }"});
  const Lineage lin = track_lineage(bundle, {});
  const Program& p = bundle.final_snapshot();
  const hydra::minilang::StmtRef ref{"main.mini", "f", 0};
  ASSERT_EQ(lin.edited_in("c2").size(), 2u);
  EXPECT_TRUE(discover_cochanged(lin, p, ref, {ref}, {}, hydra::sibling::context_function({})).empty());
}

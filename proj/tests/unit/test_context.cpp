#include <gtest/gtest.h>

#include <set>

#include "corpus.hpp"
#include "hydra/context/context.hpp"
#include "hydra/context/reaching.hpp"
#include "hydra/minilang/parser.hpp"
#include "oracles.hpp"

using namespace hydra::context;
using hydra::minilang::function_statements;
using hydra::minilang::NodeKind;
using hydra::minilang::parse_statement;
using hydra::testing::program_of;

namespace {

std::set<std::string> accesses(const std::string& stmt) {
  return extract_variable_accesses(*parse_statement(stmt));
}

std::vector<int> indices(const std::vector<const Node*>& nodes) {
  std::vector<int> out;
  for (const Node* n : nodes) out.push_back(n->kind == NodeKind::Function ? -1 : n->stmt_index);
  return out;
}

}  // namespace

TEST(VariableAccesses, Examples) {
  EXPECT_EQ(accesses("return current;"), (std::set<std::string>{"current"}));
  EXPECT_EQ(accesses("x = a + b;"), (std::set<std::string>{"a", "b"}));
  EXPECT_EQ(accesses("assert best(c, p, m) == e;"), (std::set<std::string>{"c", "p", "m", "e"}));
  EXPECT_EQ(accesses("x = 1;"), (std::set<std::string>{}));
}

TEST(VariableAccesses, TargetsAndConditions) {
  EXPECT_EQ(accesses("a[i] = v;"), (std::set<std::string>{"a", "i", "v"}));
  EXPECT_EQ(accesses("p.x = v;"), (std::set<std::string>{"p", "v"}));
  EXPECT_EQ(accesses("if (k < n) { y = z; }"), (std::set<std::string>{"k", "n"}));
  EXPECT_EQ(accesses("while (i < len(a)) { i = i + 1; }"), (std::set<std::string>{"i", "a"}));
  EXPECT_EQ(accesses("var t: int = u * 2;"), (std::set<std::string>{"u"}));
}

TEST(ReachingDefinitions, StraightLine) {
  auto p = program_of("fn f() -> int { var v: int = 1; return v; }");
  const Node* fn = p.function("f");
  const auto s = function_statements(*fn);
  EXPECT_EQ(reaching_definitions(*fn, *s[1], "v"), std::vector<const Node*>{s[0]});
}

TEST(ReachingDefinitions, BothBranches) {
  auto p = program_of("fn f(c: bool) -> int { var v: int = 1; if (c) { v = 2; } return v; }");
  const Node* fn = p.function("f");
  const auto s = function_statements(*fn);
  // s: 0 var v, 1 if, 2 v = 2, 3 return
  EXPECT_EQ(indices(reaching_definitions(*fn, *s[3], "v")), (std::vector<int>{0, 2}));
  EXPECT_EQ(indices(reaching_definitions(*fn, *s[1], "c")), (std::vector<int>{-1}));
}

TEST(ReachingDefinitions, KillAndLoop) {
  auto p = program_of(
      "fn f(n: int) -> int { var i: int = 0; i = 5; while (i < n) { i = i + 1; } return i; }");
  const Node* fn = p.function("f");
  const auto s = function_statements(*fn);
  // s: 0 var i, 1 i = 5, 2 while, 3 i = i + 1, 4 return
  EXPECT_EQ(indices(reaching_definitions(*fn, *s[2], "i")), (std::vector<int>{1, 3}));
  EXPECT_EQ(indices(reaching_definitions(*fn, *s[3], "i")), (std::vector<int>{1, 3}));
  EXPECT_EQ(indices(reaching_definitions(*fn, *s[4], "i")), (std::vector<int>{1, 3}));
  EXPECT_EQ(indices(reaching_definitions(*fn, *s[2], "n")), (std::vector<int>{-1}));
}

TEST(ReachingDefinitions, UninitializedDeclIsNoDefinition) {
  auto p = program_of("fn f(c: bool) -> int { var v: int; if (c) { v = 3; } return v; }");
  const Node* fn = p.function("f");
  const auto s = function_statements(*fn);
  EXPECT_EQ(indices(reaching_definitions(*fn, *s[3], "v")), (std::vector<int>{2}));
}

TEST(ReachingDefinitions, BrentSecondReturn) {
  auto p = hydra::testing::load_case("brent");
  const Node* fn = p.function("optimize");
  const Node* second = p.statement({"brent.mini", "optimize", 17});
  const auto defs = reaching_definitions(*fn, *second, "current");
  ASSERT_EQ(defs.size(), 1u);
  EXPECT_EQ(defs[0]->kind, NodeKind::VarDecl);
  EXPECT_EQ(defs[0]->stmt_index, 6);
  EXPECT_GE(second->line - defs[0]->line, 10);
  const Node* first = p.statement({"brent.mini", "optimize", 12});
  EXPECT_EQ(indices(reaching_definitions(*fn, *first, "current")), (std::vector<int>{10}));
}

TEST(ReachingDefinitions, MatchesPathEnumerationOnCorpus) {
  std::size_t checked = 0;
  for (const auto& name : hydra::testing::corpus_cases()) {
    auto p = hydra::testing::load_case(name);
    for (const Node* fn : p.project_functions()) {
      const auto stmts = function_statements(*fn);
      if (stmts.size() > 12) continue;
      const ControlFlowGraph g(*fn);
      for (const Node* s : stmts) {
        for (const auto& v : extract_variable_accesses(*s)) {
          EXPECT_EQ(reaching_definitions(g, *s, v), hydra::testing::brute_force_reaching(g, *s, v))
              << name << " " << fn->name << ":" << s->stmt_index << " " << v;
          ++checked;
        }
      }
    }
  }
  EXPECT_GT(checked, 100u);
}

TEST(ControlFlow, Shape) {
  auto p = program_of("fn f(c: bool) -> int { if (c) { return 1; } return 2; }");
  const ControlFlowGraph g(*p.function("f"));
  EXPECT_EQ(g.size(), 5u);
  EXPECT_EQ(g.successors(ControlFlowGraph::kEntry), std::vector<std::size_t>{2});
  std::set<std::size_t> if_succ(g.successors(2).begin(), g.successors(2).end());
  EXPECT_EQ(if_succ, (std::set<std::size_t>{3, 4}));
  EXPECT_EQ(g.successors(3), std::vector<std::size_t>{ControlFlowGraph::kExit});
  EXPECT_TRUE(g.defines(ControlFlowGraph::kEntry, "c"));
}

TEST(Context, TwoVariablesThreeMembers) {
  auto p = program_of("fn f() -> int { var a: int = 1; var b: int = 2; var z: int = 0; return a + b; }");
  const Node* fn = p.function("f");
  const auto s = function_statements(*fn);
  const auto ctx = extract_context(*fn, *s[3]);
  EXPECT_EQ(ctx.focus, s[3]);
  EXPECT_EQ(indices(ctx.members), (std::vector<int>{0, 1, 3}));
}

TEST(Context, FallbackPreviousStatement) {
  auto p = program_of("fn f() -> int { var y: int = 2; var x: int = 0; x = 1; return x + y; }");
  const Node* fn = p.function("f");
  const auto s = function_statements(*fn);
  EXPECT_EQ(indices(extract_context(*fn, *s[2]).members), (std::vector<int>{1, 2}));
  auto q = program_of("fn g() -> int { return 1; }");
  const Node* g = q.function("g");
  const auto ctx = extract_context(*g, *function_statements(*g)[0]);
  EXPECT_EQ(indices(ctx.members), (std::vector<int>{-1, 0}));
}

TEST(Context, MembersWellFormedOnCorpus) {
  for (const auto& name : hydra::testing::corpus_cases()) {
    auto p = hydra::testing::load_case(name);
    for (const Node* fn : p.project_functions()) {
      const ControlFlowGraph g(*fn);
      for (const Node* s : function_statements(*fn)) {
        const auto ctx = extract_context(*fn, *s);
        EXPECT_GE(ctx.members.size(), 2u);
        EXPECT_NE(std::find(ctx.members.begin(), ctx.members.end(), s), ctx.members.end());
        std::set<const Node*> defs;
        for (const auto& v : extract_variable_accesses(*s)) {
          for (const Node* d : reaching_definitions(g, *s, v)) defs.insert(d);
        }
        for (const Node* m : ctx.members) {
          EXPECT_TRUE(m == fn || m->enclosing_function() == fn);
        }
        if (!defs.empty()) {
          for (const Node* m : ctx.members) {
            if (m != s) {
              EXPECT_TRUE(defs.count(m)) << name << " " << fn->name;
            }
          }
        } else {
          EXPECT_EQ(ctx.members.size(), 2u);
        }
        const auto lines = ctx.lines();
        EXPECT_TRUE(std::is_sorted(lines.begin(), lines.end()));
      }
    }
  }
}

TEST(Context, FixedWindow) {
  auto p = program_of(
      "fn f() -> int {\n var a: int = 1;\n var b: int = 2;\n var c: int = 3;\n var d: int = 4;\n return a;\n}");
  const Node* fn = p.function("f");
  const auto s = function_statements(*fn);
  EXPECT_EQ(indices(fixed_window_context(*fn, *s[2], 1).members), (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(indices(fixed_window_context(*fn, *s[0], 1).members), (std::vector<int>{0, 1}));
}

TEST(ContextsSimilar, Identical) {
  auto p = hydra::testing::load_case("brent");
  hydra::treesim::SimilarityConfig cfg;
  cfg.records = &p.records();
  const Node* fn = p.function("optimize");
  const auto ctx = extract_context(*fn, *p.statement({"brent.mini", "optimize", 17}));
  const auto m = contexts_similar(ctx, ctx, cfg);
  EXPECT_TRUE(m.similar);
  EXPECT_DOUBLE_EQ(m.zeta, 1.0);
  ASSERT_TRUE(m.combined.has_value());
  for (const auto& [l, r] : m.combined->pairs) EXPECT_EQ(l, r);
}

TEST(ContextsSimilar, BrentSiblings) {
  auto p = hydra::testing::load_case("brent");
  hydra::treesim::SimilarityConfig cfg;
  cfg.records = &p.records();
  const Node* fn = p.function("optimize");
  const Node* second = p.statement({"brent.mini", "optimize", 17});
  const Node* first = p.statement({"brent.mini", "optimize", 12});
  const auto a = extract_context(*fn, *second);
  const auto b = extract_context(*fn, *first);
  EXPECT_EQ(indices(a.members), (std::vector<int>{6, 17}));
  EXPECT_EQ(indices(b.members), (std::vector<int>{10, 12}));
  const auto m = contexts_similar(a, b, cfg);
  ASSERT_TRUE(m.similar);
  EXPECT_GT(m.zeta, cfg.t1);
  ASSERT_TRUE(m.combined.has_value());
  EXPECT_EQ(m.combined->right_of(second), first);
  // A declaration and an assignment are different kinds; their Pair(...)
  // initializers pair up instead.
  const Node* decl = p.statement({"brent.mini", "optimize", 6});
  const Node* assign = p.statement({"brent.mini", "optimize", 10});
  EXPECT_EQ(m.combined->right_of(decl), nullptr);
  EXPECT_EQ(m.combined->right_of(decl->child(0)), assign->child(1));
  EXPECT_EQ(contexts_similar(b, a, cfg).similar, m.similar);
}

TEST(ContextsSimilar, UnrelatedReturn) {
  auto p = program_of(
      "fn bump(n: int) -> int { return n + 1; }\n"
      "fn f(a: int) -> int { var current: int = a; return current; }\n"
      "fn g(a: int) -> int { var count: int = bump(a); return count; }");
  hydra::treesim::SimilarityConfig cfg;
  const auto sf = function_statements(*p.function("f"));
  const auto sg = function_statements(*p.function("g"));
  const auto a = extract_context(*p.function("f"), *sf[1]);
  const auto b = extract_context(*p.function("g"), *sg[1]);
  const auto m = contexts_similar(a, b, cfg);
  EXPECT_FALSE(m.similar);
  EXPECT_LE(m.zeta, cfg.t1);
  EXPECT_EQ(contexts_similar(b, a, cfg).similar, false);
}

TEST(ContextsSimilar, SymmetricOnCorpus) {
  for (const auto& name : {"brent", "twins", "trio", "distractor", "false-friend"}) {
    auto p = hydra::testing::load_case(name);
    hydra::treesim::SimilarityConfig cfg;
    cfg.records = &p.records();
    std::vector<ContextSet> ctxs;
    for (const Node* fn : p.project_functions()) {
      for (const Node* s : function_statements(*fn)) ctxs.push_back(extract_context(*fn, *s));
    }
    for (std::size_t i = 0; i < ctxs.size(); ++i) {
      for (std::size_t j = i + 1; j < ctxs.size(); ++j) {
        EXPECT_EQ(contexts_similar(ctxs[i], ctxs[j], cfg).similar,
                  contexts_similar(ctxs[j], ctxs[i], cfg).similar)
            << name << " " << i << " " << j;
      }
    }
  }
}

TEST(MergeMappings, RejectsConflicts) {
  auto p = program_of("fn f(a: int) -> int { var b: int = a; return b; }");
  const auto s = function_statements(*p.function("f"));
  hydra::treesim::NodeMapping x;
  hydra::treesim::NodeMapping y;
  x.pairs = {{s[0], s[0]}};
  y.pairs = {{s[0], s[0]}, {s[1], s[1]}};
  ASSERT_TRUE(merge_mappings(x, y).has_value());
  EXPECT_EQ(merge_mappings(x, y)->size(), 2u);
  hydra::treesim::NodeMapping z;
  z.pairs = {{s[0], s[1]}};
  EXPECT_FALSE(merge_mappings(x, z).has_value());
}

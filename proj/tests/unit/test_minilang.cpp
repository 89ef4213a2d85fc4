#include <gtest/gtest.h>

#include <map>
#include <set>

#include "corpus.hpp"
#include "hydra/minilang/ast.hpp"
#include "hydra/minilang/interpreter.hpp"
#include "hydra/minilang/parser.hpp"
#include "hydra/minilang/program.hpp"
#include "hydra/minilang/unparse.hpp"

using namespace hydra::minilang;
using hydra::testing::corpus_sources;
using hydra::testing::load_case;
using hydra::testing::program_of;
using hydra::testing::slurp;

namespace {

std::vector<const Node*> nodes_of_kind(const Node& root, NodeKind kind) {
  std::vector<const Node*> out;
  for_each_node(root, [&](const Node& n) {
    if (n.kind == kind) out.push_back(&n);
  });
  return out;
}

const TestResult& result_named(const TestRun& run, const std::string& name) {
  for (const auto& r : run.results) {
    if (r.name == name) return r;
  }
  throw std::runtime_error("no test " + name);
}

}  // namespace

TEST(Parse, MinimalFunction) {
  Ast ast = parse("fn f(x: int) -> int { return x; }", "f.mini");
  ASSERT_EQ(ast.root->kind, NodeKind::Program);
  ASSERT_EQ(ast.root->arity(), 1u);
  const Node* fn = ast.root->child(0);
  EXPECT_EQ(fn->kind, NodeKind::Function);
  EXPECT_EQ(fn->name, "f");
  const Node* body = fn->children.back().get();
  ASSERT_EQ(body->kind, NodeKind::Block);
  ASSERT_EQ(body->arity(), 1u);
  const Node* ret = body->child(0);
  EXPECT_EQ(ret->kind, NodeKind::Return);
  ASSERT_EQ(ret->arity(), 1u);
  EXPECT_EQ(ret->child(0)->kind, NodeKind::VarAccess);
  EXPECT_EQ(ret->child(0)->name, "x");
}

TEST(Parse, SyntaxErrorAtBrace) {
  try {
    (void)parse("fn f( { }", "bad.mini");
    FAIL() << "expected SyntaxError";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 1);
    EXPECT_EQ(e.column(), 7);
    EXPECT_EQ(e.file(), "bad.mini");
  }
}

TEST(Parse, NodeIdsArePreorder) {
  Ast a = parse("fn f(x: int) -> int { var y: int = x + 1; return y; }", "f.mini");
  Ast b = parse("fn f(x: int) -> int { var y: int = x + 1; return y; }", "f.mini");
  std::vector<NodeId> ia;
  std::vector<NodeId> ib;
  for_each_node(*a.root, [&](const Node& n) { ia.push_back(n.id); });
  for_each_node(*b.root, [&](const Node& n) { ib.push_back(n.id); });
  EXPECT_EQ(ia, ib);
  for (std::size_t i = 0; i < ia.size(); ++i) EXPECT_EQ(ia[i], i);
  EXPECT_EQ(a.node_count, ia.size());
}

TEST(Parse, ParentLinksAndArity) {
  for (const auto& path : corpus_sources()) {
    Ast ast = parse(slurp(path), path.filename().string());
    for_each_node(*ast.root, [&](const Node& n) {
      for (const auto& c : n.children) EXPECT_EQ(c->parent, &n);
      if (n.kind == NodeKind::BinaryExpr) {
        EXPECT_EQ(n.arity(), 2u);
      }
      if (n.kind == NodeKind::If) {
        EXPECT_TRUE(n.arity() == 2 || n.arity() == 3);
        EXPECT_EQ(n.child(1)->kind, NodeKind::Block);
      }
    });
  }
}

TEST(Parse, BrentHasTwoReturnCurrent) {
  Ast ast = parse(slurp(hydra::testing::corpus_dir() / "brent/src/brent.mini"), "brent.mini");
  const Node* fn = ast.function("optimize");
  ASSERT_NE(fn, nullptr);
  std::set<int> lines;
  for (const Node* r : nodes_of_kind(*fn, NodeKind::Return)) {
    if (r->arity() == 1 && r->child(0)->kind == NodeKind::VarAccess && r->child(0)->name == "current") {
      lines.insert(r->line);
    }
  }
  EXPECT_EQ(lines.size(), 2u);
}

TEST(TypeCheck, IntWidensToDouble) {
  Program p = program_of("fn f() -> double { var d: double = 1; return d; }");
  const Node* fn = p.function("f");
  const Node* decl = function_statements(*fn).front();
  EXPECT_EQ(decl->child(0)->type, Type::int_());
  EXPECT_EQ(decl->declared, Type::double_());
}

TEST(TypeCheck, StringToBoolIsError) {
  std::vector<SourceFile> files{{"main.mini", "fn f() { var b: bool = \"x\"; }", false}};
  Program p = Program::parse_sources(files);
  const auto errors = type_check(p);
  ASSERT_FALSE(errors.empty());
  EXPECT_EQ(errors.front().line, 1);
}

TEST(TypeCheck, CommonErrors) {
  auto errors_of = [](const std::string& src) {
    Program p = Program::parse_sources({{"main.mini", src, false}});
    return type_check(p).size();
  };
  EXPECT_GT(errors_of("fn f() -> int { return y; }"), 0u);
  EXPECT_GT(errors_of("fn g(a: int) -> int { return a; } fn f() -> int { return g(1, 2); }"), 0u);
  EXPECT_GT(errors_of("fn f() { var i: int = 1.5; }"), 0u);
  EXPECT_EQ(errors_of("fn f() { var l: long = 1; var x: double = l; }"), 0u);
}

TEST(TypeCheck, RecordSubtyping) {
  Program p = program_of(
      "record A { x: int; } record B extends A { y: int; }\n"
      "fn getx(a: A) -> int { return a.x; }\n"
      "fn f() -> int { var b: B = B(1, 2); return getx(b); }");
  EXPECT_TRUE(p.records().is_subtype("B", "A"));
  EXPECT_FALSE(p.records().is_subtype("A", "B"));
  const auto fields = p.records().all_fields("B");
  ASSERT_EQ(fields.size(), 2u);
  EXPECT_EQ(fields[0].name, "x");
  std::vector<SourceFile> bad{{"main.mini",
                               "record A { x: int; } record B extends A { y: int; }\n"
                               "fn gety(b: B) -> int { return b.y; }\n"
                               "fn f() -> int { var a: A = A(1); return gety(a); }",
                               false}};
  Program q = Program::parse_sources(bad);
  EXPECT_FALSE(type_check(q).empty());
}

TEST(TypeCheck, WideningChain) {
  EXPECT_LT(numeric_rank(TypeTag::Int), numeric_rank(TypeTag::Long));
  EXPECT_LT(numeric_rank(TypeTag::Long), numeric_rank(TypeTag::Float));
  EXPECT_LT(numeric_rank(TypeTag::Float), numeric_rank(TypeTag::Double));
  EXPECT_TRUE(is_assignable(Type::int_(), Type::double_(), nullptr));
  EXPECT_FALSE(is_assignable(Type::double_(), Type::int_(), nullptr));
  EXPECT_TRUE(is_assignable(Type::null(), Type::record_named("Pair"), nullptr));
}

TEST(TypeCheck, BestCallIsPair) {
  Program p = load_case("brent");
  const Node* fn = p.function("optimize");
  NodePtr call = parse_expression("best(current, previous, flag)");
  // Type the call in place: swap it into the last return of optimize.
  Program copy = p.clone();
  for (auto& ast : copy.files()) {
    Node* root = ast.root.get();
    std::function<void(Node&)> walk = [&](Node& n) {
      if (n.kind == NodeKind::Return && n.arity() == 1 && n.child(0)->name == "current") {
        n.children[0] = call->clone();
        n.children[0]->parent = &n;
      }
      for (auto& c : n.children) walk(*c);
    };
    walk(*root);
    ast.renumber();
  }
  ASSERT_TRUE(type_check(copy).empty());
  int seen = 0;
  for_each_node(*copy.function("optimize"), [&](const Node& n) {
    if (n.kind == NodeKind::Call && n.name == "best") {
      EXPECT_EQ(n.type, Type::record_named("Pair"));
      ++seen;
    }
  });
  EXPECT_EQ(seen, 2);
  EXPECT_NE(fn, nullptr);
}

TEST(TypeCheck, EveryExpressionTyped) {
  for (const auto& name : hydra::testing::corpus_cases()) {
    Program p = load_case(name);
    for (const auto& ast : p.files()) {
      for_each_node(*ast.root, [&](const Node& n) {
        if (n.is_expression()) {
          EXPECT_FALSE(n.type.is_none()) << name << " line " << n.line;
        }
      });
    }
  }
}

TEST(Interpreter, AddPassesAndFails) {
  const std::string test = "fn test_add() { assert add(2, 3) == 5; }";
  Program good = program_of("fn add(a: int, b: int) -> int { return a + b; }", test);
  Program bad = program_of("fn add(a: int, b: int) -> int { return a - b; }", test);
  EXPECT_EQ(run_tests(good).results.at(0).verdict, Verdict::Pass);
  EXPECT_EQ(run_tests(bad).results.at(0).verdict, Verdict::Fail);
}

TEST(Interpreter, RuntimeErrorAndStepBudget) {
  Program p = program_of(
      "fn div(a: int, b: int) -> int { return a / b; }\n"
      "fn spin() -> int { var i: int = 0; while (true) { i = i + 1; } return i; }",
      "fn test_div() { assert div(1, 0) == 0; }\nfn test_spin() { assert spin() == 0; }");
  TestRunOptions opts;
  opts.max_steps = 10000;
  TestRun run = run_tests(p, opts);
  EXPECT_EQ(result_named(run, "test_div").verdict, Verdict::Error);
  EXPECT_EQ(result_named(run, "test_spin").verdict, Verdict::Error);
  EXPECT_EQ(run.failing_count(), 2u);
}

TEST(Interpreter, TestsAreIsolated) {
  Program p = program_of("fn f(a: array<int>) -> int { a[0] = a[0] + 1; return a[0]; }",
                         "fn test_a() { var x: array<int> = [1]; assert f(x) == 2; }\n"
                         "fn test_b() { var x: array<int> = [1]; assert f(x) == 2; }");
  EXPECT_TRUE(run_tests(p).all_pass());
}

TEST(Interpreter, BrentCoverage) {
  Program p = load_case("brent");
  TestRunOptions opts;
  opts.with_coverage = true;
  TestRun run = run_tests(p, opts);
  ASSERT_EQ(run.failing_count(), 1u);
  const StmtRef first{"brent.mini", "optimize", 12};
  const StmtRef second{"brent.mini", "optimize", 17};
  ASSERT_EQ(p.statement(first)->kind, NodeKind::Return);
  ASSERT_EQ(p.statement(second)->kind, NodeKind::Return);
  ASSERT_TRUE(run.coverage.count(second));
  EXPECT_GT(run.coverage.at(second).failing, 0);
  const auto it = run.coverage.find(first);
  EXPECT_TRUE(it == run.coverage.end() || it->second.failing == 0);
}

TEST(Interpreter, Deterministic) {
  for (const auto& name : hydra::testing::corpus_cases()) {
    Program p = load_case(name);
    TestRunOptions opts;
    opts.with_coverage = true;
    TestRun a = run_tests(p, opts);
    TestRun b = run_tests(p, opts);
    ASSERT_EQ(a.results.size(), b.results.size());
    for (std::size_t i = 0; i < a.results.size(); ++i) {
      EXPECT_EQ(a.results[i].verdict, b.results[i].verdict) << name;
      EXPECT_EQ(a.results[i].message, b.results[i].message) << name;
    }
    EXPECT_EQ(a.coverage.size(), b.coverage.size()) << name;
    for (const auto& [stmt, c] : a.coverage) {
      ASSERT_TRUE(b.coverage.count(stmt));
      EXPECT_EQ(c.failing, b.coverage.at(stmt).failing);
      EXPECT_EQ(c.passing, b.coverage.at(stmt).passing);
    }
  }
}

// Statements with nonzero coverage belong to functions reachable from a test
// through the static call graph.
TEST(Interpreter, CoverageSoundness) {
  for (const auto& name : hydra::testing::corpus_cases()) {
    Program p = load_case(name);
    std::map<std::string, std::set<std::string>> calls;
    for (const auto& [fname, fn] : p.function_table()) {
      for_each_node(*fn, [&](const Node& n) {
        if (n.kind == NodeKind::Call) calls[fname].insert(n.name);
      });
    }
    std::set<std::string> reach;
    std::vector<std::string> work;
    for (const Node* t : p.tests()) work.push_back(t->name);
    while (!work.empty()) {
      const std::string f = work.back();
      work.pop_back();
      if (!reach.insert(f).second) continue;
      for (const auto& g : calls[f]) work.push_back(g);
    }
    TestRunOptions opts;
    opts.with_coverage = true;
    for (const auto& [stmt, c] : run_tests(p, opts).coverage) {
      EXPECT_GE(c.failing, 0);
      EXPECT_GE(c.passing, 0);
      EXPECT_TRUE(reach.count(stmt.function)) << name << " " << stmt.to_string();
    }
  }
}

TEST(Unparse, RoundTripMinimal) {
  Ast a = parse("fn f(x: int) -> int { return x; }", "f.mini");
  Ast b = parse(unparse(a), "f.mini");
  EXPECT_TRUE(same_tree(*a.root, *b.root));
}

TEST(Unparse, EmptyBlock) {
  Ast a = parse("fn f() {}", "f.mini");
  EXPECT_NE(unparse(a).find("{ }"), std::string::npos);
}

TEST(Unparse, CanonicalIndent) {
  Ast a = parse("fn f(x: int) -> int { if (x > 0) { return x; } return 0; }", "f.mini");
  const std::string text = unparse(a);
  EXPECT_NE(text.find("\n    if (x > 0) {\n        return x;\n    }\n"), std::string::npos) << text;
}

TEST(Unparse, RoundTripCorpus) {
  for (const auto& path : corpus_sources()) {
    Ast a = parse(slurp(path), path.filename().string());
    const std::string once = unparse(a);
    Ast b = parse(once, path.filename().string());
    EXPECT_TRUE(same_tree(*a.root, *b.root)) << path;
    EXPECT_EQ(unparse(b), once) << path;
  }
}

TEST(Unparse, PrecedenceKeepsParens) {
  NodePtr e = parse_expression("(a - b) - (c - d) * -(e + f)");
  NodePtr back = parse_expression(unparse_expression(*e));
  EXPECT_TRUE(same_tree(*e, *back)) << unparse_expression(*e);
}

TEST(Unparse, PatchedBrentHasTwoBestReturns) {
  Program p = load_case("brent");
  Program copy = p.clone();
  for (auto& ast : copy.files()) {
    if (ast.is_test) continue;
    std::function<void(Node&)> walk = [&](Node& n) {
      if (n.kind == NodeKind::Return && n.arity() == 1 && n.child(0)->kind == NodeKind::VarAccess &&
          n.child(0)->name == "current") {
        n.children[0] = parse_expression("best(current, previous, flag)");
        n.children[0]->parent = &n;
      }
      for (auto& c : n.children) walk(*c);
    };
    walk(*ast.root);
    ast.renumber();
    const std::string text = unparse(ast);
    const std::string needle = "return best(current, previous, flag);";
    std::size_t count = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++count;
    EXPECT_EQ(count, 2u);
  }
}

TEST(StmtRef, ParseAndPrint) {
  const StmtRef r = StmtRef::parse("brent.mini:optimize:17");
  EXPECT_EQ(r.file, "brent.mini");
  EXPECT_EQ(r.function, "optimize");
  EXPECT_EQ(r.index, 17);
  EXPECT_EQ(r.to_string(), "brent.mini:optimize:17");
}

TEST(Program, VisibleVariables) {
  Program p = program_of("fn f(a: int) -> int { var b: int = a; if (b > 0) { var c: int = b; return c; } return b; }");
  const auto stmts = function_statements(*p.function("f"));
  // stmts: 0 var b, 1 if, 2 var c, 3 return c, 4 return b
  std::vector<std::string> names;
  for (const auto& v : visible_variables(*stmts[3])) names.push_back(v.name);
  EXPECT_EQ(names, (std::vector<std::string>{"a", "b", "c"}));
  names.clear();
  for (const auto& v : visible_variables(*stmts[4])) names.push_back(v.name);
  EXPECT_EQ(names, (std::vector<std::string>{"a", "b"}));
}

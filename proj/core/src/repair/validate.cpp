#include "hydra/repair/validate.hpp"

#include <algorithm>
#include <sstream>

#include "hydra/minilang/parser.hpp"
#include "hydra/minilang/unparse.hpp"

namespace hydra::repair {

using minilang::NodeKind;

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Plausible: return "plausible";
    case Outcome::FailedFailing: return "failed_failing";
    case Outcome::FailedRegression: return "failed_regression";
    case Outcome::TypeError: return "type_error";
  }
  return "?";
}

namespace {

std::string statement_text(const Node& stmt) {
  std::string s = minilang::unparse(stmt, 0);
  while (!s.empty() && s.back() == '\n') s.pop_back();
  return s;
}

}  // namespace

std::optional<PatchedProgram> apply_patch(const Program& program, const std::vector<ConcreteEdit>& edits,
                                          std::string* error) {
  Program copy = program.clone();
  std::vector<Node*> targets;
  for (const auto& e : edits) {
    // The copy is private to this call.
    auto* stmt = const_cast<Node*>(copy.statement(e.stmt));
    if (stmt == nullptr) {
      if (error != nullptr) *error = "no statement " + e.stmt.to_string();
      return std::nullopt;
    }
    targets.push_back(stmt);
  }
  PatchedProgram out;
  for (std::size_t i = 0; i < edits.size(); ++i) {
    const auto& e = edits[i];
    Node* stmt = targets[i];
    Hunk h{e.stmt, statement_text(*stmt), {}};
    if (e.kind == EditKind::ReplaceExpr) {
      Node* parent = stmt;
      for (std::size_t k = 0; k + 1 < e.path.size(); ++k) parent = parent->child(e.path[k]);
      auto repl = e.expr->clone();
      repl->parent = parent;
      parent->children[e.path.back()] = std::move(repl);
      h.after = statement_text(*stmt);
    } else {
      Node* block = stmt->parent;
      auto slot = std::find_if(block->children.begin(), block->children.end(),
                               [&](const NodePtr& c) { return c.get() == stmt; });
      auto guard = minilang::make_node(NodeKind::If, stmt->line, stmt->column);
      guard->add(e.expr->clone());
      auto body = minilang::make_node(NodeKind::Block, stmt->line, stmt->column);
      body->add(std::move(*slot));
      guard->add(std::move(body));
      guard->parent = block;
      *slot = std::move(guard);
      h.after = statement_text(*slot->get());
    }
    out.hunks.push_back(std::move(h));
  }
  std::vector<minilang::SourceFile> sources;
  for (const auto& f : copy.files()) {
    std::string text = minilang::unparse(f);
    out.texts[f.source_file] = text;
    sources.push_back({f.source_file, std::move(text), f.is_test});
  }
  try {
    out.program = Program::parse_sources(sources);
  } catch (const minilang::SyntaxError& ex) {
    if (error != nullptr) *error = ex.what();
    return std::nullopt;
  }
  const auto errors = minilang::type_check(out.program);
  if (!errors.empty()) {
    if (error != nullptr) *error = errors.front().to_string();
    return std::nullopt;
  }
  return out;
}

Validation validate(const Program& program, const std::vector<ConcreteEdit>& edits,
                    const std::vector<std::string>& failing_tests, std::int64_t max_steps) {
  Validation v;
  v.patched = apply_patch(program, edits, &v.detail);
  if (!v.patched) {
    v.outcome = Outcome::TypeError;
    return v;
  }
  minilang::TestRunOptions first;
  first.max_steps = max_steps;
  first.only = failing_tests;
  const auto focused = minilang::run_tests(v.patched->program, first);
  if (!focused.all_pass()) {
    v.outcome = Outcome::FailedFailing;
    v.failing_after = focused.failing_count();
    return v;
  }
  minilang::TestRunOptions all;
  all.max_steps = max_steps;
  const auto full = minilang::run_tests(v.patched->program, all);
  v.failing_after = full.failing_count();
  v.outcome = full.all_pass() ? Outcome::Plausible : Outcome::FailedRegression;
  return v;
}

namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

}  // namespace

std::string unified_diff(const std::string& before, const std::string& after,
                         const std::string& from_name, const std::string& to_name) {
  const auto a = split_lines(before);
  const auto b = split_lines(after);
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  // LCS table from the back.
  std::vector<std::vector<int>> lcs(n + 1, std::vector<int>(m + 1, 0));
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      lcs[i][j] = a[i] == b[j] ? lcs[i + 1][j + 1] + 1 : std::max(lcs[i + 1][j], lcs[i][j + 1]);
    }
  }
  struct Line {
    char tag;
    std::size_t ai;
    std::size_t bi;
  };
  std::vector<Line> script;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < n || j < m) {
    if (i < n && j < m && a[i] == b[j]) {
      script.push_back({' ', i++, j++});
    } else if (i < n && (j == m || lcs[i + 1][j] >= lcs[i][j + 1])) {
      script.push_back({'-', i++, j});
    } else {
      script.push_back({'+', i, j++});
    }
  }
  std::ostringstream os;
  constexpr std::size_t kContext = 3;
  std::size_t k = 0;
  bool header = false;
  while (k < script.size()) {
    if (script[k].tag == ' ') {
      ++k;
      continue;
    }
    std::size_t start = k >= kContext ? k - kContext : 0;
    std::size_t end = k;
    // Extend while changes are within 2 * context of each other.
    std::size_t last_change = k;
    while (end < script.size()) {
      if (script[end].tag != ' ') last_change = end;
      if (end - last_change > 2 * kContext) break;
      ++end;
    }
    end = std::min(script.size(), last_change + kContext + 1);
    if (!header) {
      os << "--- " << from_name << "\n+++ " << to_name << "\n";
      header = true;
    }
    std::size_t a_start = script[start].ai;
    std::size_t b_start = script[start].bi;
    std::size_t a_len = 0;
    std::size_t b_len = 0;
    for (std::size_t x = start; x < end; ++x) {
      if (script[x].tag != '+') ++a_len;
      if (script[x].tag != '-') ++b_len;
    }
    os << "@@ -" << (a_len == 0 ? a_start : a_start + 1) << ',' << a_len << " +"
       << (b_len == 0 ? b_start : b_start + 1) << ',' << b_len << " @@\n";
    for (std::size_t x = start; x < end; ++x) {
      const auto& l = script[x];
      os << l.tag << (l.tag == '+' ? b[l.bi] : a[l.ai]) << '\n';
    }
    k = end;
  }
  return os.str();
}

}  // namespace hydra::repair

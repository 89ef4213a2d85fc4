#include "hydra/repair/repair.hpp"

#include <chrono>
#include <set>

#include <spdlog/spdlog.h>

#include "hydra/minilang/unparse.hpp"

namespace hydra::repair {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

std::string variant_name(const VariantSpec& v) {
  switch (v.variant) {
    case Variant::Full: return "full";
    case Variant::SingleHunk: return "sh";
    case Variant::FixedContext: return "fixed-context:" + std::to_string(v.window);
    case Variant::MinusHistory: return "minus-history";
    case Variant::Incremental: return "incremental";
  }
  return "?";
}

std::optional<VariantSpec> parse_variant(std::string_view text) {
  if (text == "full") return VariantSpec{Variant::Full, 2};
  if (text == "sh") return VariantSpec{Variant::SingleHunk, 2};
  if (text == "minus-history") return VariantSpec{Variant::MinusHistory, 2};
  if (text == "incremental") return VariantSpec{Variant::Incremental, 2};
  constexpr std::string_view prefix = "fixed-context:";
  if (text.substr(0, prefix.size()) == prefix) {
    const std::string w(text.substr(prefix.size()));
    if (w.empty() || w.find_first_not_of("0123456789") != std::string::npos || w.size() > 4) {
      return std::nullopt;
    }
    return VariantSpec{Variant::FixedContext, std::stoi(w)};
  }
  return std::nullopt;
}

sibling::SiblingOptions sibling_options(const VariantSpec& v) {
  sibling::SiblingOptions o;
  o.single = v.variant == Variant::SingleHunk || v.variant == Variant::Incremental;
  o.use_history = v.variant != Variant::MinusHistory;
  if (v.variant == Variant::FixedContext) {
    o.context_mode = sibling::ContextMode::FixedWindow;
    o.window = v.window;
  }
  return o;
}

std::string_view status_name(RunStatus s) {
  switch (s) {
    case RunStatus::Plausible: return "plausible";
    case RunStatus::Exhausted: return "exhausted";
    case RunStatus::Timeout: return "timeout";
    case RunStatus::NoFailingTest: return "no_failing_test";
  }
  return "?";
}

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Session {
  const minilang::Program& project;
  const history::Lineage* lineage;
  const RepairConfig& cfg;
  VariantSpec variant;
  sibling::SiblingOptions options;
  Clock::time_point start = Clock::now();
  json report = json::object();
  json locations = json::array();
  json violations = json::array();
  std::map<std::string, int> outcomes{{"plausible", 0}, {"failed_failing", 0},
                                      {"failed_regression", 0}, {"type_error", 0}};
  std::size_t enumerated = 0;
  std::size_t validated = 0;
  std::size_t duplicates = 0;
  std::set<std::string> seen_patches;
  double validation_seconds = 0.0;

  bool timed_out() const { return seconds_since(start) > cfg.timeout_seconds; }

  void record_violations(const std::string& where, const std::vector<std::string>& list) {
    for (const auto& v : list) violations.push_back(where + ": " + v);
  }
};

std::string patch_key(const std::vector<ConcreteEdit>& edits) {
  std::string key;
  for (const auto& e : edits) {
    key += e.stmt.to_string();
    key += e.kind == EditKind::WrapGuard ? "|guard|" : "|replace|";
    for (std::size_t p : e.path) key += std::to_string(p) + ".";
    key += minilang::unparse_expression(*e.expr);
    key += "\n";
  }
  return key;
}

Patch make_patch(const minilang::Program& original, const std::string& schema,
                 const PatchedProgram& patched) {
  Patch p;
  p.schema = schema;
  p.hunks = patched.hunks;
  for (const auto& [file, text] : patched.texts) {
    const auto* ast = original.file(file);
    const std::string before = ast != nullptr ? minilang::unparse(*ast) : std::string();
    if (before == text) continue;
    p.before_texts[file] = before;
    p.after_texts[file] = text;
  }
  return p;
}

sibling::SiblingGroup drop_members(const sibling::SiblingGroup& g, const std::vector<std::size_t>& bad) {
  sibling::SiblingGroup out;
  for (std::size_t i = 0; i < g.members.size(); ++i) {
    if (i == 0 || std::find(bad.begin(), bad.end(), i) == bad.end()) out.members.push_back(g.members[i]);
  }
  return out;
}

json group_json(const sibling::SiblingGroup& g) {
  json members = json::array();
  for (const auto& m : g.members) {
    members.push_back({{"stmt", m.stmt.to_string()},
                       {"provenance", std::string(sibling::provenance_name(m.provenance))},
                       {"zeta", m.zeta},
                       {"xi", m.xi}});
  }
  return members;
}

// Abstracts the group, dropping members that cannot share the reference's
// abstract tree until the rest do.
std::optional<AbstractHunk> abstract_with_fallback(sibling::SiblingGroup& group, json& loc) {
  for (;;) {
    try {
      return abstract_group(group);
    } catch (const InconsistentMapping& e) {
      json dropped = json::array();
      for (std::size_t i : e.members()) dropped.push_back(group.members[i].stmt.to_string());
      loc["dropped_members"] = dropped;
      spdlog::debug("inconsistent mapping: {}", e.what());
      group = drop_members(group, e.members());
      if (group.members.empty()) return std::nullopt;
    }
  }
}

std::size_t count_for_group(const minilang::Program& project, const sibling::SiblingGroup& g,
                            const RepairConfig& cfg) {
  sibling::SiblingGroup copy = g;
  json scratch;
  auto hunk = abstract_with_fallback(copy, scratch);
  if (!hunk) return 0;
  const auto ing = collect_ingredients(*hunk, project);
  const auto ids = context_identifiers(copy.reference().context);
  return enumerate_candidates(*hunk, ing, project, ids, cfg.similarity, cfg.limits).size();
}

sibling::SiblingGroup singleton(const minilang::Program& project, const StmtRef& stmt,
                                const sibling::SiblingOptions& options) {
  sibling::SiblingGroup g;
  sibling::Member m;
  m.stmt = stmt;
  m.node = project.statement(stmt);
  m.context = sibling::context_function(options)(*m.node->enclosing_function(), *m.node);
  g.members.push_back(std::move(m));
  return g;
}

// Tries one location; returns the winning validation when plausible.
std::optional<std::pair<CandidatePatch, Validation>> try_location(
    Session& s, const faultloc::RankedLocation& loc, const std::vector<std::string>& failing,
    const faultloc::Spectrum& spectrum, json& lj) {
  auto group = sibling::identify_siblings(loc.stmt, spectrum, s.project, s.lineage, s.cfg.similarity,
                                          s.options);
  if (s.cfg.check_invariants) {
    s.record_violations(loc.stmt.to_string(), sibling::group_violations(group, spectrum, s.cfg.similarity));
    for (std::size_t i = 1; i < group.members.size(); ++i) {
      const auto& m = group.members[i];
      const auto sv = treesim::TreeView::statement(*group.reference().node);
      const auto mv = treesim::TreeView::statement(*m.node);
      const auto stmt_map = treesim::statement_similarity(*group.reference().node, *m.node, s.cfg.similarity);
      if (stmt_map.mapping) {
        s.record_violations(m.stmt.to_string(),
                            treesim::mapping_violations(*stmt_map.mapping, sv, mv, s.cfg.similarity));
      }
      const auto ctx_map = treesim::tree_similarity(context::context_tree(group.reference().context),
                                                    context::context_tree(m.context), s.cfg.similarity);
      if (ctx_map.mapping) {
        s.record_violations(m.stmt.to_string(),
                            treesim::mapping_violations(*ctx_map.mapping,
                                                        context::context_tree(group.reference().context),
                                                        context::context_tree(m.context), s.cfg.similarity));
      }
    }
  }
  lj["group"] = group_json(group);
  auto hunk = abstract_with_fallback(group, lj);
  if (!hunk) return std::nullopt;
  lj["group_size"] = group.size();
  if (s.cfg.check_invariants) s.record_violations(loc.stmt.to_string(), hunk_violations(*hunk));

  const auto ing = collect_ingredients(*hunk, s.project);
  const auto ids = context_identifiers(group.reference().context);
  auto cands = enumerate_candidates(*hunk, ing, s.project, ids, s.cfg.similarity, s.cfg.limits);
  lj["candidates_enumerated"] = cands.size();
  s.enumerated += cands.size();

  // Search-space counters: each member on its own, and their product.
  json per_location = json::array();
  double product = 1.0;
  for (const auto& m : group.members) {
    const auto n = count_for_group(s.project, singleton(s.project, m.stmt, s.options), s.cfg);
    per_location.push_back(n);
    product *= static_cast<double>(n);
  }
  lj["single_location_count"] = per_location.front();
  lj["per_location_counts"] = per_location;
  lj["per_location_product"] = product;

  if (s.cfg.check_invariants) {
    for (const auto& c : cands) s.record_violations(loc.stmt.to_string(), patch_violations(c, *hunk));
  }
  rank_candidates(cands, loc.score, s.cfg.weights);
  const auto retained = top_per_schema(cands, s.cfg.candidates_per_schema);
  lj["candidates_retained"] = retained.size();

  std::size_t validated_here = 0;
  json tried = json::array();
  for (const auto& c : retained) {
    if (s.timed_out()) break;
    const std::string key = patch_key(c.edits);
    if (!s.seen_patches.insert(key).second) {
      ++s.duplicates;
      continue;
    }
    const auto t0 = Clock::now();
    auto v = validate(s.project, c.edits, failing, s.cfg.max_steps);
    s.validation_seconds += seconds_since(t0);
    ++validated_here;
    ++s.validated;
    ++s.outcomes[std::string(outcome_name(v.outcome))];
    spdlog::debug("  #{} {} {} -> {}", c.rank, schema_name(c.schema), c.describe(*hunk),
                  outcome_name(v.outcome));
    if (v.outcome == Outcome::Plausible) {
      lj["candidates_validated"] = validated_here;
      lj["winner"] = {{"schema", std::string(schema_name(c.schema))},
                      {"abstract", c.describe(*hunk)},
                      {"rank", c.rank},
                      {"score", c.score}};
      return std::make_pair(c, std::move(v));
    }
  }
  lj["candidates_validated"] = validated_here;
  return std::nullopt;
}

json failing_list(const minilang::TestRun& run) {
  json a = json::array();
  for (const auto& n : run.failing_names()) a.push_back(n);
  return a;
}

void finish(Session& s, RepairResult& r) {
  s.report["status"] = std::string(status_name(r.status));
  s.report["variant"] = variant_name(s.variant);
  s.report["locations"] = s.locations;
  s.report["locations_tried"] = s.locations.size();
  s.report["candidates_enumerated"] = s.enumerated;
  s.report["candidates_validated"] = s.validated;
  s.report["duplicates_skipped"] = s.duplicates;
  s.report["outcomes"] = s.outcomes;
  s.report["config"] = {{"max_locations", s.cfg.max_locations},
                        {"candidates_per_schema", s.cfg.candidates_per_schema},
                        {"t1", s.cfg.similarity.t1},
                        {"t2", s.cfg.similarity.t2},
                        {"name_sim_threshold", s.cfg.similarity.name_sim_threshold},
                        {"timeout_seconds", s.cfg.timeout_seconds},
                        {"max_steps", s.cfg.max_steps}};
  if (s.cfg.check_invariants) s.report["invariant_violations"] = s.violations;
  if (r.patch) {
    s.report["patch"] = {{"schema", r.patch->schema}, {"hunks", r.patch->hunks.size()}};
  } else {
    s.report["patch"] = nullptr;
  }
  s.report["timing"] = {{"total_seconds", seconds_since(s.start)},
                        {"validation_seconds", s.validation_seconds}};
  r.report = std::move(s.report);
}

RepairResult run_grouped(Session& s) {
  RepairResult r;
  minilang::TestRunOptions opts;
  opts.with_coverage = true;
  opts.max_steps = s.cfg.max_steps;
  const auto run = minilang::run_tests(s.project, opts);
  s.report["tests"] = {{"total", run.results.size()}, {"failing", failing_list(run)}};
  faultloc::Spectrum spectrum;
  try {
    spectrum = faultloc::build_spectrum(s.project, run);
  } catch (const faultloc::NoFailingTest&) {
    r.status = RunStatus::NoFailingTest;
    finish(s, r);
    return r;
  }
  const auto failing = run.failing_names();
  const auto ranked = faultloc::ochiai_rank(spectrum, s.cfg.max_locations);
  r.status = RunStatus::Exhausted;
  for (const auto& loc : ranked) {
    if (loc.score <= 0.0) break;
    if (s.timed_out()) {
      r.status = RunStatus::Timeout;
      break;
    }
    json lj = {{"reference", loc.stmt.to_string()}, {"rank", loc.rank}, {"score", loc.score}};
    spdlog::debug("location #{} {} (score {:.3f})", loc.rank, loc.stmt.to_string(), loc.score);
    auto won = try_location(s, loc, failing, spectrum, lj);
    s.locations.push_back(std::move(lj));
    if (won) {
      r.status = RunStatus::Plausible;
      r.patch = make_patch(s.project, std::string(schema_name(won->first.schema)), *won->second.patched);
      break;
    }
    if (s.timed_out()) {
      r.status = RunStatus::Timeout;
      break;
    }
  }
  finish(s, r);
  return r;
}

// Patches one location at a time, keeping a patch when the number of failing
// tests strictly drops, and relocalizing after each kept patch.
RepairResult run_incremental(Session& s) {
  RepairResult r;
  minilang::Program current = s.project.clone();
  std::vector<Hunk> hunks;
  std::vector<std::string> schemas;
  std::map<std::string, std::string> after_texts;
  json steps = json::array();
  bool first = true;
  r.status = RunStatus::Exhausted;
  while (true) {
    minilang::TestRunOptions opts;
    opts.with_coverage = true;
    opts.max_steps = s.cfg.max_steps;
    const auto run = minilang::run_tests(current, opts);
    if (first) s.report["tests"] = {{"total", run.results.size()}, {"failing", failing_list(run)}};
    faultloc::Spectrum spectrum;
    try {
      spectrum = faultloc::build_spectrum(current, run);
    } catch (const faultloc::NoFailingTest&) {
      r.status = first ? RunStatus::NoFailingTest : RunStatus::Plausible;
      break;
    }
    first = false;
    const std::size_t failing_now = run.failing_count();
    const auto failing = run.failing_names();
    const auto ranked = faultloc::ochiai_rank(spectrum, s.cfg.max_locations);
    bool progressed = false;
    for (const auto& loc : ranked) {
      if (loc.score <= 0.0 || s.timed_out()) break;
      json lj = {{"reference", loc.stmt.to_string()}, {"rank", loc.rank}, {"score", loc.score}};
      auto group = singleton(current, loc.stmt, s.options);
      auto hunk = abstract_with_fallback(group, lj);
      if (!hunk) {
        s.locations.push_back(std::move(lj));
        continue;
      }
      const auto ing = collect_ingredients(*hunk, current);
      const auto ids = context_identifiers(group.reference().context);
      auto cands = enumerate_candidates(*hunk, ing, current, ids, s.cfg.similarity, s.cfg.limits);
      lj["candidates_enumerated"] = cands.size();
      s.enumerated += cands.size();
      rank_candidates(cands, loc.score, s.cfg.weights);
      std::size_t validated_here = 0;
      for (const auto& c : top_per_schema(cands, s.cfg.candidates_per_schema)) {
        if (s.timed_out()) break;
        const auto t0 = Clock::now();
        auto patched = apply_patch(current, c.edits);
        ++validated_here;
        ++s.validated;
        if (!patched) {
          ++s.outcomes["type_error"];
          s.validation_seconds += seconds_since(t0);
          continue;
        }
        minilang::TestRunOptions all;
        all.max_steps = s.cfg.max_steps;
        const auto after = minilang::run_tests(patched->program, all);
        s.validation_seconds += seconds_since(t0);
        if (after.failing_count() < failing_now) {
          ++s.outcomes[after.all_pass() ? "plausible" : "failed_regression"];
          steps.push_back({{"stmt", loc.stmt.to_string()},
                           {"schema", std::string(schema_name(c.schema))},
                           {"failing_before", failing_now},
                           {"failing_after", after.failing_count()}});
          for (auto& h : patched->hunks) hunks.push_back(h);
          schemas.emplace_back(schema_name(c.schema));
          after_texts = patched->texts;
          current = std::move(patched->program);
          progressed = true;
          break;
        }
        ++s.outcomes[after.failing_count() == failing_now ? "failed_failing" : "failed_regression"];
      }
      lj["candidates_validated"] = validated_here;
      s.locations.push_back(std::move(lj));
      if (progressed) break;
    }
    if (!progressed) {
      r.status = s.timed_out() ? RunStatus::Timeout : RunStatus::Exhausted;
      break;
    }
  }
  s.report["incremental_steps"] = steps;
  if (r.status == RunStatus::Plausible) {
    Patch p;
    for (std::size_t i = 0; i < schemas.size(); ++i) p.schema += (i ? "+" : "") + schemas[i];
    p.hunks = std::move(hunks);
    for (const auto& [file, text] : after_texts) {
      const auto* ast = s.project.file(file);
      const std::string before = ast != nullptr ? minilang::unparse(*ast) : std::string();
      if (before == text) continue;
      p.before_texts[file] = before;
      p.after_texts[file] = text;
    }
    r.patch = std::move(p);
  }
  finish(s, r);
  return r;
}

}  // namespace

RepairResult repair_loop(const minilang::Program& project, const history::Lineage* lineage,
                         const RepairConfig& cfg, const VariantSpec& variant) {
  Session s{project, lineage, cfg, variant, sibling_options(variant)};
  if (variant.variant == Variant::Incremental) return run_incremental(s);
  return run_grouped(s);
}

std::size_t single_location_count(const minilang::Program& project, const StmtRef& stmt,
                                  const RepairConfig& cfg, const sibling::SiblingOptions& options) {
  return count_for_group(project, singleton(project, stmt, options), cfg);
}

json patch_json(const Patch& p) {
  json hunks = json::array();
  for (const auto& h : p.hunks) {
    hunks.push_back({{"stmt", h.stmt.to_string()}, {"before", h.before}, {"after", h.after}});
  }
  return {{"schema", p.schema}, {"hunks", hunks}};
}

std::string patch_diff(const Patch& p) {
  std::string out;
  for (const auto& [file, before] : p.before_texts) {
    out += unified_diff(before, p.after_texts.at(file), "a/" + file, "b/" + file);
  }
  return out;
}

}  // namespace hydra::repair

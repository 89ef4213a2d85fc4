#include "hydra/sibling/sibling.hpp"

#include <algorithm>
#include <set>

namespace hydra::sibling {

std::string_view provenance_name(Provenance p) {
  switch (p) {
    case Provenance::Spectrum: return "spectrum";
    case Provenance::Similarity: return "similarity";
    case Provenance::HistoryDiscovered: return "history-discovered";
  }
  return "?";
}

std::vector<StmtRef> SiblingGroup::refs() const {
  std::vector<StmtRef> out;
  for (const auto& m : members) out.push_back(m.stmt);
  return out;
}

history::ContextFn context_function(const SiblingOptions& options) {
  if (options.context_mode == ContextMode::FixedWindow) {
    const int w = options.window;
    return [w](const Node& fn, const Node& stmt) { return context::fixed_window_context(fn, stmt, w); };
  }
  return [](const Node& fn, const Node& stmt) { return context::extract_context(fn, stmt); };
}

std::vector<Step1Candidate> step1_similar_locations(const StmtRef& ref,
                                                    const faultloc::Spectrum& spectrum,
                                                    const Program& project,
                                                    const treesim::SimilarityConfig& cfg) {
  std::vector<Step1Candidate> out;
  const Node* r = project.statement(ref);
  if (r == nullptr) return out;
  for (const auto& stmt : spectrum.failing_covered()) {
    if (stmt == ref) continue;
    const Node* s = project.statement(stmt);
    if (s == nullptr) continue;
    auto m = treesim::statement_similarity(*r, *s, cfg);
    if (!m.mapping) continue;
    out.push_back({stmt, s, m.zeta, std::move(*m.mapping)});
  }
  return out;
}

std::vector<Step2Survivor> step2_context_filter(const StmtRef& ref,
                                                const std::vector<Step1Candidate>& candidates,
                                                const Program& project,
                                                const treesim::SimilarityConfig& cfg,
                                                const history::ContextFn& context_of) {
  std::vector<Step2Survivor> out;
  const Node* r = project.statement(ref);
  if (r == nullptr || candidates.empty()) return out;
  const auto ref_ctx = context_of(*r->enclosing_function(), *r);
  for (const auto& c : candidates) {
    auto ctx = context_of(*c.node->enclosing_function(), *c.node);
    auto m = context::contexts_similar(ref_ctx, ctx, c.mapping, cfg);
    if (!m.similar) continue;
    out.push_back({c, m.zeta, std::move(ctx), std::move(*m.combined)});
  }
  return out;
}

namespace {

Member reference_member(const StmtRef& ref, const Node& node, const history::ContextFn& context_of) {
  Member m;
  m.stmt = ref;
  m.node = &node;
  m.provenance = Provenance::Spectrum;
  m.context = context_of(*node.enclosing_function(), node);
  // Identity over the statement and its context.
  std::set<const Node*> seen;
  for (const Node* s : m.context.members) {
    treesim::TreeView v = treesim::TreeView::statement(*s);
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (seen.insert(v.node(i)).second) m.mapping.pairs.emplace_back(v.node(i), v.node(i));
    }
  }
  return m;
}

}  // namespace

SiblingGroup step3_history_revision(const StmtRef& ref, const std::vector<Step2Survivor>& survivors,
                                    const history::Lineage* lineage, const Program& project,
                                    const treesim::SimilarityConfig& cfg,
                                    const history::ContextFn& context_of) {
  SiblingGroup g;
  const Node* r = project.statement(ref);
  if (r == nullptr) return g;
  g.members.push_back(reference_member(ref, *r, context_of));
  std::vector<Member> others;
  for (const auto& s : survivors) {
    Member m;
    m.stmt = s.candidate.stmt;
    m.node = s.candidate.node;
    m.provenance = Provenance::Similarity;
    m.statement_zeta = s.candidate.zeta;
    m.zeta = s.zeta;
    m.context = s.context;
    m.mapping = s.mapping;
    others.push_back(std::move(m));
  }
  if (lineage != nullptr) {
    std::vector<StmtRef> group{ref};
    for (const auto& m : others) group.push_back(m.stmt);
    const auto ref_ctx = g.members.front().context;
    for (const auto& found : history::discover_cochanged(*lineage, project, ref, group, cfg, context_of)) {
      const Node* s = project.statement(found);
      auto sm = treesim::statement_similarity(*r, *s, cfg);
      auto ctx = context_of(*s->enclosing_function(), *s);
      auto cm = context::contexts_similar(ref_ctx, ctx, *sm.mapping, cfg);
      Member m;
      m.stmt = found;
      m.node = s;
      m.provenance = Provenance::HistoryDiscovered;
      m.statement_zeta = sm.zeta;
      m.zeta = cm.zeta;
      m.context = std::move(ctx);
      m.mapping = std::move(*cm.combined);
      others.push_back(std::move(m));
    }
    const auto& href = lineage->history_of(ref);
    g.members.front().xi = 1.0;
    for (auto& m : others) m.xi = history::history_similarity(href, lineage->history_of(m.stmt));
    others.erase(std::remove_if(others.begin(), others.end(),
                                [&](const Member& m) { return m.xi <= cfg.t2; }),
                 others.end());
  }
  std::sort(others.begin(), others.end(),
            [](const Member& a, const Member& b) { return a.stmt < b.stmt; });
  for (auto& m : others) g.members.push_back(std::move(m));
  return g;
}

SiblingGroup identify_siblings(const StmtRef& ref, const faultloc::Spectrum& spectrum,
                               const Program& project, const history::Lineage* lineage,
                               const treesim::SimilarityConfig& cfg, const SiblingOptions& options) {
  const auto context_of = context_function(options);
  if (options.single) return step3_history_revision(ref, {}, nullptr, project, cfg, context_of);
  const auto c1 = step1_similar_locations(ref, spectrum, project, cfg);
  const auto c2 = step2_context_filter(ref, c1, project, cfg, context_of);
  return step3_history_revision(ref, c2, options.use_history ? lineage : nullptr, project, cfg,
                                context_of);
}

std::vector<std::string> group_violations(const SiblingGroup& group,
                                          const faultloc::Spectrum& spectrum,
                                          const treesim::SimilarityConfig& cfg) {
  std::vector<std::string> out;
  if (group.members.empty()) {
    out.push_back("empty group");
    return out;
  }
  const auto& ref = group.reference();
  if (!spectrum.failing_covers(ref.stmt)) out.push_back("reference not in the failing spectrum");
  std::set<StmtRef> seen;
  for (const auto& m : group.members) {
    if (!seen.insert(m.stmt).second) out.push_back("duplicate member " + m.stmt.to_string());
    if (m.node == nullptr) {
      out.push_back("member without node " + m.stmt.to_string());
      continue;
    }
    if (&m == &ref) continue;
    if (!(m.zeta > cfg.t1)) out.push_back("context similarity at most t1 for " + m.stmt.to_string());
    if (!(m.xi > cfg.t2)) out.push_back("history similarity at most t2 for " + m.stmt.to_string());
    std::set<const Node*> l;
    std::set<const Node*> r;
    for (const auto& [a, b] : m.mapping.pairs) {
      if (!l.insert(a).second || !r.insert(b).second) {
        out.push_back("mapping not one-to-one for " + m.stmt.to_string());
        break;
      }
      if (!treesim::kind_compatible(*a, *b) || !treesim::type_compatible(*a, *b, cfg.records)) {
        out.push_back("incompatible mapped pair for " + m.stmt.to_string());
        break;
      }
    }
  }
  return out;
}

}  // namespace hydra::sibling

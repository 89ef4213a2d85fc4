#include <gtest/gtest.h>

#include "corpus.hpp"
#include "hydra/faultloc/spectrum.hpp"
#include "hydra/minilang/interpreter.hpp"
#include "hydra/sibling/sibling.hpp"

using namespace hydra::sibling;
using hydra::driver::open_workspace;
using hydra::driver::Workspace;
using hydra::minilang::StmtRef;

namespace {

hydra::faultloc::Spectrum spectrum_of(const Program& p) {
  hydra::minilang::TestRunOptions opts;
  opts.with_coverage = true;
  return hydra::faultloc::build_spectrum(p, hydra::minilang::run_tests(p, opts));
}

std::vector<std::string> refs_of(const SiblingGroup& g) {
  std::vector<std::string> out;
  for (const auto& r : g.refs()) out.push_back(r.to_string());
  std::sort(out.begin(), out.end());
  return out;
}

struct Case {
  Workspace ws;
  hydra::faultloc::Spectrum spectrum;
  StmtRef reference;
  std::vector<std::string> expected;
};

Case open_case(const std::string& name, bool with_history = true) {
  Case c{open_workspace(hydra::testing::run_config(name, with_history)), {}, {}, {}};
  c.spectrum = spectrum_of(c.ws.project);
  const auto j = hydra::testing::case_json(name);
  c.reference = StmtRef::parse(j["reference"].get<std::string>());
  for (const auto& m : j["group"]) c.expected.push_back(m.get<std::string>());
  std::sort(c.expected.begin(), c.expected.end());
  return c;
}

SiblingGroup group_of(const Case& c, const SiblingOptions& o = {}) {
  return identify_siblings(c.reference, c.spectrum, c.ws.project, c.ws.lineage_ptr(),
                           c.ws.config.similarity, o);
}

}  // namespace

TEST(Siblings, BrentHistoryDiscovered) {
  const Case c = open_case("brent");
  const auto g = group_of(c);
  EXPECT_EQ(refs_of(g), c.expected);
  EXPECT_EQ(g.reference().stmt, c.reference);
  EXPECT_EQ(g.reference().provenance, Provenance::Spectrum);
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g.members[1].provenance, Provenance::HistoryDiscovered);
  EXPECT_DOUBLE_EQ(g.members[1].xi, 1.0);
  // The first return is not failing-covered, so steps 1 and 2 cannot see it.
  EXPECT_TRUE(step1_similar_locations(c.reference, c.spectrum, c.ws.project, c.ws.config.similarity).empty());
}

TEST(Siblings, BrentWithoutHistoryIsSingle) {
  const Case c = open_case("brent", false);
  EXPECT_EQ(group_of(c).size(), 1u);
}

TEST(Siblings, TwinsStep1) {
  const Case c = open_case("twins");
  const auto s1 = step1_similar_locations(c.reference, c.spectrum, c.ws.project, c.ws.config.similarity);
  ASSERT_EQ(s1.size(), 1u);
  EXPECT_EQ(s1[0].stmt.to_string(), "twins.mini:maxIndex:4");
  EXPECT_GT(s1[0].zeta, c.ws.config.similarity.t1);
  const auto g = group_of(c);
  EXPECT_EQ(refs_of(g), c.expected);
  EXPECT_EQ(g.members[1].provenance, Provenance::Similarity);
}

TEST(Siblings, TrioHasThreeMembers) {
  const Case c = open_case("trio");
  const auto g = group_of(c);
  EXPECT_EQ(refs_of(g), c.expected);
  EXPECT_EQ(g.size(), 3u);
  bool discovered = false;
  for (const auto& m : g.members) discovered |= m.provenance == Provenance::HistoryDiscovered;
  EXPECT_TRUE(discovered);
}

TEST(Siblings, FalseFriendRemovedByHistory) {
  const Case c = open_case("false-friend");
  const auto s1 = step1_similar_locations(c.reference, c.spectrum, c.ws.project, c.ws.config.similarity);
  const auto s2 = step2_context_filter(c.reference, s1, c.ws.project, c.ws.config.similarity,
                                       context_function({}));
  ASSERT_EQ(s2.size(), 1u);
  EXPECT_EQ(s2[0].candidate.stmt.to_string(), "badges.mini:rankLevel:2");
  const auto& h = c.ws.lineage->history_of(s2[0].candidate.stmt);
  const auto& r = c.ws.lineage->history_of(c.reference);
  EXPECT_DOUBLE_EQ(hydra::history::history_similarity(r, h), 0.0);
  EXPECT_EQ(refs_of(group_of(c)), c.expected);
  const Case bare = open_case("false-friend", false);
  EXPECT_EQ(group_of(bare).size(), 2u);
}

TEST(Siblings, HistoryThresholdIsStrict) {
  const Case c = open_case("history-noise");
  const auto& cfg = c.ws.config.similarity;
  // rankOf is not failing-covered; only history discovery proposes it.
  const auto found = hydra::history::discover_cochanged(*c.ws.lineage, c.ws.project, c.reference, {c.reference},
                                                        cfg, context_function({}));
  ASSERT_EQ(found, (std::vector<StmtRef>{{"scores.mini", "rankOf", 2}}));
  const double xi = hydra::history::history_similarity(c.ws.lineage->history_of(c.reference),
                                                       c.ws.lineage->history_of(found[0]));
  EXPECT_DOUBLE_EQ(xi, cfg.t2);
  EXPECT_EQ(refs_of(group_of(c)), c.expected);
}

TEST(Siblings, ContextDropsDistractor) {
  const Case c = open_case("distractor");
  const auto s1 = step1_similar_locations(c.reference, c.spectrum, c.ws.project, c.ws.config.similarity);
  EXPECT_FALSE(s1.empty());
  const auto s2 = step2_context_filter(c.reference, s1, c.ws.project, c.ws.config.similarity,
                                       context_function({}));
  EXPECT_TRUE(s2.empty());
  EXPECT_EQ(refs_of(group_of(c)), c.expected);
}

TEST(Siblings, UncoveredTwinIgnored) {
  const Case c = open_case("uncovered-twin");
  EXPECT_TRUE(step1_similar_locations(c.reference, c.spectrum, c.ws.project, c.ws.config.similarity).empty());
  EXPECT_EQ(group_of(c).size(), 1u);
}

TEST(Siblings, SingleOption) {
  const Case c = open_case("twins");
  SiblingOptions o;
  o.single = true;
  EXPECT_EQ(group_of(c, o).size(), 1u);
}

TEST(Siblings, Idempotent) {
  for (const auto& name : hydra::testing::corpus_cases()) {
    const Case c = open_case(name);
    const auto g = group_of(c);
    const auto h = group_of(c);
    ASSERT_EQ(g.size(), h.size()) << name;
    for (std::size_t i = 0; i < g.size(); ++i) {
      EXPECT_EQ(g.members[i].stmt, h.members[i].stmt) << name;
      EXPECT_EQ(g.members[i].provenance, h.members[i].provenance) << name;
      EXPECT_DOUBLE_EQ(g.members[i].zeta, h.members[i].zeta) << name;
      EXPECT_DOUBLE_EQ(g.members[i].xi, h.members[i].xi) << name;
    }
  }
}

// Members come from step 2 survivors or from history discovery, never from
// candidates step 2 rejected.
TEST(Siblings, MonotoneGating) {
  for (const auto& name : hydra::testing::corpus_cases()) {
    const Case c = open_case(name);
    const auto& cfg = c.ws.config.similarity;
    const auto s1 = step1_similar_locations(c.reference, c.spectrum, c.ws.project, cfg);
    const auto s2 = step2_context_filter(c.reference, s1, c.ws.project, cfg, context_function({}));
    std::set<StmtRef> survivors;
    for (const auto& s : s2) survivors.insert(s.candidate.stmt);
    for (const auto& m : group_of(c).members) {
      if (m.stmt == c.reference) continue;
      if (m.provenance == Provenance::HistoryDiscovered) continue;
      EXPECT_TRUE(survivors.count(m.stmt)) << name << " " << m.stmt.to_string();
    }
  }
}

TEST(Siblings, NoHistoryMeansVacuousXi) {
  const Case c = open_case("twins");
  ASSERT_EQ(c.ws.lineage_ptr(), nullptr);
  for (const auto& m : group_of(c).members) EXPECT_DOUBLE_EQ(m.xi, 1.0);
}

TEST(Siblings, InvariantsHoldOnCorpus) {
  for (const auto& name : hydra::testing::corpus_cases()) {
    const Case c = open_case(name);
    for (const auto& loc : hydra::faultloc::ochiai_rank(c.spectrum, 10)) {
      if (loc.score <= 0.0) continue;
      for (const auto& opts : {SiblingOptions{}, SiblingOptions{ContextMode::FixedWindow, 1, true, false}}) {
        const auto g = identify_siblings(loc.stmt, c.spectrum, c.ws.project, c.ws.lineage_ptr(),
                                         c.ws.config.similarity, opts);
        const auto violations = group_violations(g, c.spectrum, c.ws.config.similarity);
        EXPECT_TRUE(violations.empty()) << name << " " << loc.stmt.to_string() << ": "
                                        << (violations.empty() ? "" : violations.front());
        EXPECT_EQ(g.reference().stmt, loc.stmt);
        const auto refs = g.refs();
        std::set<StmtRef> unique(refs.begin(), refs.end());
        EXPECT_EQ(unique.size(), g.size());
      }
    }
  }
}

TEST(Siblings, ProvenanceNames) {
  EXPECT_EQ(provenance_name(Provenance::Spectrum), "spectrum");
  EXPECT_EQ(provenance_name(Provenance::Similarity), "similarity");
  EXPECT_EQ(provenance_name(Provenance::HistoryDiscovered), "history-discovered");
}

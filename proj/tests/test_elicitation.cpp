#include <gtest/gtest.h>

#include <random>

#include "ahp/elicitation.hpp"
#include "support/paper_data.hpp"

using namespace ahp;
using namespace ahp::testing;

namespace {

CandidatePool paper_pool() {
  CandidatePool p{"criteria", "", {}, {}};
  for (const auto& [expert, labels] : initial_criteria())
    for (const auto& l : labels) p.items.push_back({l, expert});
  return p;
}

CandidatePool pool_of(std::vector<std::string> labels) {
  CandidatePool p{"criteria", "", {}, {}};
  for (std::size_t i = 0; i < labels.size(); ++i) p.items.push_back({labels[i], "e" + std::to_string(i)});
  return p;
}

ScoreBallot ballot(const std::string& expert, const CandidatePool& p, std::vector<int> s) {
  ScoreBallot b{expert, {}};
  for (std::size_t i = 0; i < s.size(); ++i) b.scores.emplace_back(p.items[i].label, s[i]);
  return b;
}

}  // namespace

TEST(NormalizeLabel, Rules) {
  EXPECT_EQ(normalize_label("Employee  Training "), "employee training");
  EXPECT_EQ(normalize_label("Access Control"), normalize_label("access control"));
  EXPECT_NE(normalize_label("Communication Protocols"), normalize_label("Communication Protocol"));
  EXPECT_EQ(normalize_label("\tA\n b "), "a b");
  EXPECT_THROW(normalize_label("   "), DataError);
  EXPECT_THROW(normalize_label(""), DataError);
}

TEST(Dedupe, ExactMatchOnlyRemovesTheRepeatedLabel) {
  auto p = paper_pool();
  ASSERT_EQ(p.items.size(), 49u);
  auto d = dedupe(p);
  EXPECT_EQ(d.items.size(), 48u);
  ASSERT_EQ(d.removed.size(), 1u);
  EXPECT_EQ(d.removed[0].label, "Communication Protocols");
  EXPECT_EQ(d.removed[0].proposer, "dr-yara-singh");
}

TEST(Dedupe, CuratedAliasesReachFortyFive) {
  auto d = dedupe(paper_pool(), make_aliases(paper_duplicate_aliases()));
  EXPECT_EQ(d.items.size(), 45u);
  std::vector<std::string> removed;
  for (const auto& r : d.removed) removed.push_back(r.label);
  EXPECT_EQ(removed, (std::vector<std::string>{"Employee Training", "Access Control", "Physical Security",
                                                "Communication Protocols"}));
  for (const auto& s : paper_selected_criteria())
    EXPECT_NE(std::find(d.labels().begin(), d.labels().end(), s), d.labels().end()) << s;
}

TEST(Dedupe, AliasWithoutTargetKeepsItem) {
  auto p = pool_of({"Employee Training", "Other"});
  EXPECT_EQ(dedupe(p, make_aliases(paper_duplicate_aliases())).items.size(), 2u);
}

TEST(Dedupe, DistinctIsIdentityAndKeepFirst) {
  auto p = pool_of({"a", "b", "c"});
  EXPECT_EQ(dedupe(p).items, p.items);
  CandidatePool three{"criteria", "", {{"Audit Trails", "x"}, {"audit trails", "y"}, {"AUDIT  TRAILS", "z"}}, {}};
  auto d = dedupe(three);
  ASSERT_EQ(d.items.size(), 1u);
  EXPECT_EQ(d.items[0].proposer, "x");
  EXPECT_EQ(d.removed.size(), 2u);
}

TEST(Dedupe, Idempotent) {
  const auto aliases = make_aliases(paper_duplicate_aliases());
  auto once = dedupe(paper_pool(), aliases);
  EXPECT_EQ(dedupe(once, aliases), once);
}

TEST(Tally, Sums) {
  auto p = pool_of({"only"});
  auto t = tally({ballot("a", p, {5}), ballot("b", p, {7}), ballot("c", p, {9})}, p);
  EXPECT_EQ(t.total_of("only"), 21);

  std::vector<ScoreBallot> all9;
  for (int e = 0; e < 7; ++e) all9.push_back(ballot("e" + std::to_string(e), p, {9}));
  EXPECT_EQ(tally(all9, p).total_of("only"), 63);
}

TEST(Tally, TieRecorded) {
  // Item x scored (3, 3), item y scored (2, 4) by the two experts.
  auto p = pool_of({"x", "y"});
  auto t = tally({ballot("a", p, {3, 2}), ballot("b", p, {3, 4})}, p);
  EXPECT_EQ(t.total_of("x"), 6);
  EXPECT_EQ(t.total_of("y"), 6);
  EXPECT_EQ(select_top_n(t, 1), std::vector<std::string>{"x"});
}

TEST(Tally, BallotErrors) {
  auto p = pool_of({"x", "y"});
  EXPECT_THROW(tally({ballot("a", p, {3})}, p), DataError);
  EXPECT_THROW(tally({ballot("a", p, {3, 10})}, p), DataError);
  EXPECT_THROW(tally({ballot("a", p, {0, 1})}, p), DataError);
  ScoreBallot extra{"a", {{"x", 1}, {"y", 1}, {"z", 1}}};
  EXPECT_THROW(tally({extra}, p), DataError);
  ScoreBallot twice{"a", {{"x", 1}, {"X", 1}}};
  EXPECT_THROW(tally({twice}, p), DataError);
}

TEST(SelectTopN, TieBreakAndBounds) {
  TallyResult t{{{"B", 10}, {"A", 10}, {"C", 4}}, {}};
  EXPECT_EQ(select_top_n(t, 1), std::vector<std::string>{"A"});
  EXPECT_EQ(select_top_n(t, 3).size(), 3u);
  EXPECT_THROW(select_top_n(t, 4), DataError);
}

TEST(ElicitationProperties, TallyLinearityAndMonotonicity) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> score(1, 9);
  for (int c = 0; c < 300; ++c) {
    const int items = std::uniform_int_distribution<int>(3, 12)(rng);
    std::vector<std::string> labels;
    for (int i = 0; i < items; ++i) labels.push_back("item " + std::to_string(i));
    auto p = pool_of(labels);
    std::vector<ScoreBallot> ballots;
    for (int e = 0; e < 5; ++e) {
      std::vector<int> s(items);
      for (auto& x : s) x = score(rng);
      ballots.push_back(ballot("e" + std::to_string(e), p, s));
    }
    auto base = tally(ballots, p);
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, items)(rng);
    auto selected = select_top_n(base, n);
    ASSERT_EQ(selected, select_top_n(tally(ballots, p), n));  // determinism

    auto plus_ones = ballots;
    plus_ones.push_back(ballot("ones", p, std::vector<int>(items, 1)));
    auto lifted = tally(plus_ones, p);
    for (std::size_t i = 0; i < base.totals.size(); ++i) ASSERT_EQ(lifted.totals[i].total, base.totals[i].total + 1);

    // Raising a selected item's score keeps it selected.
    const auto& winner = selected[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)];
    auto raised = ballots;
    for (auto& [label, s] : raised[0].scores)
      if (label == winner && s < 9) ++s;
    auto after = select_top_n(tally(raised, p), n);
    ASSERT_NE(std::find(after.begin(), after.end(), winner), after.end());
  }
}

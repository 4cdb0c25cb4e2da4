#include <gtest/gtest.h>

#include <random>

#include "ahp/hierarchy.hpp"
#include "support/paper_data.hpp"

using namespace ahp;
using namespace ahp::testing;

namespace {

HierarchyTree small_tree(std::vector<double> sub_locals) {
  HierarchyTree t{"goal", {}, {}};
  t.criteria.push_back({"only", 1, std::nullopt, 1.0, std::nullopt});
  for (std::size_t i = 0; i < sub_locals.size(); ++i)
    t.criteria.push_back({"s" + std::to_string(i), 2, std::string("only"), sub_locals[i], std::nullopt});
  return t;
}

PriorityVector pv(std::vector<std::string> l, std::vector<double> w) { return {std::move(l), std::move(w)}; }

}  // namespace

TEST(ValidateTree, PaperTreeIsOk) {
  auto r = validate_tree(paper_tree(false), TreeShape{7, 3, 5});
  EXPECT_TRUE(r.ok()) << r.summary();
}

TEST(ValidateTree, OrphanNode) {
  auto t = paper_tree(false);
  t.criteria.push_back({"Lost Child", 2, std::string("Nonexistent Parent"), std::nullopt, std::nullopt});
  auto r = validate_tree(t);
  EXPECT_TRUE(r.has("orphan"));
  EXPECT_NE(r.summary().find("orphan node 'Lost Child'"), std::string::npos);
}

TEST(ValidateTree, ShapeMismatch) {
  auto t = paper_tree(false);
  std::erase_if(t.criteria, [](const CriterionNode& c) {
    return c.label == "Audit Trails" || c.parent == std::optional<std::string>("Audit Trails");
  });
  auto r = validate_tree(t, TreeShape{7, 3, 5});
  EXPECT_TRUE(r.has("shape"));
  EXPECT_FALSE(r.has("orphan"));
}

TEST(ValidateTree, DuplicatesAndDepth) {
  auto t = paper_tree(false);
  t.criteria.push_back({"Audit Frequency", 2, std::string("Audit Trails"), std::nullopt, std::nullopt});
  t.criteria.push_back({"Too Deep", 3, std::string("Audit Frequency"), std::nullopt, std::nullopt});
  auto r = validate_tree(t);
  EXPECT_TRUE(r.has("duplicate"));
  EXPECT_TRUE(r.has("depth"));
}

TEST(ValidateTree, UnnormalizedSiblings) {
  auto t = small_tree({0.5, 0.4});
  EXPECT_TRUE(validate_tree(t).has("priority_sum"));
  EXPECT_TRUE(validate_tree(small_tree({0.5, 0.5})).ok());
}

TEST(GlobalPriorities, ParentTimesChild) {
  HierarchyTree t{"g", {}, {}};
  t.criteria.push_back({"SLA", 1, std::nullopt, 0.264, std::nullopt});
  t.criteria.push_back({"Other", 1, std::nullopt, 0.736, std::nullopt});
  t.criteria.push_back({"Response Time", 2, std::string("SLA"), 0.427, std::nullopt});
  t.criteria.push_back({"Rest", 2, std::string("SLA"), 0.573, std::nullopt});
  auto g = global_leaf_priorities(t);
  EXPECT_NEAR(*g.find("Response Time", 2)->global_priority, 0.264 * 0.427, 1e-12);
  EXPECT_NEAR(*g.find("Response Time", 2)->global_priority, 0.1127, 1e-4);
  // childless top node is its own leaf
  EXPECT_NEAR(*g.find("Other", 1)->global_priority, 0.736, 1e-12);
}

TEST(GlobalPriorities, SingleTopKeepsLocals) {
  auto g = global_leaf_priorities(small_tree({0.5, 0.3, 0.2}));
  EXPECT_NEAR(*g.find("s0", 2)->global_priority, 0.5, 1e-15);
  EXPECT_NEAR(*g.find("s1", 2)->global_priority, 0.3, 1e-15);
  EXPECT_NEAR(*g.find("s2", 2)->global_priority, 0.2, 1e-15);
}

TEST(GlobalPriorities, PaperTreeRenormalized) {
  auto t = paper_tree();
  double raw = 0.0;
  for (const auto& [l, g] : paper_globals()) raw += g;
  EXPECT_NEAR(raw, 0.9998, 1e-9);
  auto g = global_leaf_priorities(t);
  double sum = 0.0;
  for (const auto* leaf : g.leaves()) {
    sum += *leaf->global_priority;
    EXPECT_NEAR(*leaf->global_priority, paper_global(leaf->label), 5e-5);
  }
  EXPECT_EQ(g.leaves().size(), 21u);
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(GlobalPriorities, MissingLocalIsAnError) {
  EXPECT_THROW(global_leaf_priorities(paper_tree(false)), DataError);
}

TEST(ScoreAlternatives, SingleLeaf) {
  auto s = score_alternatives({{"leaf", 1.0}}, {{"leaf", pv({"a", "b", "c"}, {0.2, 0.5, 0.3})}});
  EXPECT_DOUBLE_EQ(s.score_of("b"), 0.5);
  EXPECT_EQ(s.best(), "b");
}

TEST(ScoreAlternatives, IdenticalLocalsPassThrough) {
  auto v = pv({"a", "b", "c"}, {0.2, 0.5, 0.3});
  auto s = score_alternatives({{"l1", 0.1}, {"l2", 0.6}, {"l3", 0.3}}, {{"l1", v}, {"l2", v}, {"l3", v}});
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(s.scores[i], v.weights[i], 1e-15);
}

TEST(ScoreAlternatives, TieBreakIsLexicographic) {
  auto s = score_alternatives({{"l", 1.0}}, {{"l", pv({"zeta", "alpha", "mid"}, {0.4, 0.4, 0.2})}});
  EXPECT_EQ(s.labels[s.ranking[0]], "alpha");
  EXPECT_EQ(s.labels[s.ranking[1]], "zeta");
}

TEST(ScoreAlternatives, Mismatches) {
  auto v = pv({"a", "b"}, {0.5, 0.5});
  EXPECT_THROW(score_alternatives({{"l1", 0.5}, {"l2", 0.5}}, {{"l1", v}}), DataError);
  EXPECT_THROW(score_alternatives({{"l1", 0.5}, {"l2", 0.5}}, {{"l1", v}, {"l3", v}}), DataError);
  EXPECT_THROW(score_alternatives({{"l1", 0.5}, {"l2", 0.5}}, {{"l1", v}, {"l2", pv({"a", "c"}, {0.5, 0.5})}}),
               DataError);
}

TEST(ScoreAlternatives, Dominance) {
  auto v = pv({"a", "b", "c"}, {1.0, 0.0, 0.0});
  auto s = score_alternatives({{"l1", 0.7}, {"l2", 0.3}}, {{"l1", v}, {"l2", v}});
  EXPECT_NEAR(s.score_of("a"), 1.0, 1e-15);
}

// Random trees (<= 3 top, <= 2 sub, <= 4 alternatives) checked against a
// direct triple sum over top x sub x alternative written independently of
// global_leaf_priorities and score_alternatives.
TEST(ScoreAlternatives, MatchesDirectSummation) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  auto normalized = [&](std::size_t n) {
    std::vector<double> w(n);
    double s = 0.0;
    for (auto& x : w) s += (x = u(rng));
    for (auto& x : w) x /= s;
    return w;
  };
  for (int c = 0; c < 500; ++c) {
    const std::size_t tops = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    const std::size_t alts = std::uniform_int_distribution<std::size_t>(2, 4)(rng);
    std::vector<std::string> alt_labels;
    for (std::size_t a = 0; a < alts; ++a) alt_labels.push_back("alt" + std::to_string(a));
    HierarchyTree t{"g", {}, {}};
    const auto top_w = normalized(tops);
    std::vector<std::vector<double>> sub_w(tops);
    std::map<std::string, std::vector<double>> local_alt;
    for (std::size_t i = 0; i < tops; ++i) {
      const std::string top = "t" + std::to_string(i);
      t.criteria.push_back({top, 1, std::nullopt, top_w[i], std::nullopt});
      const std::size_t subs = std::uniform_int_distribution<std::size_t>(0, 2)(rng);
      sub_w[i] = subs == 0 ? std::vector<double>{} : normalized(subs);
      for (std::size_t k = 0; k < subs; ++k) {
        const std::string sub = top + "s" + std::to_string(k);
        t.criteria.push_back({sub, 2, top, sub_w[i][k], std::nullopt});
        local_alt[sub] = normalized(alts);
      }
      if (subs == 0) local_alt[top] = normalized(alts);
    }
    std::vector<double> oracle(alts, 0.0);
    for (std::size_t i = 0; i < tops; ++i) {
      const std::string top = "t" + std::to_string(i);
      if (sub_w[i].empty()) {
        for (std::size_t a = 0; a < alts; ++a) oracle[a] += top_w[i] * local_alt[top][a];
      }
      for (std::size_t k = 0; k < sub_w[i].size(); ++k)
        for (std::size_t a = 0; a < alts; ++a)
          oracle[a] += top_w[i] * sub_w[i][k] * local_alt[top + "s" + std::to_string(k)][a];
    }

    auto g = global_leaf_priorities(t);
    std::vector<LeafWeight> lw;
    std::vector<LeafAlternatives> la;
    for (const auto* leaf : g.leaves()) {
      lw.push_back({leaf->label, *leaf->global_priority});
      la.push_back({leaf->label, pv(alt_labels, local_alt[leaf->label])});
    }
    auto s = score_alternatives(lw, la);
    double total = 0.0;
    for (std::size_t a = 0; a < alts; ++a) {
      ASSERT_NEAR(s.scores[a], oracle[a], 1e-12);
      total += s.scores[a];
    }
    ASSERT_NEAR(total, 1.0, 1e-6);

    // Scaling every leaf weight rescales scores but keeps the ranking.
    for (auto& w : lw) w.global *= 3.5;
    auto scaled = score_alternatives(lw, la);
    ASSERT_EQ(scaled.ranking, s.ranking);
    for (std::size_t a = 0; a < alts; ++a) ASSERT_NEAR(scaled.scores[a], 3.5 * s.scores[a], 1e-12);
  }
}

TEST(ExportTree, OutlineFollowsListingStructure) {
  auto out = export_tree(paper_tree(false), TreeFormat::outline);
  EXPECT_EQ(out.find("Goal: " + kGoal + "\n- Social Engineering Awareness:\n    Training Program Effectiveness\n"
                     "    Awareness Session Regularity\n    Incident Reporting Protocol\n"
                     "- Physical Access Controls:\n"),
            0u);
  EXPECT_NE(out.find("Alternatives:\n- Cloud-Based Data Backup Solutions\n"), std::string::npos);
}

TEST(ExportTree, NoAlternativesSection) {
  auto t = paper_tree(false);
  t.alternatives.clear();
  EXPECT_EQ(export_tree(t, TreeFormat::outline).find("Alternatives:"), std::string::npos);
}

TEST(ExportTree, DeterministicGraph) {
  auto t = paper_tree();
  auto a = export_tree(t, TreeFormat::graph);
  EXPECT_EQ(a, export_tree(t, TreeFormat::graph));
  EXPECT_EQ(a.rfind("digraph ahp {", 0), 0u);
  EXPECT_NE(a.find("goal -> c0;"), std::string::npos);
  EXPECT_NE(a.find("c1 -> a0;"), std::string::npos);  // leaf -> alternative
  // 7 goal edges + 21 criterion edges + 21 * 5 alternative edges
  EXPECT_EQ(std::count(a.begin(), a.end(), '>'), 7 + 21 + 105);
}

TEST(TreeJson, RoundTrip) {
  auto t = global_leaf_priorities(paper_tree());
  nlohmann::json j = t;
  EXPECT_EQ(j.get<HierarchyTree>(), t);
  EXPECT_EQ(j["criteria"][1]["parent"], "Social Engineering Awareness");
}

#include <gtest/gtest.h>

#include <vector>

#include "ahp/matrix.hpp"
#include "ahp/matrix_csv.hpp"

using namespace ahp;

namespace {

PairwiseMatrix table1() { return csv::load_matrix(AHP_FIXTURE_DIR "/table1_aggregated_top.csv"); }
PairwiseMatrix table2() { return csv::load_matrix(AHP_FIXTURE_DIR "/table2_chen_se_awareness.csv"); }

PairwiseMatrix ones(std::size_t n) {
  std::vector<std::string> l;
  for (std::size_t i = 0; i < n; ++i) l.push_back("x" + std::to_string(i));
  return PairwiseMatrix(l, std::vector<double>(n * n, 1.0));
}

}  // namespace

TEST(Validate, Table2IsValid) { EXPECT_TRUE(validate_pairwise(table2()).ok()); }

TEST(Validate, ZeroEntryReportsCell) {
  PairwiseMatrix m({"a", "b", "c"}, {1, 0, 1, 1, 1, 1, 1, 1, 1});
  auto r = validate_pairwise(m);
  ASSERT_FALSE(r.ok());
  EXPECT_TRUE(r.has("positivity"));
  EXPECT_EQ(r.violations.front().message, "non-positive entry (1,2)");
  EXPECT_EQ(r.violations.front().cell, (std::pair<std::size_t, std::size_t>{1, 2}));
}

TEST(Validate, Table1ReciprocityDependsOnTolerance) {
  // Printed values are rounded: 1/1.319 = 0.7582 against a printed 0.756.
  EXPECT_TRUE(validate_pairwise(table1(), 0.01).ok());
  auto strict = validate_pairwise(table1(), 1e-6);
  EXPECT_FALSE(strict.ok());
  EXPECT_TRUE(strict.has("reciprocity"));
}

TEST(Validate, DiagonalMustBeOne) {
  PairwiseMatrix m({"a", "b"}, {2, 1, 1, 1});
  EXPECT_TRUE(validate_pairwise(m).has("diagonal"));
}

TEST(Construct, RejectsBadShapes) {
  EXPECT_THROW(PairwiseMatrix({"a"}, {1}), DataError);
  EXPECT_THROW(PairwiseMatrix({"a", "b"}, {1, 1, 1}), DataError);
  EXPECT_THROW(PairwiseMatrix({"a", "a"}, {1, 1, 1, 1}), DataError);
}

TEST(Aggregate, IdenticalCopiesReturnInput) {
  auto m = table2();
  std::vector<PairwiseMatrix> copies(5, m);
  for (auto method : {Aggregation::geometric, Aggregation::arithmetic}) {
    auto agg = aggregate(copies, method);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(agg(i, j), m(i, j), 1e-12);
  }
}

TEST(Aggregate, OppositeJudgmentsCancelGeometrically) {
  const double a = 7.0;
  auto m1 = PairwiseMatrix::from_upper({"p", "q"}, std::vector<double>{a});
  auto m2 = PairwiseMatrix::from_upper({"p", "q"}, std::vector<double>{1.0 / a});
  std::vector<PairwiseMatrix> ms{m1, m2};
  EXPECT_NEAR(aggregate(ms)(0, 1), 1.0, 1e-15);
}

TEST(Aggregate, GeometricVersusArithmetic) {
  auto m1 = PairwiseMatrix::from_upper({"p", "q"}, std::vector<double>{2.0});
  auto m2 = PairwiseMatrix::from_upper({"p", "q"}, std::vector<double>{8.0});
  std::vector<PairwiseMatrix> ms{m1, m2};
  EXPECT_NEAR(aggregate(ms, Aggregation::geometric)(0, 1), 4.0, 1e-12);
  EXPECT_NEAR(aggregate(ms, Aggregation::arithmetic)(0, 1), 5.0, 1e-12);
  EXPECT_EQ(aggregate(ms, Aggregation::geometric)(1, 1), 1.0);
}

TEST(Aggregate, Errors) {
  std::vector<PairwiseMatrix> none;
  EXPECT_THROW(aggregate(none), DataError);
  std::vector<PairwiseMatrix> mixed{ones(2), ones(3)};
  EXPECT_THROW(aggregate(mixed), DataError);
  std::vector<PairwiseMatrix> relabeled{PairwiseMatrix({"a", "b"}, {1, 1, 1, 1}),
                                        PairwiseMatrix({"b", "a"}, {1, 1, 1, 1})};
  EXPECT_THROW(aggregate(relabeled), DataError);
  std::vector<PairwiseMatrix> invalid{PairwiseMatrix({"a", "b"}, {1, 2, 2, 1})};
  EXPECT_THROW(aggregate(invalid), DataError);
}

TEST(Normalize, OnesGiveThirds) {
  auto n = normalize_columns(ones(3));
  for (double v : n.values) EXPECT_DOUBLE_EQ(v, 1.0 / 3.0);
}

TEST(Normalize, Table2FirstColumn) {
  // Column sum 1 + 1/2 + 1/3 = 11/6.
  auto n = normalize_columns(table2());
  EXPECT_NEAR(n(0, 0), 6.0 / 11.0, 1e-12);
  EXPECT_NEAR(n(1, 0), 3.0 / 11.0, 1e-12);
  EXPECT_NEAR(n(2, 0), 2.0 / 11.0, 1e-12);
}

TEST(Normalize, Table1LastColumn) {
  auto n = normalize_columns(table1());
  EXPECT_NEAR(n(6, 6), 1.0 / 3.783, 1e-12);
  EXPECT_NEAR(n(6, 6), 0.2644, 1e-4);
  for (std::size_t j = 0; j < 7; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < 7; ++i) s += n(i, j);
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
}

TEST(Priority, Table1) {
  const std::vector<double> expected{0.120, 0.131, 0.099, 0.096, 0.126, 0.164, 0.264};
  auto pv = priority_vector(table1());
  ASSERT_EQ(pv.size(), 7u);
  for (std::size_t i = 0; i < 7; ++i) EXPECT_NEAR(pv.weights[i], expected[i], 0.005);
  EXPECT_EQ(pv.labels.front(), "Social Engineering Awareness");
}

TEST(Priority, OnesAreUniform) {
  for (std::size_t n = 2; n <= 9; ++n) {
    auto pv = priority_vector(ones(n));
    for (double w : pv.weights) EXPECT_NEAR(w, 1.0 / static_cast<double>(n), 1e-15);
  }
}

TEST(Priority, Table2MatchesHandComputation) {
  // Frozen from an independent numpy evaluation of the column-normalize /
  // row-average rule: [0.53896104, 0.2972583, 0.16378066].
  auto pv = priority_vector(table2());
  EXPECT_NEAR(pv.weights[0], 0.539, 0.002);
  EXPECT_NEAR(pv.weights[1], 0.297, 0.002);
  EXPECT_NEAR(pv.weights[2], 0.164, 0.002);
  EXPECT_NEAR(pv.weights[0], 0.53896104, 1e-8);
  EXPECT_NEAR(pv.weights[1], 0.29725830, 1e-8);
  EXPECT_NEAR(pv.weights[2], 0.16378066, 1e-8);
}

TEST(LambdaMax, Consistent2x2) {
  auto m = PairwiseMatrix::from_upper({"a", "b"}, std::vector<double>{2.0});
  EXPECT_NEAR(lambda_max(m, priority_vector(m)), 2.0, 1e-12);
}

TEST(LambdaMax, Table1) {
  auto m = table1();
  EXPECT_NEAR(lambda_max(m, priority_vector(m)), 7.13, 0.05);
  EXPECT_NEAR(lambda_max(m, priority_vector(m)), 7.130408894, 1e-8);
}

TEST(LambdaMax, Table2WithRoundedWeights) {
  auto m = table2();
  PriorityVector w{m.labels(), {0.539, 0.297, 0.164}};
  // (A w)_i / w_i averaged by hand: 3.00921...
  EXPECT_NEAR(lambda_max(m, w), 3.009, 0.001);
}

TEST(LambdaMax, GuardsZeroWeightAndLabelMismatch) {
  auto m = table2();
  EXPECT_THROW(lambda_max(m, PriorityVector{m.labels(), {1.0, 0.0, 0.0}}), DataError);
  EXPECT_THROW(lambda_max(m, PriorityVector{{"x", "y", "z"}, {0.3, 0.3, 0.4}}), DataError);
}

TEST(Consistency, Table1) {
  auto [pv, r] = consistency(table1());
  EXPECT_NEAR(r.ci, 0.022, 0.002);
  EXPECT_NEAR(r.cr, 0.016, 0.004);
  EXPECT_DOUBLE_EQ(r.ri, 1.32);
  EXPECT_TRUE(r.consistent);
}

TEST(Consistency, Table2) {
  auto [pv, r] = consistency(table2());
  EXPECT_NEAR(r.ci, 0.0046043335, 1e-8);
  EXPECT_NEAR(r.cr, 0.0079385060, 1e-8);
  EXPECT_TRUE(r.consistent);
}

TEST(Consistency, PerfectMatrixHasZeroIndex) {
  std::vector<double> w{3.0, 1.5, 0.7, 2.2};
  auto [pv, r] = consistency(PairwiseMatrix::from_weights({"a", "b", "c", "d"}, w));
  EXPECT_NEAR(r.ci, 0.0, 1e-12);
  EXPECT_NEAR(r.cr, 0.0, 1e-12);
}

TEST(Consistency, TwoByTwoIsConsistentByConvention) {
  auto [pv, r] = consistency(PairwiseMatrix::from_upper({"a", "b"}, std::vector<double>{9.0}));
  EXPECT_EQ(r.ci, 0.0);
  EXPECT_EQ(r.cr, 0.0);
  EXPECT_TRUE(r.consistent);
}

TEST(Consistency, InconsistentMatrixIsFlagged) {
  // a > b (9), b > c (9), but c > a (9): strongly intransitive.
  auto m = PairwiseMatrix::from_upper({"a", "b", "c"}, std::vector<double>{9.0, 1.0 / 9.0, 9.0});
  auto [pv, r] = consistency(m);
  EXPECT_GE(r.cr, 0.1);
  EXPECT_FALSE(r.consistent);
}

TEST(Consistency, OrderOutsideTable) {
  std::vector<double> w(11, 1.0);
  std::vector<std::string> l;
  for (int i = 0; i < 11; ++i) l.push_back("x" + std::to_string(i));
  EXPECT_THROW(consistency(PairwiseMatrix::from_weights(l, w)), UnsupportedOrder);
}

TEST(RandomIndex, Table) {
  EXPECT_EQ(random_index(2), 0.0);
  EXPECT_EQ(random_index(3), 0.58);
  EXPECT_EQ(random_index(7), 1.32);
  EXPECT_EQ(random_index(10), 1.49);
  EXPECT_NEAR(0.022 / random_index(7), 0.017, 0.0005);
  EXPECT_THROW(random_index(0), UnsupportedOrder);
  EXPECT_THROW(random_index(11), UnsupportedOrder);
}

TEST(Csv, FractionsRoundTripBitExactly) {
  auto m = table2();
  auto text = csv::write_matrix(m, "Sub-criteria");
  EXPECT_NE(text.find("1/3"), std::string::npos);
  auto back = csv::read_matrix(text);
  EXPECT_EQ(back, m);
  EXPECT_EQ(back(2, 0), 1.0 / 3.0);
}

TEST(Csv, DecimalsRoundTripBitExactly) {
  auto m = table1();
  EXPECT_EQ(csv::read_matrix(csv::write_matrix(m)), m);
}

TEST(Csv, QuotedLabelsAndErrors) {
  auto m = csv::read_matrix("x,\"a, b\",c\n\"a, b\",1,2\nc,1/2,1\n");
  EXPECT_EQ(m.labels()[0], "a, b");
  EXPECT_THROW(csv::read_matrix("x,a,b\na,1,2\nb,1/2\n"), DataError);
  EXPECT_THROW(csv::read_matrix("x,a,b\na,1,two\nb,1/2,1\n"), DataError);
  EXPECT_THROW(csv::read_matrix("x,a,b\na,1,1/0\nb,1/2,1\n"), DataError);
}

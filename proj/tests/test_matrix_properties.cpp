#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ahp/matrix.hpp"
#include "support/generators.hpp"

using namespace ahp;
using namespace ahp::testing;

namespace {
constexpr int kCases = 1000;
}

TEST(MatrixProperties, ConsistentMatrixIsAFixedPoint) {
  std::mt19937_64 rng(11);
  for (int c = 0; c < kCases; ++c) {
    const auto n = random_order(rng);
    const auto w = random_weights(rng, n);
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    auto [pv, r] = consistency(PairwiseMatrix::from_weights(labels(n), w));
    for (std::size_t i = 0; i < n; ++i) ASSERT_NEAR(pv.weights[i], w[i] / total, 1e-9);
    ASSERT_NEAR(r.ci, 0.0, 1e-9);
    ASSERT_NEAR(r.cr, 0.0, 1e-9);
  }
}

TEST(MatrixProperties, PrioritiesAreNormalizedAndPositive) {
  std::mt19937_64 rng(12);
  for (int c = 0; c < kCases; ++c) {
    auto pv = priority_vector(random_saaty(rng, random_order(rng)));
    ASSERT_NEAR(pv.sum(), 1.0, 1e-9);
    ASSERT_GT(*std::min_element(pv.weights.begin(), pv.weights.end()), 0.0);
  }
}

TEST(MatrixProperties, LambdaMaxIsAtLeastOrder) {
  std::mt19937_64 rng(13);
  for (int c = 0; c < kCases; ++c) {
    const auto n = random_order(rng);
    auto m = random_saaty(rng, n);
    ASSERT_GE(lambda_max(m, priority_vector(m)), static_cast<double>(n) - 1e-9);
  }
}

TEST(MatrixProperties, GeometricAggregationKeepsReciprocity) {
  std::mt19937_64 rng(14);
  for (int c = 0; c < kCases; ++c) {
    const auto n = random_order(rng);
    const auto experts = std::uniform_int_distribution<int>(1, 9)(rng);
    std::vector<PairwiseMatrix> ms;
    for (int e = 0; e < experts; ++e) ms.push_back(random_saaty(rng, n));
    auto agg = aggregate(ms, Aggregation::geometric);
    for (std::size_t i = 0; i < n; ++i) {
      ASSERT_EQ(agg(i, i), 1.0);
      for (std::size_t j = i + 1; j < n; ++j) ASSERT_NEAR(agg(i, j) * agg(j, i), 1.0, 1e-12);
    }
  }
}

TEST(MatrixProperties, AggregationIsIdempotent) {
  std::mt19937_64 rng(15);
  for (int c = 0; c < kCases; ++c) {
    const auto n = random_order(rng);
    auto m = random_saaty(rng, n);
    std::vector<PairwiseMatrix> copies(std::uniform_int_distribution<std::size_t>(1, 9)(rng), m);
    for (auto method : {Aggregation::geometric, Aggregation::arithmetic}) {
      auto agg = aggregate(copies, method);
      for (std::size_t k = 0; k < n * n; ++k) ASSERT_NEAR(agg.entries()[k], m.entries()[k], 1e-12);
    }
  }
}

TEST(MatrixProperties, PermutationEquivariance) {
  std::mt19937_64 rng(16);
  for (int c = 0; c < kCases; ++c) {
    const auto n = random_order(rng);
    auto m = random_saaty(rng, n);
    auto perm = random_permutation(rng, n);
    auto [pv, r] = consistency(m);
    auto [ppv, pr] = consistency(m.permuted(perm));
    for (std::size_t i = 0; i < n; ++i) {
      ASSERT_EQ(ppv.labels[i], pv.labels[perm[i]]);
      ASSERT_NEAR(ppv.weights[i], pv.weights[perm[i]], 1e-9);
    }
    ASSERT_NEAR(pr.lambda_max, r.lambda_max, 1e-9);
    ASSERT_NEAR(pr.ci, r.ci, 1e-9);
    ASSERT_NEAR(pr.cr, r.cr, 1e-9);
  }
}

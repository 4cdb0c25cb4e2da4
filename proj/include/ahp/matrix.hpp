#pragma once

// Pairwise comparison matrices and the priority/consistency arithmetic on them.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ahp/error.hpp"
#include "ahp/validation.hpp"

namespace ahp {

inline constexpr double kDefaultReciprocityTolerance = 0.01;
inline constexpr double kDefaultCrThreshold = 0.1;

// Square positive matrix of judgment ratios. Entry (i, j) states how strongly
// item i dominates item j. Storage is row-major; indices are 0-based.
class PairwiseMatrix {
 public:
  PairwiseMatrix() = default;

  PairwiseMatrix(std::vector<std::string> labels, std::vector<double> entries)
      : labels_(std::move(labels)), entries_(std::move(entries)) {
    const std::size_t n = labels_.size();
    if (n < 2) throw DataError("pairwise matrix needs order >= 2, got " + std::to_string(n));
    if (entries_.size() != n * n)
      throw DataError("pairwise matrix of order " + std::to_string(n) + " needs " +
                      std::to_string(n * n) + " entries, got " + std::to_string(entries_.size()));
    std::unordered_set<std::string> seen;
    for (const auto& l : labels_) {
      if (l.empty()) throw DataError("pairwise matrix label is empty");
      if (!seen.insert(l).second) throw DataError("duplicate pairwise matrix label '" + l + "'");
    }
  }

  // Builds an exactly reciprocal matrix from the strict upper triangle, given
  // row by row: (0,1), (0,2), ..., (0,n-1), (1,2), ...
  static PairwiseMatrix from_upper(std::vector<std::string> labels, std::span<const double> upper) {
    const std::size_t n = labels.size();
    if (upper.size() != n * (n - 1) / 2)
      throw DataError("upper triangle of order " + std::to_string(n) + " needs " +
                      std::to_string(n * (n - 1) / 2) + " judgments");
    std::vector<double> e(n * n, 1.0);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j, ++k) {
        e[i * n + j] = upper[k];
        e[j * n + i] = 1.0 / upper[k];
      }
    return PairwiseMatrix(std::move(labels), std::move(e));
  }

  // a_ij = w_i / w_j, a perfectly consistent matrix.
  static PairwiseMatrix from_weights(std::vector<std::string> labels, std::span<const double> w) {
    const std::size_t n = labels.size();
    if (w.size() != n) throw DataError("weight count does not match label count");
    std::vector<double> e(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) e[i * n + j] = i == j ? 1.0 : w[i] / w[j];
    return PairwiseMatrix(std::move(labels), std::move(e));
  }

  std::size_t order() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<double>& entries() const noexcept { return entries_; }

  double operator()(std::size_t i, std::size_t j) const { return entries_[i * order() + j]; }
  double& at(std::size_t i, std::size_t j) { return entries_[i * order() + j]; }

  // Row/column/label permutation: result(i, j) = this(perm[i], perm[j]).
  PairwiseMatrix permuted(std::span<const std::size_t> perm) const {
    const std::size_t n = order();
    std::vector<std::string> l(n);
    std::vector<double> e(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      l[i] = labels_[perm[i]];
      for (std::size_t j = 0; j < n; ++j) e[i * n + j] = (*this)(perm[i], perm[j]);
    }
    return PairwiseMatrix(std::move(l), std::move(e));
  }

  friend bool operator==(const PairwiseMatrix&, const PairwiseMatrix&) = default;

 private:
  std::vector<std::string> labels_;
  std::vector<double> entries_;
};

struct PriorityVector {
  std::vector<std::string> labels;
  std::vector<double> weights;

  std::size_t size() const noexcept { return weights.size(); }
  double sum() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

  double weight_of(const std::string& label) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == label) return weights[i];
    throw DataError("no priority for label '" + label + "'");
  }
};

struct ConsistencyReport {
  double lambda_max = 0.0;
  double ci = 0.0;
  double ri = 0.0;
  double cr = 0.0;
  bool consistent = true;
};

// Column-stochastic result of normalize_columns, row-major.
struct NormalizedMatrix {
  std::size_t n = 0;
  std::vector<double> values;
  double operator()(std::size_t i, std::size_t j) const { return values[i * n + j]; }
};

enum class Aggregation { geometric, arithmetic };

inline const char* to_string(Aggregation a) {
  return a == Aggregation::geometric ? "geometric" : "arithmetic";
}

inline Aggregation parse_aggregation(const std::string& s) {
  if (s == "geometric") return Aggregation::geometric;
  if (s == "arithmetic") return Aggregation::arithmetic;
  throw DataError("unknown aggregation method '" + s + "' (expected geometric or arithmetic)");
}

// Absolute reciprocity error of the pair (a_ij, a_ji), measured on whichever
// side is compared against the reciprocal of the other with the smaller gap.
// For a pair like (0.604, 1.636) this is |0.604 - 1/1.636|, so rounding of the
// larger entry is not amplified.
inline double reciprocity_error(double a_ij, double a_ji) {
  return std::min(std::abs(a_ji - 1.0 / a_ij), std::abs(a_ij - 1.0 / a_ji));
}

// Checks positivity, unit diagonal and reciprocity. Violations are reported
// with 1-based cell coordinates; reciprocity is reported once per pair (i < j).
inline ValidationResult validate_pairwise(const PairwiseMatrix& m,
                                          double tolerance = kDefaultReciprocityTolerance) {
  ValidationResult result;
  const std::size_t n = m.order();
  auto coord = [](std::size_t i, std::size_t j) {
    return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double a = m(i, j);
      if (!(a > 0.0) || !std::isfinite(a))
        result.add("positivity", "non-positive entry " + coord(i, j), std::pair{i + 1, j + 1});
      else if (i == j && a != 1.0)
        result.add("diagonal", "diagonal entry " + coord(i, j) + " is not 1", std::pair{i + 1, j + 1});
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = m(i, j), b = m(j, i);
      if (!(a > 0.0) || !(b > 0.0)) continue;
      if (reciprocity_error(a, b) > tolerance)
        result.add("reciprocity",
                   "reciprocity breach at " + coord(j, i) + ": " + std::to_string(b) +
                       " vs 1/" + std::to_string(a) + " = " + std::to_string(1.0 / a),
                   std::pair{j + 1, i + 1});
    }
  return result;
}

inline void require_valid(const PairwiseMatrix& m, double tolerance = kDefaultReciprocityTolerance) {
  auto v = validate_pairwise(m, tolerance);
  if (!v.ok()) throw DataError("invalid pairwise matrix: " + v.summary());
}

// Element-wise group aggregation. Geometric: (prod_k A_k(i,j))^(1/E), computed
// in log space; arithmetic: plain mean. The diagonal of the result is exactly 1.
inline PairwiseMatrix aggregate(std::span<const PairwiseMatrix> matrices,
                                Aggregation method = Aggregation::geometric,
                                double tolerance = kDefaultReciprocityTolerance) {
  if (matrices.empty()) throw DataError("cannot aggregate an empty list of matrices");
  const auto& first = matrices.front();
  for (const auto& m : matrices) {
    if (m.order() != first.order())
      throw DataError("aggregate: matrices differ in order (" + std::to_string(first.order()) +
                      " vs " + std::to_string(m.order()) + ")");
    if (m.labels() != first.labels()) throw DataError("aggregate: matrices differ in label ordering");
    require_valid(m, tolerance);
  }
  const std::size_t n = first.order();
  const double count = static_cast<double>(matrices.size());
  std::vector<double> out(n * n, 1.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double acc = 0.0;
      if (method == Aggregation::geometric) {
        for (const auto& m : matrices) acc += std::log(m(i, j));
        out[i * n + j] = std::exp(acc / count);
      } else {
        for (const auto& m : matrices) acc += m(i, j);
        out[i * n + j] = acc / count;
      }
    }
  return PairwiseMatrix(first.labels(), std::move(out));
}

inline NormalizedMatrix normalize_columns(const PairwiseMatrix& m) {
  const std::size_t n = m.order();
  NormalizedMatrix out{n, std::vector<double>(n * n)};
  for (std::size_t j = 0; j < n; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < n; ++i) col += m(i, j);
    for (std::size_t i = 0; i < n; ++i) out.values[i * n + j] = m(i, j) / col;
  }
  return out;
}

// Row averages of the column-normalized matrix.
inline PriorityVector priority_vector(const PairwiseMatrix& m) {
  const auto norm = normalize_columns(m);
  const std::size_t n = m.order();
  PriorityVector pv{m.labels(), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += norm(i, j);
    pv.weights[i] = row / static_cast<double>(n);
  }
  return pv;
}

// Principal eigenvalue estimate (1/n) * sum_i (A w)_i / w_i.
inline double lambda_max(const PairwiseMatrix& m, const PriorityVector& w) {
  const std::size_t n = m.order();
  if (w.labels != m.labels()) throw DataError("lambda_max: weights do not match matrix labels");
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(w.weights[i] > 0.0))
      throw DataError("lambda_max: zero weight for '" + m.labels()[i] + "'");
    double aw = 0.0;
    for (std::size_t j = 0; j < n; ++j) aw += m(i, j) * w.weights[j];
    total += aw / w.weights[i];
  }
  return total / static_cast<double>(n);
}

// Saaty's random consistency index for orders 1..10.
inline double random_index(std::size_t n) {
  static constexpr std::array<double, 11> kRi{0.0, 0.0, 0.0, 0.58, 0.90, 1.12,
                                              1.24, 1.32, 1.41, 1.45, 1.49};
  if (n < 1 || n >= kRi.size())
    throw UnsupportedOrder("random index is tabulated for orders 1..10, got " + std::to_string(n));
  return kRi[n];
}

inline std::pair<PriorityVector, ConsistencyReport> consistency(
    const PairwiseMatrix& m, double cr_threshold = kDefaultCrThreshold) {
  const std::size_t n = m.order();
  if (n < 2 || n > 10)
    throw UnsupportedOrder("consistency is supported for orders 2..10, got " + std::to_string(n));
  auto pv = priority_vector(m);
  ConsistencyReport r;
  r.lambda_max = lambda_max(m, pv);
  r.ri = random_index(n);
  if (n <= 2) {
    r.ci = 0.0;
    r.cr = 0.0;
  } else {
    r.ci = (r.lambda_max - static_cast<double>(n)) / static_cast<double>(n - 1);
    r.cr = r.ci / r.ri;
  }
  r.consistent = r.cr < cr_threshold;
  return {std::move(pv), r};
}

}  // namespace ahp

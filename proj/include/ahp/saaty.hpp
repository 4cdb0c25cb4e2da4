#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>

namespace ahp::saaty {

// A point of the discrete judgment scale, kept as an exact small ratio.
struct Ratio {
  int num = 1;
  int den = 1;

  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  Ratio reciprocal() const noexcept { return {den, num}; }
  friend bool operator==(const Ratio&, const Ratio&) = default;

  std::string str() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
  }
};

// The 17 scale points 1/9 ... 1/2, 1, 2 ... 9 in ascending order.
inline constexpr std::array<Ratio, 17> kScale{{{1, 9}, {1, 8}, {1, 7}, {1, 6}, {1, 5}, {1, 4},
                                               {1, 3}, {1, 2}, {1, 1}, {2, 1}, {3, 1}, {4, 1},
                                               {5, 1}, {6, 1}, {7, 1}, {8, 1}, {9, 1}}};

// Scale point whose value lies within `tolerance` of x, if any.
inline std::optional<Ratio> nearest_point(double x, double tolerance = 1e-6) {
  for (const auto& r : kScale)
    if (std::abs(r.value() - x) <= tolerance) return r;
  return std::nullopt;
}

// If x is bit-identical to p/q for small integers p, q in 1..9, returns that ratio.
// Used to print fraction-entered judgments back as fractions.
inline std::optional<Ratio> exact_small_fraction(double x) {
  for (int q = 1; q <= 9; ++q)
    for (int p = 1; p <= 9; ++p)
      if (static_cast<double>(p) / static_cast<double>(q) == x) {
        int a = p, b = q;
        while (b != 0) {
          int t = a % b;
          a = b;
          b = t;
        }
        return Ratio{p / a, q / a};
      }
  return std::nullopt;
}

}  // namespace ahp::saaty

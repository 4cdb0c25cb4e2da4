#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ahp {

struct Violation {
  std::string rule;      // short machine-readable rule id, e.g. "reciprocity"
  std::string message;   // human-readable, includes cell coordinates when relevant
  std::optional<std::pair<std::size_t, std::size_t>> cell;  // 1-based (row, col)
};

struct ValidationResult {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  explicit operator bool() const noexcept { return ok(); }

  void add(std::string rule, std::string message,
           std::optional<std::pair<std::size_t, std::size_t>> cell = std::nullopt) {
    violations.push_back({std::move(rule), std::move(message), cell});
  }

  bool has(const std::string& rule) const {
    for (const auto& v : violations)
      if (v.rule == rule) return true;
    return false;
  }

  std::string summary() const {
    std::string out;
    for (const auto& v : violations) {
      if (!out.empty()) out += "; ";
      out += v.message;
    }
    return out;
  }
};

}  // namespace ahp

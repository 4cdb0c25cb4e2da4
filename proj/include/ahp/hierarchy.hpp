#pragma once

// Goal -> criteria -> sub-criteria -> alternatives, with attached priorities,
// global leaf weights and the final weighted-sum synthesis.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ahp/error.hpp"
#include "ahp/matrix.hpp"
#include "ahp/validation.hpp"
#include "json.hpp"

namespace ahp {

struct CriterionNode {
  std::string label;
  int level = 1;  // 1 = top-level criterion, 2 = sub-criterion
  std::optional<std::string> parent;
  std::optional<double> local_priority;
  std::optional<double> global_priority;

  friend bool operator==(const CriterionNode&, const CriterionNode&) = default;
};

struct Alternative {
  std::string label;
  std::optional<double> score;

  friend bool operator==(const Alternative&, const Alternative&) = default;
};

struct HierarchyTree {
  std::string goal;
  std::vector<CriterionNode> criteria;
  std::vector<Alternative> alternatives;

  friend bool operator==(const HierarchyTree&, const HierarchyTree&) = default;

  std::vector<const CriterionNode*> top_level() const {
    std::vector<const CriterionNode*> out;
    for (const auto& c : criteria)
      if (c.level == 1) out.push_back(&c);
    return out;
  }

  std::vector<const CriterionNode*> children(const std::string& parent) const {
    std::vector<const CriterionNode*> out;
    for (const auto& c : criteria)
      if (c.level == 2 && c.parent == parent) out.push_back(&c);
    return out;
  }

  // Leaves in tree order: each top-level node's children, or the node itself
  // when it has none.
  std::vector<const CriterionNode*> leaves() const {
    std::vector<const CriterionNode*> out;
    for (const auto* top : top_level()) {
      auto kids = children(top->label);
      if (kids.empty())
        out.push_back(top);
      else
        out.insert(out.end(), kids.begin(), kids.end());
    }
    return out;
  }

  std::vector<std::string> alternative_labels() const {
    std::vector<std::string> out;
    for (const auto& a : alternatives) out.push_back(a.label);
    return out;
  }

  CriterionNode* find(const std::string& label, int level) {
    for (auto& c : criteria)
      if (c.label == label && c.level == level) return &c;
    return nullptr;
  }
};

struct TreeShape {
  std::size_t top_count = 7;
  std::size_t sub_per_top = 3;
  std::size_t alt_count = 5;
};

inline ValidationResult validate_tree(const HierarchyTree& tree,
                                      std::optional<TreeShape> expected = std::nullopt) {
  ValidationResult r;
  std::set<std::string> top_labels;
  std::map<std::string, std::set<std::string>> sibling_labels;  // parent ("" = goal) -> labels
  for (const auto& c : tree.criteria) {
    if (c.label.empty()) r.add("empty_label", "criterion with empty label");
    if (c.level == 1) {
      if (c.parent) r.add("parent", "top-level node '" + c.label + "' has a parent");
      top_labels.insert(c.label);
    } else if (c.level != 2) {
      r.add("depth", "node '" + c.label + "' has level " + std::to_string(c.level) +
                         "; only two criteria levels are supported");
    }
  }
  for (const auto& c : tree.criteria) {
    const std::string group = c.level == 1 ? "" : c.parent.value_or("");
    if (c.level == 2 && (!c.parent || !top_labels.count(*c.parent)))
      r.add("orphan", "orphan node '" + c.label + "'");
    if (!sibling_labels[group].insert(c.label).second)
      r.add("duplicate", "duplicate label '" + c.label + "' within sibling group" +
                             (group.empty() ? std::string(" (top level)") : " of '" + group + "'"));
  }
  std::set<std::string> leaf_labels;
  for (const auto* leaf : tree.leaves())
    if (!leaf_labels.insert(leaf->label).second)
      r.add("duplicate", "duplicate leaf label '" + leaf->label + "'");
  std::set<std::string> alt_labels;
  for (const auto& a : tree.alternatives)
    if (!alt_labels.insert(a.label).second)
      r.add("duplicate", "duplicate alternative '" + a.label + "'");

  // Sibling local priorities, when all present, must be normalized.
  for (const auto& [group, labels] : sibling_labels) {
    double sum = 0.0;
    bool all = true;
    for (const auto& c : tree.criteria) {
      const std::string g = c.level == 1 ? "" : c.parent.value_or("");
      if (g != group) continue;
      if (!c.local_priority) all = false;
      else sum += *c.local_priority;
    }
    if (all && std::abs(sum - 1.0) > 1e-9)
      r.add("priority_sum", "local priorities under '" + (group.empty() ? tree.goal : group) +
                                "' sum to " + std::to_string(sum));
  }

  if (expected) {
    const auto tops = tree.top_level();
    if (tops.size() != expected->top_count)
      r.add("shape", "expected " + std::to_string(expected->top_count) +
                         " top-level criteria, found " + std::to_string(tops.size()));
    for (const auto* t : tops) {
      const auto k = tree.children(t->label).size();
      if (k != expected->sub_per_top)
        r.add("shape", "'" + t->label + "' has " + std::to_string(k) + " sub-criteria, expected " +
                           std::to_string(expected->sub_per_top));
    }
    if (tree.alternatives.size() != expected->alt_count)
      r.add("shape", "expected " + std::to_string(expected->alt_count) + " alternatives, found " +
                         std::to_string(tree.alternatives.size()));
  }
  return r;
}

// Leaf global = parent local x own local (identity for childless top nodes),
// then renormalized so the leaf globals sum to exactly 1. Top-level nodes get
// their local priority as global.
inline HierarchyTree global_leaf_priorities(HierarchyTree tree) {
  for (const auto& c : tree.criteria)
    if (!c.local_priority) throw DataError("missing local priority for '" + c.label + "'");
  std::map<std::string, double> top_local;
  for (auto& c : tree.criteria)
    if (c.level == 1) {
      top_local[c.label] = *c.local_priority;
      c.global_priority = c.local_priority;
    }
  for (auto& c : tree.criteria)
    if (c.level == 2) {
      auto it = top_local.find(c.parent.value_or(""));
      if (it == top_local.end()) throw DataError("orphan node '" + c.label + "'");
      c.global_priority = it->second * *c.local_priority;
    }
  double total = 0.0;
  for (const auto* leaf : tree.leaves()) total += *leaf->global_priority;
  if (!(total > 0.0)) throw DataError("leaf priorities sum to zero");
  std::set<const CriterionNode*> leaf_set;
  for (const auto* leaf : tree.leaves()) leaf_set.insert(leaf);
  for (auto& c : tree.criteria)
    if (leaf_set.count(&c)) c.global_priority = *c.global_priority / total;
  return tree;
}

struct LeafWeight {
  std::string leaf;
  double global = 0.0;
};

struct LeafAlternatives {
  std::string leaf;
  PriorityVector priorities;  // over the alternatives
};

struct AlternativeScores {
  std::vector<std::string> labels;   // in input order
  std::vector<double> scores;        // parallel to labels
  std::vector<std::size_t> ranking;  // indices into labels, best first

  const std::string& best() const { return labels.at(ranking.at(0)); }
  double score_of(const std::string& label) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == label) return scores[i];
    throw DataError("no score for alternative '" + label + "'");
  }
};

// Descending score, then ascending label.
inline std::vector<std::size_t> rank_descending(const std::vector<std::string>& labels,
                                                const std::vector<double>& scores) {
  std::vector<std::size_t> idx(labels.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return labels[a] < labels[b];
  });
  return idx;
}

// score(alt) = sum over leaves of leaf_global * local(alt | leaf).
inline AlternativeScores score_alternatives(const std::vector<LeafWeight>& leaf_globals,
                                            const std::vector<LeafAlternatives>& alt_locals) {
  if (leaf_globals.empty()) throw DataError("no leaf criteria to score against");
  std::map<std::string, const PriorityVector*> by_leaf;
  for (const auto& la : alt_locals)
    if (!by_leaf.emplace(la.leaf, &la.priorities).second)
      throw DataError("duplicate alternative priorities for leaf '" + la.leaf + "'");
  if (by_leaf.size() != leaf_globals.size())
    throw DataError("leaf set mismatch: " + std::to_string(leaf_globals.size()) +
                    " leaf weights vs " + std::to_string(by_leaf.size()) + " alternative vectors");
  const PriorityVector* first = nullptr;
  for (const auto& lw : leaf_globals) {
    auto it = by_leaf.find(lw.leaf);
    if (it == by_leaf.end()) throw DataError("leaf set mismatch: no alternative priorities for '" + lw.leaf + "'");
    if (!first) first = it->second;
    std::set<std::string> a(first->labels.begin(), first->labels.end());
    std::set<std::string> b(it->second->labels.begin(), it->second->labels.end());
    if (a != b || first->labels.size() != it->second->labels.size())
      throw DataError("alternative label mismatch under leaf '" + lw.leaf + "'");
  }
  AlternativeScores out;
  out.labels = first->labels;
  out.scores.assign(out.labels.size(), 0.0);
  for (const auto& lw : leaf_globals) {
    const auto* pv = by_leaf.at(lw.leaf);
    for (std::size_t a = 0; a < out.labels.size(); ++a)
      out.scores[a] += lw.global * pv->weight_of(out.labels[a]);
  }
  out.ranking = rank_descending(out.labels, out.scores);
  return out;
}

enum class TreeFormat { outline, graph };

inline std::string format_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

namespace detail {
inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}
}  // namespace detail

inline std::string export_tree(const HierarchyTree& tree, TreeFormat format) {
  std::string out;
  if (format == TreeFormat::outline) {
    auto prio = [](const CriterionNode& c) {
      std::string s;
      if (c.local_priority) s += " (local " + format_fixed(*c.local_priority, 4);
      if (c.global_priority) s += std::string(c.local_priority ? ", " : " (") + "global " +
                                  format_fixed(*c.global_priority, 4);
      if (!s.empty()) s += ")";
      return s;
    };
    out += "Goal: " + tree.goal + "\n";
    for (const auto* top : tree.top_level()) {
      out += "- " + top->label + ":" + prio(*top) + "\n";
      for (const auto* sub : tree.children(top->label)) out += "    " + sub->label + prio(*sub) + "\n";
    }
    if (!tree.alternatives.empty()) {
      out += "Alternatives:\n";
      for (const auto& a : tree.alternatives) {
        out += "- " + a.label;
        if (a.score) out += " (score " + format_fixed(*a.score, 4) + ")";
        out += "\n";
      }
    }
    return out;
  }

  // Node ids are positional so repeated labels under different parents stay distinct.
  using detail::dot_escape;
  out += "digraph ahp {\n  rankdir=TB;\n";
  out += "  goal [label=\"" + dot_escape(tree.goal) + "\", shape=box];\n";
  std::map<const CriterionNode*, std::string> ids;
  std::size_t k = 0;
  for (const auto& c : tree.criteria) {
    ids[&c] = "c" + std::to_string(k++);
    out += "  " + ids[&c] + " [label=\"" + dot_escape(c.label) + "\"];\n";
  }
  for (std::size_t a = 0; a < tree.alternatives.size(); ++a)
    out += "  a" + std::to_string(a) + " [label=\"" + dot_escape(tree.alternatives[a].label) +
           "\", shape=ellipse];\n";
  for (const auto* top : tree.top_level()) {
    out += "  goal -> " + ids[top] + ";\n";
    for (const auto* sub : tree.children(top->label)) out += "  " + ids[top] + " -> " + ids[sub] + ";\n";
  }
  for (const auto* leaf : tree.leaves())
    for (std::size_t a = 0; a < tree.alternatives.size(); ++a)
      out += "  " + ids[leaf] + " -> a" + std::to_string(a) + ";\n";
  out += "}\n";
  return out;
}

// JSON form: {"goal", "criteria": [{label, level, parent?, local_priority?,
// global_priority?}], "alternatives": [{label, score?}]}.
inline void to_json(nlohmann::json& j, const CriterionNode& c) {
  j = nlohmann::json{{"label", c.label}, {"level", c.level}};
  if (c.parent) j["parent"] = *c.parent;
  if (c.local_priority) j["local_priority"] = *c.local_priority;
  if (c.global_priority) j["global_priority"] = *c.global_priority;
}

inline void from_json(const nlohmann::json& j, CriterionNode& c) {
  c.label = j.at("label").get<std::string>();
  c.level = j.value("level", 1);
  c.parent = j.contains("parent") && !j["parent"].is_null()
                 ? std::optional<std::string>(j["parent"].get<std::string>())
                 : std::nullopt;
  c.local_priority = j.contains("local_priority") ? std::optional<double>(j["local_priority"].get<double>()) : std::nullopt;
  c.global_priority = j.contains("global_priority") ? std::optional<double>(j["global_priority"].get<double>()) : std::nullopt;
}

inline void to_json(nlohmann::json& j, const Alternative& a) {
  j = nlohmann::json{{"label", a.label}};
  if (a.score) j["score"] = *a.score;
}

inline void from_json(const nlohmann::json& j, Alternative& a) {
  if (j.is_string()) {
    a.label = j.get<std::string>();
    a.score.reset();
    return;
  }
  a.label = j.at("label").get<std::string>();
  a.score = j.contains("score") ? std::optional<double>(j["score"].get<double>()) : std::nullopt;
}

inline void to_json(nlohmann::json& j, const HierarchyTree& t) {
  j = nlohmann::json{{"goal", t.goal}, {"criteria", t.criteria}, {"alternatives", t.alternatives}};
}

inline void from_json(const nlohmann::json& j, HierarchyTree& t) {
  t.goal = j.at("goal").get<std::string>();
  t.criteria = j.value("criteria", std::vector<CriterionNode>{});
  t.alternatives = j.value("alternatives", std::vector<Alternative>{});
}

}  // namespace ahp

#pragma once

// Candidate pooling, duplicate removal, 1..9 score voting and top-n selection.

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ahp/error.hpp"
#include "json.hpp"

namespace ahp {

// Trimmed, whitespace-collapsed, ASCII case-folded form used for matching.
inline std::string normalize_label(std::string_view raw) {
  std::string out;
  bool pending_space = false;
  for (unsigned char c : raw) {
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += static_cast<char>(std::tolower(c));
  }
  if (out.empty()) throw DataError("empty label");
  return out;
}

inline std::size_t word_count(std::string_view s) {
  std::size_t n = 0;
  bool in_word = false;
  for (unsigned char c : s) {
    if (std::isspace(c)) in_word = false;
    else if (!in_word) {
      in_word = true;
      ++n;
    }
  }
  return n;
}

struct Candidate {
  std::string label;
  std::string proposer;  // expert id

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

struct Removal {
  std::string label;
  std::string proposer;
  std::string duplicate_of;

  friend bool operator==(const Removal&, const Removal&) = default;
};

struct CandidatePool {
  std::string stage;   // "criteria", "subcriteria", "alternatives"
  std::string parent;  // sub-criteria pools only
  std::vector<Candidate> items;
  std::vector<Removal> removed;

  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    for (const auto& c : items) out.push_back(c.label);
    return out;
  }

  friend bool operator==(const CandidatePool&, const CandidatePool&) = default;
};

// Curated duplicate map: canonical label -> canonical label of the item it
// duplicates. Only consulted when the target is itself in the pool.
using DuplicateAliases = std::map<std::string, std::string>;

inline DuplicateAliases make_aliases(const std::vector<std::pair<std::string, std::string>>& pairs) {
  DuplicateAliases out;
  for (const auto& [from, to] : pairs) out[normalize_label(from)] = normalize_label(to);
  return out;
}

// Keeps the first occurrence of every canonical label, in proposal order.
inline CandidatePool dedupe(const CandidatePool& pool, const DuplicateAliases& aliases = {}) {
  CandidatePool out{pool.stage, pool.parent, {}, pool.removed};
  std::map<std::string, std::string> present;  // canonical -> first display label
  for (const auto& c : pool.items) present.emplace(normalize_label(c.label), c.label);
  std::set<std::string> kept;
  for (const auto& c : pool.items) {
    const auto key = normalize_label(c.label);
    auto alias = aliases.find(key);
    if (alias != aliases.end() && alias->second != key && present.count(alias->second)) {
      out.removed.push_back({c.label, c.proposer, present.at(alias->second)});
      continue;
    }
    if (!kept.insert(key).second) {
      out.removed.push_back({c.label, c.proposer, present.at(key)});
      continue;
    }
    out.items.push_back(c);
  }
  return out;
}

struct ScoreBallot {
  std::string expert;
  std::vector<std::pair<std::string, int>> scores;  // pool label -> 1..9, pool order

  friend bool operator==(const ScoreBallot&, const ScoreBallot&) = default;
};

struct TallyEntry {
  std::string label;
  int total = 0;

  friend bool operator==(const TallyEntry&, const TallyEntry&) = default;
};

struct TallyResult {
  std::vector<TallyEntry> totals;  // pool order
  std::vector<std::string> selected;

  int total_of(const std::string& label) const {
    for (const auto& t : totals)
      if (t.label == label) return t.total;
    throw DataError("no tally for '" + label + "'");
  }

  friend bool operator==(const TallyResult&, const TallyResult&) = default;
};

inline TallyResult tally(const std::vector<ScoreBallot>& ballots, const CandidatePool& pool) {
  std::map<std::string, std::size_t> index;
  TallyResult r;
  for (const auto& c : pool.items) {
    index.emplace(normalize_label(c.label), r.totals.size());
    r.totals.push_back({c.label, 0});
  }
  for (const auto& b : ballots) {
    std::vector<bool> seen(r.totals.size(), false);
    for (const auto& [label, score] : b.scores) {
      auto it = index.find(normalize_label(label));
      if (it == index.end())
        throw DataError("ballot of '" + b.expert + "' scores unknown item '" + label + "'");
      if (seen[it->second])
        throw DataError("ballot of '" + b.expert + "' scores '" + label + "' twice");
      if (score < 1 || score > 9)
        throw DataError("ballot of '" + b.expert + "' gives '" + label + "' score " +
                        std::to_string(score) + " outside 1..9");
      seen[it->second] = true;
      r.totals[it->second].total += score;
    }
    for (std::size_t i = 0; i < seen.size(); ++i)
      if (!seen[i])
        throw DataError("ballot of '" + b.expert + "' is missing item '" + r.totals[i].label + "'");
  }
  return r;
}

// Greatest totals first; ties by ascending canonical label.
inline std::vector<std::string> select_top_n(const TallyResult& t, std::size_t n) {
  if (n > t.totals.size())
    throw DataError("cannot select " + std::to_string(n) + " of " + std::to_string(t.totals.size()) + " items");
  std::vector<const TallyEntry*> order;
  for (const auto& e : t.totals) order.push_back(&e);
  std::stable_sort(order.begin(), order.end(), [](const TallyEntry* a, const TallyEntry* b) {
    if (a->total != b->total) return a->total > b->total;
    return normalize_label(a->label) < normalize_label(b->label);
  });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(order[i]->label);
  return out;
}

inline TallyResult tally_and_select(const std::vector<ScoreBallot>& ballots, const CandidatePool& pool,
                                    std::size_t n) {
  auto t = tally(ballots, pool);
  t.selected = select_top_n(t, n);
  return t;
}

inline void to_json(nlohmann::json& j, const Candidate& c) {
  j = nlohmann::json{{"label", c.label}, {"proposer", c.proposer}};
}
inline void from_json(const nlohmann::json& j, Candidate& c) {
  c.label = j.at("label").get<std::string>();
  c.proposer = j.at("proposer").get<std::string>();
}
inline void to_json(nlohmann::json& j, const Removal& r) {
  j = nlohmann::json{{"label", r.label}, {"proposer", r.proposer}, {"duplicate_of", r.duplicate_of}};
}
inline void from_json(const nlohmann::json& j, Removal& r) {
  r.label = j.at("label").get<std::string>();
  r.proposer = j.at("proposer").get<std::string>();
  r.duplicate_of = j.at("duplicate_of").get<std::string>();
}
inline void to_json(nlohmann::json& j, const CandidatePool& p) {
  j = nlohmann::json{{"stage", p.stage}, {"items", p.items}, {"removed", p.removed}};
  if (!p.parent.empty()) j["parent"] = p.parent;
}
inline void from_json(const nlohmann::json& j, CandidatePool& p) {
  p.stage = j.at("stage").get<std::string>();
  p.parent = j.value("parent", std::string{});
  p.items = j.at("items").get<std::vector<Candidate>>();
  p.removed = j.value("removed", std::vector<Removal>{});
}
inline void to_json(nlohmann::json& j, const ScoreBallot& b) {
  nlohmann::json scores = nlohmann::json::array();
  for (const auto& [label, s] : b.scores) scores.push_back({{"item", label}, {"score", s}});
  j = nlohmann::json{{"expert", b.expert}, {"scores", scores}};
}
inline void from_json(const nlohmann::json& j, ScoreBallot& b) {
  b.expert = j.at("expert").get<std::string>();
  b.scores.clear();
  for (const auto& s : j.at("scores")) b.scores.emplace_back(s.at("item").get<std::string>(), s.at("score").get<int>());
}
inline void to_json(nlohmann::json& j, const TallyResult& t) {
  nlohmann::json totals = nlohmann::json::array();
  for (const auto& e : t.totals) totals.push_back({{"item", e.label}, {"total", e.total}});
  j = nlohmann::json{{"totals", totals}, {"selected", t.selected}};
}
inline void from_json(const nlohmann::json& j, TallyResult& t) {
  t.totals.clear();
  for (const auto& e : j.at("totals")) t.totals.push_back({e.at("item").get<std::string>(), e.at("total").get<int>()});
  t.selected = j.at("selected").get<std::vector<std::string>>();
}

}  // namespace ahp

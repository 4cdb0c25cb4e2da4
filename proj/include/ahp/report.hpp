#pragma once

// Decision report: everything a reader needs from a finished session, derived
// from the session alone (no clock, no paths), so equal sessions give
// byte-equal reports.

#include <algorithm>
#include <sstream>

#include "ahp/config.hpp"
#include "ahp/cost.hpp"
#include "ahp/session.hpp"

namespace ahp {

struct MatrixCheck {
  MatrixLevel level = MatrixLevel::top;
  std::string node;
  std::string expert;  // empty for the aggregate
  ConsistencyReport report;
};

struct ReportCounts {
  std::size_t expert_matrices = 0;
  std::size_t aggregates = 0;
  std::size_t criteria_proposed = 0;
  std::size_t criteria_pool = 0;
  std::size_t subcriteria_proposed = 0;
  std::size_t alternatives_proposed = 0;
  std::size_t alternatives_pool = 0;
  std::size_t leaves = 0;
};

struct DecisionReport {
  std::string goal;
  std::string completed;
  std::string backend;
  std::string templates;
  std::vector<ExpertPersona> personas;
  HierarchyTree tree;
  std::vector<MatrixCheck> checks;  // aggregates first, then every expert matrix
  std::vector<std::string> flagged;
  std::optional<AlternativeScores> scores;
  std::optional<CostReport> cost;
  ReportCounts counts;
  std::vector<std::string> warnings;
  std::vector<RepairRecord> repairs;
  std::size_t failures = 0;
};

inline std::vector<CostInput> cost_inputs(const SessionState& s) {
  std::vector<CostInput> in;
  for (std::size_t e = 0; e < s.personas.size() && e < s.expert_logs.size(); ++e)
    in.push_back({s.personas[e].id, false, &s.expert_logs[e]});
  if (s.guide_log) in.push_back({guide_persona().id, true, &*s.guide_log});
  return in;
}

inline CostReport session_cost(const SessionState& s, const Pricing& pricing) {
  const double tpw = s.config.contains("context") ? s.config["context"].value("tokens_per_word", kDefaultTokensPerWord)
                                                  : kDefaultTokensPerWord;
  return estimate_cost(cost_inputs(s), pricing, tpw);
}

inline DecisionReport build_report(const SessionState& s) {
  DecisionReport r;
  r.goal = s.tree.goal;
  r.completed = to_string(s.completed);
  r.backend = s.backend;
  r.templates = s.templates;
  r.personas = s.personas;
  r.tree = s.tree;
  r.scores = s.scores;
  r.warnings = s.advice.warnings;
  r.repairs = s.repairs;
  r.failures = s.failures.size();
  const double thr = s.config.value("cr_threshold", kDefaultCrThreshold);
  for (const auto& a : s.aggregates) {
    r.checks.push_back({a.level, a.node, "", a.consistency});
    if (a.flagged) r.flagged.push_back(std::string(to_string(a.level)) + ":" + a.node);
  }
  for (const auto& m : s.matrices) r.checks.push_back({m.level, m.node, m.expert, consistency(m.matrix, thr).second});
  const auto pricing = pricing_from_summary(s.config);
  if (has_pricing(pricing)) r.cost = session_cost(s, pricing);

  auto& c = r.counts;
  c.expert_matrices = s.matrices.size();
  c.aggregates = s.aggregates.size();
  c.criteria_proposed = s.criteria.proposed.items.size();
  c.criteria_pool = s.criteria.pool.items.size();
  for (const auto& round : s.subcriteria) c.subcriteria_proposed += round.proposed.items.size();
  c.alternatives_proposed = s.alternatives.proposed.items.size();
  c.alternatives_pool = s.alternatives.pool.items.size();
  c.leaves = s.tree.top_level().empty() ? 0 : s.tree.leaves().size();
  return r;
}

inline void to_json(nlohmann::json& j, const MatrixCheck& m) {
  j = {{"level", to_string(m.level)}, {"node", m.node}, {"consistency", m.report}};
  j["expert"] = m.expert.empty() ? nlohmann::json("aggregate") : nlohmann::json(m.expert);
}

inline void to_json(nlohmann::json& j, const DecisionReport& r) {
  j["goal"] = r.goal;
  j["completed"] = r.completed;
  j["provenance"] = {{"backend", r.backend}, {"templates", r.templates}, {"session_schema", kSessionVersion}};
  nlohmann::json panel = nlohmann::json::array();
  for (const auto& p : r.personas) panel.push_back({{"id", p.id}, {"name", p.name}, {"title", p.title}});
  j["panel"] = panel;
  j["hierarchy"] = r.tree;

  nlohmann::json top = nlohmann::json::array();
  for (const auto* c : r.tree.top_level()) top.push_back({{"label", c->label}, {"local", c->local_priority ? nlohmann::json(*c->local_priority) : nlohmann::json(nullptr)}});
  j["top_priorities"] = top;
  nlohmann::json leaves = nlohmann::json::array();
  if (!r.tree.top_level().empty())
    for (const auto* c : r.tree.leaves())
      leaves.push_back({{"label", c->label},
                        {"parent", c->parent ? nlohmann::json(*c->parent) : nlohmann::json(nullptr)},
                        {"global", c->global_priority ? nlohmann::json(*c->global_priority) : nlohmann::json(nullptr)}});
  j["leaf_globals"] = leaves;

  if (r.scores) {
    nlohmann::json ranked = nlohmann::json::array();
    for (std::size_t k = 0; k < r.scores->ranking.size(); ++k) {
      const auto i = r.scores->ranking[k];
      ranked.push_back({{"rank", k + 1}, {"label", r.scores->labels[i]}, {"score", r.scores->scores[i]}});
    }
    j["alternatives"] = ranked;
    j["best"] = r.scores->best();
  } else {
    j["alternatives"] = nullptr;
    j["best"] = nullptr;
  }
  j["consistency"] = r.checks;
  j["flagged"] = r.flagged;
  j["cost"] = r.cost ? nlohmann::json(*r.cost) : nlohmann::json(nullptr);
  const auto& c = r.counts;
  j["counts"] = {{"expert_matrices", c.expert_matrices},     {"aggregates", c.aggregates},
                 {"criteria_proposed", c.criteria_proposed}, {"criteria_pool", c.criteria_pool},
                 {"subcriteria_proposed", c.subcriteria_proposed},
                 {"alternatives_proposed", c.alternatives_proposed},
                 {"alternatives_pool", c.alternatives_pool}, {"leaves", c.leaves}};
  j["warnings"] = r.warnings;
  j["repairs"] = nlohmann::json::array();
  for (const auto& rep : r.repairs)
    j["repairs"].push_back({{"stage", rep.stage}, {"expert", rep.expert}, {"repairs", rep.repairs}});
  j["failures"] = r.failures;
}

inline std::string report_json(const DecisionReport& r) { return nlohmann::json(r).dump(2) + "\n"; }

// Markdown in the order of the published case study: top-level priorities,
// sub-criteria globals, alternative scores, consistency, cost.
inline std::string report_markdown(const DecisionReport& r) {
  std::ostringstream md;
  md << "# Decision report\n\n";
  md << "Goal: " << r.goal << "\n\n";
  md << "Stage reached: " << r.completed << ". Backend: " << r.backend << ". Templates: " << r.templates << ".\n\n";

  if (!r.personas.empty()) {
    md << "## Panel\n\n";
    for (const auto& p : r.personas)
      md << "- " << (p.title.empty() ? "" : p.title + ", ") << p.name << " (`" << p.id << "`)\n";
    md << "\n";
  }

  const auto top = r.tree.top_level();
  if (!top.empty()) {
    md << "## Top-level criteria\n\n| Criterion | Priority |\n|---|---|\n";
    for (const auto* c : top)
      md << "| " << c->label << " | " << (c->local_priority ? format_fixed(*c->local_priority, 3) : "-") << " |\n";
    md << "\n";

    auto leaves = r.tree.leaves();
    if (std::all_of(leaves.begin(), leaves.end(), [](const CriterionNode* c) { return c->global_priority.has_value(); })) {
      std::stable_sort(leaves.begin(), leaves.end(), [](const CriterionNode* a, const CriterionNode* b) {
        return *a->global_priority > *b->global_priority;
      });
      md << "## Sub-criteria global priorities\n\n| Sub-criterion | Parent | Global |\n|---|---|---|\n";
      for (const auto* c : leaves)
        md << "| " << c->label << " | " << c->parent.value_or("-") << " | " << format_fixed(*c->global_priority, 4)
           << " |\n";
      md << "\n";
    }
  }

  if (r.scores) {
    md << "## Alternatives\n\n| Rank | Alternative | Score |\n|---|---|---|\n";
    for (std::size_t k = 0; k < r.scores->ranking.size(); ++k) {
      const auto i = r.scores->ranking[k];
      md << "| " << k + 1 << " | " << r.scores->labels[i] << " | " << format_fixed(r.scores->scores[i], 4) << " |\n";
    }
    md << "\nBest alternative: **" << r.scores->best() << "**\n\n";
  }

  if (!r.checks.empty()) {
    std::size_t expert_n = 0, expert_ok = 0;
    double worst = 0.0;
    for (const auto& c : r.checks)
      if (!c.expert.empty()) {
        ++expert_n;
        expert_ok += c.report.consistent;
        worst = std::max(worst, c.report.cr);
      }
    md << "## Consistency\n\n| Level | Node | lambda_max | CI | CR | Status |\n|---|---|---|---|---|---|\n";
    for (const auto& c : r.checks)
      if (c.expert.empty())
        md << "| " << to_string(c.level) << " | " << c.node << " | " << format_fixed(c.report.lambda_max, 3) << " | "
           << format_fixed(c.report.ci, 3) << " | " << format_fixed(c.report.cr, 3) << " | "
           << (c.report.consistent ? "consistent" : "FLAGGED") << " |\n";
    md << "\nExpert matrices: " << expert_n << ", consistent: " << expert_ok
       << ", highest CR: " << format_fixed(worst, 3) << ".\n";
    md << (r.flagged.empty() ? "No aggregate matrix was flagged.\n\n"
                             : "Flagged aggregates: " + std::to_string(r.flagged.size()) + ".\n\n");
  }

  if (r.cost) {
    md << "## Cost\n\n| Persona | Role | Tokens | Cost |\n|---|---|---|---|\n";
    for (const auto* group : {&r.cost->experts, &r.cost->guide})
      for (const auto& c : *group)
        md << "| " << c.persona << " | " << c.role << " | " << c.tokens() << " | " << format_cents(c.cents) << " |\n";
    md << "\nPanel: " << format_cents(r.cost->panel_cents) << ". Guide: " << format_cents(r.cost->guide_cents)
       << ". Total: " << format_cents(r.cost->total_cents) << " (about $" << r.cost->headline_dollars << ").\n";
    md << "Pricing: " << r.cost->pricing << "; " << r.cost->tokens_per_word << " tokens per word when the backend "
       << "reports none; " << r.cost->rounding_rule << ".\n\n";
  }

  if (!r.warnings.empty() || !r.repairs.empty() || r.failures) {
    md << "## Notes\n\n";
    for (const auto& w : r.warnings) md << "- warning: " << w << "\n";
    for (const auto& rep : r.repairs)
      md << "- " << rep.expert << " needed " << rep.repairs << " repair prompt(s) in " << rep.stage << "\n";
    if (r.failures) md << "- " << r.failures << " failed stage attempt(s) recorded in the session\n";
    md << "\n";
  }
  return md.str();
}

}  // namespace ahp

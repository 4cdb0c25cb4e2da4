#pragma once

// Published reference values of the datacenter social-engineering case study.

#include <string>
#include <utility>
#include <vector>

#include "ahp/hierarchy.hpp"

namespace ahp::testing {

inline const std::string kGoal = "Secure the Corporate Datacenter from Social Engineering Attacks";

struct PaperCriterion {
  std::string label;
  double priority;
  std::vector<std::string> subs;
};

inline const std::vector<PaperCriterion>& paper_criteria() {
  static const std::vector<PaperCriterion> v{
      {"Social Engineering Awareness", 0.120,
       {"Training Program Effectiveness", "Awareness Session Regularity", "Incident Reporting Protocol"}},
      {"Physical Access Controls", 0.131,
       {"Biometric System Reliability", "Visitor Tracking System", "Access Point Monitoring"}},
      {"Audit Trails", 0.099, {"Log Analysis Accuracy", "Audit Frequency", "Anomaly Tracking Efficiency"}},
      {"Behavior Analysis", 0.096,
       {"User Behavior Monitoring", "Response to Anomalies", "Activity Pattern Analysis"}},
      {"Operational Risk Controls", 0.126,
       {"Infrastructure Vulnerability Check", "Data Redundancy Systems", "Emergency Protocol Effectiveness"}},
      {"Psychological Profiling", 0.164,
       {"Staff Behavior Assessment", "Risk Behavior Profiling", "Continuous Observation"}},
      {"Service Level Agreements", 0.264,
       {"Response Time Commitment", "Data Privacy Assurance", "Breach Penalty Specification"}},
  };
  return v;
}

// Global sub-criteria priorities as printed (they sum to 0.9998).
inline const std::vector<std::pair<std::string, double>>& paper_globals() {
  static const std::vector<std::pair<std::string, double>> v{
      {"Response Time Commitment", 0.1127},         {"Data Privacy Assurance", 0.0866},
      {"Staff Behavior Assessment", 0.0655},        {"Breach Penalty Specification", 0.0644},
      {"Infrastructure Vulnerability Check", 0.0573}, {"Risk Behavior Profiling", 0.0546},
      {"Biometric System Reliability", 0.0502},     {"Training Program Effectiveness", 0.0485},
      {"Continuous Observation", 0.0440},           {"Visitor Tracking System", 0.0434},
      {"Audit Frequency", 0.0385},                  {"Data Redundancy Systems", 0.0384},
      {"User Behavior Monitoring", 0.0378},         {"Access Point Monitoring", 0.0375},
      {"Incident Reporting Protocol", 0.0368},      {"Awareness Session Regularity", 0.0347},
      {"Response to Anomalies", 0.0340},            {"Log Analysis Accuracy", 0.0317},
      {"Emergency Protocol Effectiveness", 0.0302}, {"Anomaly Tracking Efficiency", 0.0288},
      {"Activity Pattern Analysis", 0.0242},
  };
  return v;
}

inline double paper_global(const std::string& leaf) {
  for (const auto& [l, g] : paper_globals())
    if (l == leaf) return g;
  return 0.0;
}

inline const std::vector<std::pair<std::string, double>>& paper_final_scores() {
  static const std::vector<std::pair<std::string, double>> v{
      {"Cloud-Based Data Backup Solutions", 0.1938},
      {"Physical Barrier Reinforcement", 0.1254},
      {"Security Personnel Training Update", 0.1795},
      {"Comprehensive Employee Training Programs", 0.2774},
      {"Advanced Intrusion Detection Systems", 0.2240},
  };
  return v;
}

inline std::vector<std::string> paper_alternatives() {
  std::vector<std::string> out;
  for (const auto& [l, s] : paper_final_scores()) out.push_back(l);
  return out;
}

// The case-study tree with printed top priorities as top locals and
// printed-global / printed-parent as sub locals.
inline HierarchyTree paper_tree(bool with_priorities = true) {
  HierarchyTree t;
  t.goal = kGoal;
  for (const auto& c : paper_criteria()) {
    CriterionNode top{c.label, 1, std::nullopt, std::nullopt, std::nullopt};
    if (with_priorities) top.local_priority = c.priority;
    t.criteria.push_back(top);
    for (const auto& s : c.subs) {
      CriterionNode sub{s, 2, c.label, std::nullopt, std::nullopt};
      if (with_priorities) sub.local_priority = paper_global(s) / c.priority;
      t.criteria.push_back(sub);
    }
  }
  for (const auto& a : paper_alternatives()) t.alternatives.push_back({a, std::nullopt});
  return t;
}

// Initial top-level criteria per expert, in the order they were collected.
inline const std::vector<std::pair<std::string, std::vector<std::string>>>& initial_criteria() {
  static const std::vector<std::pair<std::string, std::vector<std::string>>> v{
      {"dr-ava-chen",
       {"Employee Training", "Access Control", "Communication Protocols", "Incident Response",
        "Physical Security", "Policy Enforcement", "Monitoring Systems"}},
      {"michael-rodriguez",
       {"System Redundancies", "Database Security", "Cloud Infrastructure Security", "Hardware Integrity",
        "Software Updates", "Server Access Control", "Network Segmentation"}},
      {"dr-yara-singh",
       {"Employee Training Programs", "Behavior Analysis", "Social Engineering Awareness",
        "Psychological Profiling", "Insider Threat Monitoring", "Communication Protocols", "Staff Vigilance"}},
      {"laura-garcia",
       {"Vendor Risk Assessment", "Third-party Audits", "Supply Chain Security", "Service Level Agreements",
        "External Collaboration Security", "Information Sharing Policies", "Outsourcing Management"}},
      {"edward-kim",
       {"Regulatory Compliance", "Legal Risk Assessment", "Policy Development", "Contractual Safeguards",
        "Audit Trails", "Reporting Mechanisms", "Intellectual Property Protection"}},
      {"anita-patel",
       {"Risk Management Framework", "Business Continuity", "Disaster Recovery Planning",
        "Financial Impact Analysis", "Strategic Risk Evaluation", "Operational Risk Controls",
        "Compliance Risk Management"}},
      {"lt-col-john-abrams",
       {"Physical Access Controls", "Surveillance Systems", "Security Personnel Training", "Entry Point Security",
        "Emergency Response", "Visitor Management", "Environmental Controls"}},
  };
  return v;
}

// Curated duplicate map for the removals named in the case study; only
// "Communication Protocols" is an exact repeat.
inline const std::vector<std::pair<std::string, std::string>>& paper_duplicate_aliases() {
  static const std::vector<std::pair<std::string, std::string>> v{
      {"Employee Training", "Employee Training Programs"},
      {"Physical Security", "Physical Access Controls"},
      {"Access Control", "Physical Access Controls"},
  };
  return v;
}

inline const std::vector<std::string>& paper_selected_criteria() {
  static const std::vector<std::string> v{"Social Engineering Awareness", "Physical Access Controls",
                                          "Audit Trails",                 "Behavior Analysis",
                                          "Operational Risk Controls",    "Psychological Profiling",
                                          "Service Level Agreements"};
  return v;
}

}  // namespace ahp::testing

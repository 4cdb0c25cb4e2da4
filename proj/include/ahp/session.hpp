#pragma once

// Persisted pipeline state. One JSON document per run, rewritten atomically
// after every stage.

#include <array>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "ahp/conversation.hpp"
#include "ahp/elicitation.hpp"
#include "ahp/error.hpp"
#include "ahp/hierarchy.hpp"
#include "ahp/matrix.hpp"
#include "ahp/persona.hpp"
#include "json.hpp"

namespace ahp {

inline constexpr const char* kSessionSchema = "ahp-panel-session";
inline constexpr int kSessionVersion = 1;

enum class Stage {
  init,
  advise,
  personas,
  criteria,
  subcriteria,
  alternatives,
  pairwise_top,
  pairwise_sub,
  pairwise_alt,
  aggregate,
  synthesize,
  done
};

inline constexpr std::array<const char*, 12> kStageNames{
    "init",         "advise",       "personas",     "criteria",  "subcriteria", "alternatives",
    "pairwise_top", "pairwise_sub", "pairwise_alt", "aggregate", "synthesize",  "done"};

inline const char* to_string(Stage s) { return kStageNames[static_cast<std::size_t>(s)]; }

inline Stage parse_stage(const std::string& s) {
  for (std::size_t i = 0; i < kStageNames.size(); ++i)
    if (s == kStageNames[i]) return static_cast<Stage>(i);
  throw UsageError("unknown stage '" + s + "'");
}

inline Stage next_stage(Stage s) { return s == Stage::done ? s : static_cast<Stage>(static_cast<int>(s) + 1); }

// Propose -> dedupe -> ballot -> select for one candidate pool.
struct ElicitationRound {
  std::string parent;  // sub-criteria rounds only
  CandidatePool proposed;
  CandidatePool pool;  // after dedupe
  std::vector<ScoreBallot> ballots;
  TallyResult tally;

  friend bool operator==(const ElicitationRound&, const ElicitationRound&) = default;
};

enum class MatrixLevel { top, sub, alt };

inline const char* to_string(MatrixLevel l) {
  return l == MatrixLevel::top ? "top" : l == MatrixLevel::sub ? "sub" : "alt";
}

inline MatrixLevel parse_matrix_level(const std::string& s) {
  if (s == "top") return MatrixLevel::top;
  if (s == "sub") return MatrixLevel::sub;
  if (s == "alt") return MatrixLevel::alt;
  throw DataError("unknown matrix level '" + s + "'");
}

struct ExpertMatrix {
  MatrixLevel level = MatrixLevel::top;
  std::string node;  // goal, parent criterion, or leaf criterion
  std::string expert;
  PairwiseMatrix matrix;

  friend bool operator==(const ExpertMatrix&, const ExpertMatrix&) = default;
};

struct AggregateRecord {
  MatrixLevel level = MatrixLevel::top;
  std::string node;
  PairwiseMatrix matrix;
  PriorityVector priorities;
  ConsistencyReport consistency;
  bool flagged = false;  // CR >= threshold
};

struct RepairRecord {
  std::string stage;
  std::string expert;
  int repairs = 0;
};

struct FailureRecord {
  std::string stage;
  std::string expert;
  std::string message;
  Conversation transcript;
};

struct Advice {
  std::optional<std::pair<int, int>> expert_range;
  std::optional<int> levels;
  std::vector<std::string> warnings;
};

struct SessionState {
  nlohmann::json config;  // config_summary() of the run
  std::string backend;
  std::string templates;
  Stage completed = Stage::init;

  Advice advice;
  int expert_count = 0;
  std::vector<ExpertPersona> personas;
  ElicitationRound criteria;
  std::vector<ElicitationRound> subcriteria;
  ElicitationRound alternatives;
  HierarchyTree tree;
  std::vector<ExpertMatrix> matrices;
  std::vector<AggregateRecord> aggregates;
  std::optional<AlternativeScores> scores;
  std::vector<RepairRecord> repairs;
  std::vector<FailureRecord> failures;

  std::optional<ConversationLog> guide_log;
  std::vector<ConversationLog> expert_logs;  // parallel to personas

  std::size_t count_matrices(MatrixLevel l) const {
    return static_cast<std::size_t>(
        std::count_if(matrices.begin(), matrices.end(), [l](const ExpertMatrix& m) { return m.level == l; }));
  }
};

// --- JSON -------------------------------------------------------------------

inline void to_json(nlohmann::json& j, const PairwiseMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.order(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t k = 0; k < m.order(); ++k) row.push_back(m(i, k));
    rows.push_back(row);
  }
  j = {{"labels", m.labels()}, {"rows", rows}};
}

inline void from_json(const nlohmann::json& j, PairwiseMatrix& m) {
  auto labels = j.at("labels").get<std::vector<std::string>>();
  std::vector<double> e;
  for (const auto& row : j.at("rows")) {
    if (row.size() != labels.size()) throw DataError("matrix row length does not match its labels");
    for (const auto& v : row) e.push_back(v.get<double>());
  }
  m = PairwiseMatrix(std::move(labels), std::move(e));
}

inline void to_json(nlohmann::json& j, const PriorityVector& p) {
  j = {{"labels", p.labels}, {"weights", p.weights}};
}
inline void from_json(const nlohmann::json& j, PriorityVector& p) {
  p.labels = j.at("labels").get<std::vector<std::string>>();
  p.weights = j.at("weights").get<std::vector<double>>();
}

inline void to_json(nlohmann::json& j, const ConsistencyReport& r) {
  j = {{"lambda_max", r.lambda_max}, {"ci", r.ci}, {"ri", r.ri}, {"cr", r.cr}, {"consistent", r.consistent}};
}
inline void from_json(const nlohmann::json& j, ConsistencyReport& r) {
  r.lambda_max = j.at("lambda_max").get<double>();
  r.ci = j.at("ci").get<double>();
  r.ri = j.at("ri").get<double>();
  r.cr = j.at("cr").get<double>();
  r.consistent = j.at("consistent").get<bool>();
}

inline void to_json(nlohmann::json& j, const ElicitationRound& r) {
  j = {{"proposed", r.proposed}, {"pool", r.pool}, {"ballots", r.ballots}, {"tally", r.tally}};
  if (!r.parent.empty()) j["parent"] = r.parent;
}
inline void from_json(const nlohmann::json& j, ElicitationRound& r) {
  r.parent = j.value("parent", std::string{});
  r.proposed = j.at("proposed").get<CandidatePool>();
  r.pool = j.at("pool").get<CandidatePool>();
  r.ballots = j.at("ballots").get<std::vector<ScoreBallot>>();
  r.tally = j.at("tally").get<TallyResult>();
}

inline void to_json(nlohmann::json& j, const ExpertMatrix& m) {
  j = {{"level", to_string(m.level)}, {"node", m.node}, {"expert", m.expert}, {"matrix", m.matrix}};
}
inline void from_json(const nlohmann::json& j, ExpertMatrix& m) {
  m.level = parse_matrix_level(j.at("level").get<std::string>());
  m.node = j.at("node").get<std::string>();
  m.expert = j.at("expert").get<std::string>();
  m.matrix = j.at("matrix").get<PairwiseMatrix>();
}

inline void to_json(nlohmann::json& j, const AggregateRecord& a) {
  j = {{"level", to_string(a.level)}, {"node", a.node},           {"matrix", a.matrix},
       {"priorities", a.priorities},  {"consistency", a.consistency}, {"flagged", a.flagged}};
}
inline void from_json(const nlohmann::json& j, AggregateRecord& a) {
  a.level = parse_matrix_level(j.at("level").get<std::string>());
  a.node = j.at("node").get<std::string>();
  a.matrix = j.at("matrix").get<PairwiseMatrix>();
  a.priorities = j.at("priorities").get<PriorityVector>();
  a.consistency = j.at("consistency").get<ConsistencyReport>();
  a.flagged = j.at("flagged").get<bool>();
}

inline nlohmann::json to_json_value(const SessionState& s) {
  nlohmann::json j;
  j["schema"] = kSessionSchema;
  j["version"] = kSessionVersion;
  j["config"] = s.config;
  j["provenance"] = {{"backend", s.backend}, {"templates", s.templates}};
  j["completed"] = to_string(s.completed);
  j["advice"] = {{"warnings", s.advice.warnings}};
  j["advice"]["expert_range"] =
      s.advice.expert_range ? nlohmann::json{s.advice.expert_range->first, s.advice.expert_range->second}
                            : nlohmann::json(nullptr);
  j["advice"]["levels"] = s.advice.levels ? nlohmann::json(*s.advice.levels) : nlohmann::json(nullptr);
  j["expert_count"] = s.expert_count;
  j["personas"] = s.personas;
  j["criteria"] = s.criteria;
  j["subcriteria"] = s.subcriteria;
  j["alternatives"] = s.alternatives;
  j["tree"] = s.tree;
  j["matrices"] = s.matrices;
  j["aggregates"] = s.aggregates;
  if (s.scores) {
    j["scores"] = {{"labels", s.scores->labels}, {"scores", s.scores->scores}, {"ranking", s.scores->ranking}};
  } else {
    j["scores"] = nullptr;
  }
  j["repairs"] = nlohmann::json::array();
  for (const auto& r : s.repairs) j["repairs"].push_back({{"stage", r.stage}, {"expert", r.expert}, {"repairs", r.repairs}});
  j["failures"] = nlohmann::json::array();
  for (const auto& f : s.failures)
    j["failures"].push_back(
        {{"stage", f.stage}, {"expert", f.expert}, {"message", f.message}, {"transcript", f.transcript}});
  j["conversations"] = {{"guide", s.guide_log ? nlohmann::json(*s.guide_log) : nlohmann::json(nullptr)},
                        {"experts", s.expert_logs}};
  return j;
}

inline SessionState session_from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.value("schema", std::string{}) != kSessionSchema)
    throw DataError("not an ahp-panel session file");
  const int version = j.at("version").get<int>();
  if (version > kSessionVersion)
    throw DataError("session was written by schema version " + std::to_string(version) +
                    "; this build reads up to version " + std::to_string(kSessionVersion));
  if (version < 1) throw DataError("bad session schema version " + std::to_string(version));
  try {
    SessionState s;
    s.config = j.at("config");
    s.backend = j.at("provenance").at("backend").get<std::string>();
    s.templates = j.at("provenance").at("templates").get<std::string>();
    try {
      s.completed = parse_stage(j.at("completed").get<std::string>());
    } catch (const UsageError& e) {
      throw DataError(e.what());
    }
    const auto& adv = j.at("advice");
    s.advice.warnings = adv.at("warnings").get<std::vector<std::string>>();
    if (!adv.at("expert_range").is_null())
      s.advice.expert_range = std::pair{adv["expert_range"][0].get<int>(), adv["expert_range"][1].get<int>()};
    if (!adv.at("levels").is_null()) s.advice.levels = adv["levels"].get<int>();
    s.expert_count = j.at("expert_count").get<int>();
    s.personas = j.at("personas").get<std::vector<ExpertPersona>>();
    s.criteria = j.at("criteria").get<ElicitationRound>();
    s.subcriteria = j.at("subcriteria").get<std::vector<ElicitationRound>>();
    s.alternatives = j.at("alternatives").get<ElicitationRound>();
    s.tree = j.at("tree").get<HierarchyTree>();
    s.matrices = j.at("matrices").get<std::vector<ExpertMatrix>>();
    s.aggregates = j.at("aggregates").get<std::vector<AggregateRecord>>();
    if (!j.at("scores").is_null()) {
      AlternativeScores sc;
      sc.labels = j["scores"].at("labels").get<std::vector<std::string>>();
      sc.scores = j["scores"].at("scores").get<std::vector<double>>();
      sc.ranking = j["scores"].at("ranking").get<std::vector<std::size_t>>();
      s.scores = sc;
    }
    for (const auto& r : j.at("repairs"))
      s.repairs.push_back({r.at("stage").get<std::string>(), r.at("expert").get<std::string>(), r.at("repairs").get<int>()});
    for (const auto& f : j.at("failures"))
      s.failures.push_back({f.at("stage").get<std::string>(), f.at("expert").get<std::string>(),
                            f.at("message").get<std::string>(), f.at("transcript").get<Conversation>()});
    const auto& conv = j.at("conversations");
    if (!conv.at("guide").is_null()) s.guide_log = conv["guide"].get<ConversationLog>();
    s.expert_logs = conv.at("experts").get<std::vector<ConversationLog>>();
    if (s.expert_logs.size() != s.personas.size())
      throw DataError("session has " + std::to_string(s.expert_logs.size()) + " expert conversations for " +
                      std::to_string(s.personas.size()) + " personas");
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("corrupt session file: ") + e.what());
  }
}

inline std::string dump_session(const SessionState& s) { return to_json_value(s).dump(1) + "\n"; }

// Write to a sibling temp file, then rename over the target.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto dir = path.parent_path();
  if (!dir.empty()) std::filesystem::create_directories(dir);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw DataError("write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, path);
}

inline void save_session(const std::filesystem::path& path, const SessionState& s) {
  write_file_atomic(path, dump_session(s));
}

inline SessionState load_session(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open session '" + path.string() + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("corrupt session file '" + path.string() + "': " + e.what());
  }
  return session_from_json(j);
}

}  // namespace ahp

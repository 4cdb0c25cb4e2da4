#pragma once

// Pipeline configuration, read from an INI file:
//
//   [run]      goal, expert_count, levels, top_criteria, sub_per_criterion,
//              alternatives_per_expert, final_alternatives, aggregation,
//              cr_threshold, strict, max_repairs, parallelism, matrix_batch_size,
//              prompt_dir
//   [panel]    personas_file, skip_advice
//   [backend]  kind, script, transcript, endpoint, model, api_key_env,
//              timeout_seconds, max_retries, backoff_ms, min_interval_ms
//   [context]  budget_tokens, rotate_at, tokens_per_word
//   [pricing]  per_1k_input, per_1k_output, blended_per_1k
//   [aliases]  <label> = <label it duplicates>
//
// Unknown sections and keys are errors. Relative paths resolve against the
// directory holding the config file.

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ahp/conversation.hpp"
#include "ahp/cost.hpp"
#include "ahp/error.hpp"
#include "ahp/live_backend.hpp"
#include "ahp/matrix.hpp"
#include "json.hpp"

namespace ahp {

enum class BackendKind { live, replay, scripted };

inline const char* to_string(BackendKind k) {
  switch (k) {
    case BackendKind::live: return "live";
    case BackendKind::replay: return "replay";
    default: return "scripted";
  }
}

inline BackendKind parse_backend_kind(const std::string& s) {
  if (s == "live") return BackendKind::live;
  if (s == "replay") return BackendKind::replay;
  if (s == "scripted") return BackendKind::scripted;
  throw UsageError("unknown backend '" + s + "' (expected live, replay or scripted)");
}

struct BackendConfig {
  BackendKind kind = BackendKind::scripted;
  std::string script;      // scripted rule table
  std::string transcript;  // replay transcript
  LiveConfig live;
};

struct PipelineConfig {
  std::string goal;
  std::optional<int> expert_count;  // unset: take the guide's advice, else 7
  int levels = 2;
  int top_criteria = 7;
  int sub_per_criterion = 3;
  int alternatives_per_expert = 5;
  int final_alternatives = 5;
  Aggregation aggregation = Aggregation::geometric;
  double cr_threshold = kDefaultCrThreshold;
  bool strict = false;
  int max_repairs = 2;
  int parallelism = 4;
  int matrix_batch_size = 3;
  std::string prompt_dir;
  std::string personas_file;
  bool skip_advice = false;
  BackendConfig backend;
  ContextBudget context;
  Pricing pricing;
  std::vector<std::pair<std::string, std::string>> aliases;

  void validate() const {
    if (goal.empty()) throw DataError("config: [run] goal is required");
    if (expert_count && *expert_count < 2) throw DataError("config: expert_count must be >= 2");
    if (levels != 2) throw DataError("config: only two-level hierarchies are supported (levels = 2)");
    for (auto [name, v] : {std::pair{"top_criteria", top_criteria}, {"sub_per_criterion", sub_per_criterion},
                           {"alternatives_per_expert", alternatives_per_expert},
                           {"final_alternatives", final_alternatives}})
      if (v < 2) throw DataError(std::string("config: ") + name + " must be >= 2");
    if (top_criteria > 10 || sub_per_criterion > 10 || final_alternatives > 10)
      throw DataError("config: matrices are limited to order 10 (random index table)");
    if (!(cr_threshold > 0.0 && cr_threshold <= 1.0)) throw DataError("config: cr_threshold must be in (0, 1]");
    if (max_repairs < 0) throw DataError("config: max_repairs must be >= 0");
    if (parallelism < 1) throw DataError("config: parallelism must be >= 1");
    if (matrix_batch_size < 1) throw DataError("config: matrix_batch_size must be >= 1");
    if (context.budget_tokens < 1 || !(context.rotate_at > 0.0 && context.rotate_at <= 1.0) ||
        !(context.tokens_per_word > 0.0))
      throw DataError("config: bad [context] values");
  }
};

namespace detail {

using boost::property_tree::ptree;

inline const std::map<std::string, std::set<std::string>>& config_schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"run",
       {"goal", "expert_count", "levels", "top_criteria", "sub_per_criterion", "alternatives_per_expert",
        "final_alternatives", "aggregation", "cr_threshold", "strict", "max_repairs", "parallelism",
        "matrix_batch_size", "prompt_dir"}},
      {"panel", {"personas_file", "skip_advice"}},
      {"backend",
       {"kind", "script", "transcript", "endpoint", "model", "api_key_env", "timeout_seconds", "max_retries",
        "backoff_ms", "min_interval_ms"}},
      {"context", {"budget_tokens", "rotate_at", "tokens_per_word"}},
      {"pricing", {"per_1k_input", "per_1k_output", "blended_per_1k"}},
      {"aliases", {}},
  };
  return s;
}

template <class T>
T get_value(const ptree& section, const std::string& sec, const std::string& key, T fallback) {
  auto it = section.find(key);
  if (it == section.not_found()) return fallback;
  const std::string raw = it->second.data();
  if constexpr (std::is_same_v<T, std::string>) {
    return raw;
  } else if constexpr (std::is_same_v<T, bool>) {
    if (raw == "true" || raw == "yes" || raw == "1") return true;
    if (raw == "false" || raw == "no" || raw == "0") return false;
    throw DataError("config: [" + sec + "] " + key + " must be true or false, got '" + raw + "'");
  } else {
    auto v = it->second.template get_value_optional<T>();
    if (!v) throw DataError("config: [" + sec + "] " + key + " has a bad value '" + raw + "'");
    return *v;
  }
}

inline std::string resolve(const std::filesystem::path& base, const std::string& p) {
  if (p.empty()) return p;
  std::filesystem::path path(p);
  return (path.is_absolute() ? path : base / path).lexically_normal().string();
}

}  // namespace detail

inline PipelineConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = ".") {
  using detail::get_value;
  detail::ptree pt;
  try {
    boost::property_tree::ini_parser::read_ini(in, pt);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw DataError(std::string("config: ") + e.what());
  }
  const auto& schema = detail::config_schema();
  for (const auto& [sec, body] : pt) {
    auto it = schema.find(sec);
    if (it == schema.end()) throw DataError("config: unknown section [" + sec + "]");
    if (body.empty() && !body.data().empty()) throw DataError("config: key '" + sec + "' outside a section");
    if (sec == "aliases") continue;
    for (const auto& [key, v] : body)
      if (!it->second.count(key)) throw DataError("config: unknown key '" + key + "' in [" + sec + "]");
  }
  static const detail::ptree empty;
  auto section = [&](const std::string& s) -> const detail::ptree& {
    auto it = pt.find(s);
    return it == pt.not_found() ? empty : it->second;
  };

  PipelineConfig c;
  const auto& run = section("run");
  c.goal = get_value<std::string>(run, "run", "goal", "");
  if (run.find("expert_count") != run.not_found()) c.expert_count = get_value<int>(run, "run", "expert_count", 7);
  c.levels = get_value<int>(run, "run", "levels", c.levels);
  c.top_criteria = get_value<int>(run, "run", "top_criteria", c.top_criteria);
  c.sub_per_criterion = get_value<int>(run, "run", "sub_per_criterion", c.sub_per_criterion);
  c.alternatives_per_expert = get_value<int>(run, "run", "alternatives_per_expert", c.alternatives_per_expert);
  c.final_alternatives = get_value<int>(run, "run", "final_alternatives", c.final_alternatives);
  c.aggregation = parse_aggregation(get_value<std::string>(run, "run", "aggregation", "geometric"));
  c.cr_threshold = get_value<double>(run, "run", "cr_threshold", c.cr_threshold);
  c.strict = get_value<bool>(run, "run", "strict", c.strict);
  c.max_repairs = get_value<int>(run, "run", "max_repairs", c.max_repairs);
  c.parallelism = get_value<int>(run, "run", "parallelism", c.parallelism);
  c.matrix_batch_size = get_value<int>(run, "run", "matrix_batch_size", c.matrix_batch_size);
  c.prompt_dir = detail::resolve(base_dir, get_value<std::string>(run, "run", "prompt_dir", ""));

  const auto& panel = section("panel");
  c.personas_file = detail::resolve(base_dir, get_value<std::string>(panel, "panel", "personas_file", ""));
  c.skip_advice = get_value<bool>(panel, "panel", "skip_advice", c.skip_advice);

  const auto& be = section("backend");
  try {
    c.backend.kind = parse_backend_kind(get_value<std::string>(be, "backend", "kind", "scripted"));
  } catch (const UsageError& e) {
    throw DataError(std::string("config: ") + e.what());
  }
  c.backend.script = detail::resolve(base_dir, get_value<std::string>(be, "backend", "script", ""));
  c.backend.transcript = detail::resolve(base_dir, get_value<std::string>(be, "backend", "transcript", ""));
  auto& live = c.backend.live;
  live.endpoint = get_value<std::string>(be, "backend", "endpoint", live.endpoint);
  live.model = get_value<std::string>(be, "backend", "model", live.model);
  live.api_key_env = get_value<std::string>(be, "backend", "api_key_env", live.api_key_env);
  live.timeout_seconds = get_value<int>(be, "backend", "timeout_seconds", live.timeout_seconds);
  live.max_retries = get_value<int>(be, "backend", "max_retries", live.max_retries);
  live.backoff = std::chrono::milliseconds(get_value<int>(be, "backend", "backoff_ms", 1000));
  live.min_interval = std::chrono::milliseconds(get_value<int>(be, "backend", "min_interval_ms", 0));

  const auto& ctx = section("context");
  c.context.budget_tokens = get_value<int>(ctx, "context", "budget_tokens", c.context.budget_tokens);
  c.context.rotate_at = get_value<double>(ctx, "context", "rotate_at", c.context.rotate_at);
  c.context.tokens_per_word = get_value<double>(ctx, "context", "tokens_per_word", c.context.tokens_per_word);

  const auto& pr = section("pricing");
  for (auto [key, slot] : {std::pair{"per_1k_input", &c.pricing.per_1k_input},
                           {"per_1k_output", &c.pricing.per_1k_output},
                           {"blended_per_1k", &c.pricing.blended_per_1k}})
    if (pr.find(key) != pr.not_found()) *slot = get_value<double>(pr, "pricing", key, 0.0);

  for (const auto& [label, v] : section("aliases")) c.aliases.emplace_back(label, v.data());

  c.validate();
  return c;
}

inline PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config '" + path.string() + "'");
  return parse_config(in, path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

inline Pricing pricing_from_summary(const nlohmann::json& summary) {
  Pricing p;
  if (!summary.contains("pricing")) return p;
  const auto& j = summary["pricing"];
  auto get = [&j](const char* k) -> std::optional<double> {
    if (!j.contains(k) || j[k].is_null()) return std::nullopt;
    return j[k].get<double>();
  };
  p.per_1k_input = get("per_1k_input");
  p.per_1k_output = get("per_1k_output");
  p.blended_per_1k = get("blended_per_1k");
  return p;
}

inline bool has_pricing(const Pricing& p) { return p.blended_per_1k || (p.per_1k_input && p.per_1k_output); }

// Snapshot stored in sessions and reports. Paths and credentials are left out
// so reports do not depend on where the run happened.
inline nlohmann::json config_summary(const PipelineConfig& c) {
  nlohmann::json j = {{"goal", c.goal},
                      {"levels", c.levels},
                      {"top_criteria", c.top_criteria},
                      {"sub_per_criterion", c.sub_per_criterion},
                      {"alternatives_per_expert", c.alternatives_per_expert},
                      {"final_alternatives", c.final_alternatives},
                      {"aggregation", to_string(c.aggregation)},
                      {"cr_threshold", c.cr_threshold},
                      {"strict", c.strict},
                      {"max_repairs", c.max_repairs},
                      {"matrix_batch_size", c.matrix_batch_size},
                      {"context", {{"budget_tokens", c.context.budget_tokens},
                                   {"rotate_at", c.context.rotate_at},
                                   {"tokens_per_word", c.context.tokens_per_word}}},
                      {"aliases", c.aliases}};
  j["expert_count"] = c.expert_count ? nlohmann::json(*c.expert_count) : nlohmann::json(nullptr);
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  j["pricing"] = {{"per_1k_input", opt(c.pricing.per_1k_input)},
                  {"per_1k_output", opt(c.pricing.per_1k_output)},
                  {"blended_per_1k", opt(c.pricing.blended_per_1k)}};
  return j;
}

}  // namespace ahp

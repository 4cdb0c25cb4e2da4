#pragma once

// Offline backends: a rule-table script and a transcript replayer.

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "ahp/conversation.hpp"
#include "ahp/error.hpp"
#include "json.hpp"

namespace ahp {

inline nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

// --- scripted ---------------------------------------------------------------

// First rule whose persona matches ("*" = any) and whose every `contains`
// fragment occurs in the prompt supplies the reply.
struct ScriptRule {
  std::string persona = "*";
  std::vector<std::string> contains;
  std::string reply;
};

inline void from_json(const nlohmann::json& j, ScriptRule& r) {
  r.persona = j.value("persona", std::string{"*"});
  r.contains.clear();
  if (j.contains("contains")) {
    if (j["contains"].is_string()) r.contains.push_back(j["contains"].get<std::string>());
    else r.contains = j["contains"].get<std::vector<std::string>>();
  }
  r.reply = j.at("reply").get<std::string>();
}

inline void to_json(nlohmann::json& j, const ScriptRule& r) {
  j = {{"persona", r.persona}, {"contains", r.contains}, {"reply", r.reply}};
}

class ScriptedBackend : public ExpertBackend {
 public:
  explicit ScriptedBackend(std::vector<ScriptRule> rules) : rules_(std::move(rules)) {}

  static ScriptedBackend from_file(const std::filesystem::path& path) {
    const auto j = read_json_file(path);
    const auto& rules = j.is_object() ? j.at("rules") : j;
    try {
      return ScriptedBackend(rules.get<std::vector<ScriptRule>>());
    } catch (const nlohmann::json::exception& e) {
      throw DataError("bad script '" + path.string() + "': " + e.what());
    }
  }

  std::string kind() const override { return "scripted"; }

  BackendReply complete(const ExpertPersona& persona, const Conversation&, const std::string& prompt) override {
    for (const auto& r : rules_) {
      if (r.persona != "*" && r.persona != persona.id) continue;
      bool all = true;
      for (const auto& c : r.contains)
        if (prompt.find(c) == std::string::npos) {
          all = false;
          break;
        }
      if (all) return {r.reply, std::nullopt, std::nullopt};
    }
    throw BackendError("script has no rule for persona '" + persona.id + "' and prompt \"" + prompt.substr(0, 80) +
                       "...\"");
  }

 private:
  std::vector<ScriptRule> rules_;
};

// --- transcripts and replay --------------------------------------------------

struct TranscriptEntry {
  std::string persona;
  std::string prompt_hash;
  std::string prompt;
  std::string reply;
  int prompt_tokens = 0;
  int completion_tokens = 0;

  friend bool operator==(const TranscriptEntry&, const TranscriptEntry&) = default;
};

inline void to_json(nlohmann::json& j, const TranscriptEntry& e) {
  j = {{"persona", e.persona},
       {"prompt_hash", e.prompt_hash},
       {"prompt", e.prompt},
       {"reply", e.reply},
       {"token_counts", {{"prompt", e.prompt_tokens}, {"completion", e.completion_tokens}}}};
}

inline void from_json(const nlohmann::json& j, TranscriptEntry& e) {
  e.persona = j.value("persona", std::string{});
  e.prompt_hash = j.at("prompt_hash").get<std::string>();
  e.prompt = j.at("prompt").get<std::string>();
  e.reply = j.at("reply").get<std::string>();
  const auto& t = j.at("token_counts");
  e.prompt_tokens = t.at("prompt").get<int>();
  e.completion_tokens = t.at("completion").get<int>();
}

// Every exchange in the logs, in log order, keyed by the request position.
inline std::vector<TranscriptEntry> transcript_from_logs(const std::vector<ConversationLog>& logs) {
  std::vector<TranscriptEntry> out;
  for (const auto& log : logs)
    for (const Conversation* c : log.all()) {
      const auto& msgs = c->messages();
      for (std::size_t k = 0; k + 1 < msgs.size(); k += 2)
        out.push_back({c->persona_id(),
                       prompt_hash(c->persona_id(), c->system(), std::span(msgs.data(), k), msgs[k].text),
                       msgs[k].text, msgs[k + 1].text, msgs[k].tokens, msgs[k + 1].tokens});
    }
  return out;
}

class ReplayBackend : public ExpertBackend {
 public:
  explicit ReplayBackend(std::vector<TranscriptEntry> entries) {
    for (auto& e : entries) {
      auto [it, inserted] = by_hash_.emplace(e.prompt_hash, e);
      if (!inserted && it->second.reply != e.reply)
        throw DataError("transcript has conflicting replies for prompt hash " + e.prompt_hash);
    }
  }

  static ReplayBackend from_file(const std::filesystem::path& path) {
    try {
      return ReplayBackend(read_json_file(path).get<std::vector<TranscriptEntry>>());
    } catch (const nlohmann::json::exception& e) {
      throw DataError("bad transcript '" + path.string() + "': " + e.what());
    }
  }

  std::string kind() const override { return "replay"; }

  BackendReply complete(const ExpertPersona& persona, const Conversation& history, const std::string& prompt) override {
    const auto h = prompt_hash(history, prompt);
    auto it = by_hash_.find(h);
    if (it == by_hash_.end() || it->second.prompt != prompt)
      throw ReplayDivergence("replay diverged for '" + persona.id + "' at turn " +
                             std::to_string(history.messages().size() / 2 + 1) + " (prompt hash " + h +
                             "): \"" + prompt.substr(0, 80) + "...\"");
    return {it->second.reply, it->second.prompt_tokens, it->second.completion_tokens};
  }

 private:
  std::map<std::string, TranscriptEntry> by_hash_;
};

}  // namespace ahp

#pragma once

// Per-persona chat history with token accounting, plus the backend contract
// and the converse/rotate operations built on it.

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "ahp/elicitation.hpp"
#include "ahp/error.hpp"
#include "ahp/persona.hpp"
#include "json.hpp"

namespace ahp {

inline constexpr double kDefaultTokensPerWord = 0.75;

struct ContextBudget {
  int budget_tokens = 8192;
  double rotate_at = 0.9;  // fraction of the budget at which the pipeline rotates
  double tokens_per_word = kDefaultTokensPerWord;
};

inline int estimate_tokens(std::string_view text, double tokens_per_word = kDefaultTokensPerWord) {
  return static_cast<int>(std::llround(static_cast<double>(word_count(text)) * tokens_per_word));
}

enum class Author { user, expert };

inline const char* to_string(Author a) { return a == Author::user ? "user" : "expert"; }

struct Message {
  Author author = Author::user;
  std::string text;
  int tokens = 0;

  friend bool operator==(const Message&, const Message&) = default;
};

class Conversation {
 public:
  Conversation() = default;
  Conversation(std::string persona_id, std::string system, double tokens_per_word = kDefaultTokensPerWord)
      : persona_id_(std::move(persona_id)),
        system_(std::move(system)),
        system_tokens_(estimate_tokens(system_, tokens_per_word)) {}

  const std::string& persona_id() const noexcept { return persona_id_; }
  const std::string& system() const noexcept { return system_; }
  const std::vector<Message>& messages() const noexcept { return messages_; }
  int system_tokens() const noexcept { return system_tokens_; }

  // Context occupancy: system instructions plus every message so far.
  int tokens() const noexcept {
    int t = system_tokens_;
    for (const auto& m : messages_) t += m.tokens;
    return t;
  }

  // Summary of committed decisions, prepended to the next user message.
  const std::string& carryover() const noexcept { return carryover_; }
  void set_carryover(std::string c) { carryover_ = std::move(c); }

  // The only mutation: one user turn followed by the expert's reply.
  void append_exchange(Message user, Message expert) {
    if (user.author != Author::user || expert.author != Author::expert)
      throw DataError("conversation turns must alternate user, expert");
    messages_.push_back(std::move(user));
    messages_.push_back(std::move(expert));
    carryover_.clear();
  }

  friend bool operator==(const Conversation&, const Conversation&) = default;

  friend void to_json(nlohmann::json& j, const Conversation& c) {
    j = {{"persona", c.persona_id_}, {"system", c.system_}, {"system_tokens", c.system_tokens_},
         {"messages", nlohmann::json::array()}};
    for (const auto& m : c.messages_)
      j["messages"].push_back({{"author", to_string(m.author)}, {"text", m.text}, {"tokens", m.tokens}});
    if (!c.carryover_.empty()) j["carryover"] = c.carryover_;
  }

  friend void from_json(const nlohmann::json& j, Conversation& c) {
    c.persona_id_ = j.at("persona").get<std::string>();
    c.system_ = j.at("system").get<std::string>();
    c.system_tokens_ = j.at("system_tokens").get<int>();
    c.carryover_ = j.value("carryover", std::string{});
    c.messages_.clear();
    Author expected = Author::user;
    for (const auto& m : j.at("messages")) {
      const auto a = m.at("author").get<std::string>();
      Author author = a == "user" ? Author::user : a == "expert" ? Author::expert : throw DataError("bad author '" + a + "'");
      if (author != expected) throw DataError("conversation turns do not alternate");
      c.messages_.push_back({author, m.at("text").get<std::string>(), m.at("tokens").get<int>()});
      expected = author == Author::user ? Author::expert : Author::user;
    }
    if (expected != Author::user) throw DataError("conversation ends with an unanswered user message");
  }

 private:
  std::string persona_id_;
  std::string system_;
  int system_tokens_ = 0;
  std::vector<Message> messages_;
  std::string carryover_;
};

// Fresh conversation for the same persona seeded with the carryover summary.
inline Conversation rotate_conversation(const Conversation& c, const std::string& carryover,
                                        double tokens_per_word = kDefaultTokensPerWord) {
  Conversation fresh(c.persona_id(), c.system(), tokens_per_word);
  fresh.set_carryover(carryover);
  return fresh;
}

// Every conversation held with one persona: archived ones first, then the active one.
struct ConversationLog {
  std::vector<Conversation> archived;
  Conversation active;

  void rotate(const std::string& carryover, double tokens_per_word = kDefaultTokensPerWord) {
    Conversation next = rotate_conversation(active, carryover, tokens_per_word);
    archived.push_back(std::move(active));
    active = std::move(next);
  }

  std::vector<const Conversation*> all() const {
    std::vector<const Conversation*> out;
    for (const auto& c : archived) out.push_back(&c);
    out.push_back(&active);
    return out;
  }

  friend bool operator==(const ConversationLog&, const ConversationLog&) = default;
};

inline void to_json(nlohmann::json& j, const ConversationLog& l) {
  j = {{"archived", l.archived}, {"active", l.active}};
}
inline void from_json(const nlohmann::json& j, ConversationLog& l) {
  l.archived = j.at("archived").get<std::vector<Conversation>>();
  l.active = j.at("active").get<Conversation>();
}

// --- backend contract -------------------------------------------------------

struct BackendReply {
  std::string text;
  std::optional<int> prompt_tokens;      // as reported by the backend, if any
  std::optional<int> completion_tokens;
};

class ExpertBackend {
 public:
  virtual ~ExpertBackend() = default;
  virtual std::string kind() const = 0;
  // `history` is the conversation before `prompt` is appended.
  virtual BackendReply complete(const ExpertPersona& persona, const Conversation& history,
                                const std::string& prompt) = 0;
};

// 64-bit FNV-1a over persona, instructions, prior turns and the new prompt.
// Identifies a request position independently of wall-clock or run order.
inline std::string prompt_hash(const std::string& persona_id, const std::string& system,
                               std::span<const Message> history, const std::string& prompt) {
  std::uint64_t h = 1469598103934665603ull;
  auto feed = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    h ^= 0x1f;  // field separator
    h *= 1099511628211ull;
  };
  feed(persona_id);
  feed(system);
  for (const auto& m : history) {
    feed(to_string(m.author));
    feed(m.text);
  }
  feed(prompt);
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

inline std::string prompt_hash(const Conversation& c, const std::string& prompt) {
  return prompt_hash(c.persona_id(), c.system(), c.messages(), prompt);
}

// The message actually sent for `message`: any pending carryover goes first.
inline std::string outgoing_text(const Conversation& c, const std::string& message) {
  return c.carryover().empty() ? message : c.carryover() + "\n\n" + message;
}

// Sends one user message and appends the exchange. Throws ContextBudgetExceeded
// (nothing sent, conversation untouched) when the message would push the
// conversation past the budget.
inline std::string converse(ExpertBackend& backend, const ExpertPersona& persona, Conversation& conversation,
                            const std::string& message, const ContextBudget& budget = {}) {
  if (conversation.persona_id() != persona.id)
    throw DataError("conversation of '" + conversation.persona_id() + "' used with persona '" + persona.id + "'");
  const std::string text = outgoing_text(conversation, message);
  const int user_tokens = estimate_tokens(text, budget.tokens_per_word);
  if (conversation.tokens() + user_tokens > budget.budget_tokens)
    throw ContextBudgetExceeded("conversation with '" + persona.id + "' at " + std::to_string(conversation.tokens()) +
                                " tokens cannot take a " + std::to_string(user_tokens) + "-token message (budget " +
                                std::to_string(budget.budget_tokens) + ")");
  BackendReply reply = backend.complete(persona, conversation, text);
  const int expert_tokens = reply.completion_tokens ? *reply.completion_tokens
                                                    : estimate_tokens(reply.text, budget.tokens_per_word);
  conversation.append_exchange({Author::user, text, user_tokens}, {Author::expert, reply.text, expert_tokens});
  return reply.text;
}

}  // namespace ahp

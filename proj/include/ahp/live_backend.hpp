#pragma once

// Chat-completion client: system message = persona instructions, then the
// alternating user/assistant turns, then the new user prompt.

#include <chrono>
#include <cstdlib>
#include <mutex>
#include <regex>
#include <string>
#include <thread>

#include "ahp/conversation.hpp"
#include "ahp/error.hpp"
#include "httplib.h"
#include "json.hpp"

namespace ahp {

struct LiveConfig {
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string model = "gpt-4";
  std::string api_key_env = "OPENAI_API_KEY";
  int timeout_seconds = 120;
  int max_retries = 3;
  std::chrono::milliseconds backoff{1000};      // doubled after each failed attempt
  std::chrono::milliseconds min_interval{0};    // rate limit between requests
};

// Spaces requests at least `interval` apart across threads.
class RateLimiter {
 public:
  explicit RateLimiter(std::chrono::milliseconds interval) : interval_(interval) {}

  void acquire() {
    std::chrono::steady_clock::time_point slot;
    {
      std::lock_guard lock(mu_);
      const auto now = std::chrono::steady_clock::now();
      slot = std::max(now, next_);
      next_ = slot + interval_;
    }
    std::this_thread::sleep_until(slot);
  }

 private:
  std::mutex mu_;
  std::chrono::milliseconds interval_;
  std::chrono::steady_clock::time_point next_{};
};

inline nlohmann::json chat_request(const std::string& model, const Conversation& history, const std::string& prompt) {
  nlohmann::json msgs = nlohmann::json::array();
  msgs.push_back({{"role", "system"}, {"content", history.system()}});
  for (const auto& m : history.messages())
    msgs.push_back({{"role", m.author == Author::user ? "user" : "assistant"}, {"content", m.text}});
  msgs.push_back({{"role", "user"}, {"content", prompt}});
  return {{"model", model}, {"messages", msgs}};
}

class LiveBackend : public ExpertBackend {
 public:
  // Resolves the credential immediately so a missing key fails before any work.
  explicit LiveBackend(LiveConfig cfg) : cfg_(std::move(cfg)), limiter_(cfg_.min_interval) {
    const char* key = std::getenv(cfg_.api_key_env.c_str());
    if (key == nullptr || *key == '\0')
      throw CredentialError("environment variable " + cfg_.api_key_env + " holding the API key is not set");
    key_ = key;
    static const std::regex url(R"(^(https?://[^/]+)(/.*)?$)");
    std::smatch m;
    if (!std::regex_match(cfg_.endpoint, m, url)) throw UsageError("bad endpoint URL '" + cfg_.endpoint + "'");
    base_ = m[1];
    path_ = m[2].matched ? std::string(m[2]) : "/";
  }

  std::string kind() const override { return "live"; }

  BackendReply complete(const ExpertPersona&, const Conversation& history, const std::string& prompt) override {
    const std::string body = chat_request(cfg_.model, history, prompt).dump();
    std::string last_error;
    for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
      if (attempt > 0) std::this_thread::sleep_for(cfg_.backoff * (1 << (attempt - 1)));
      limiter_.acquire();
      httplib::Client cli(base_);
      cli.set_connection_timeout(cfg_.timeout_seconds, 0);
      cli.set_read_timeout(cfg_.timeout_seconds, 0);
      cli.set_write_timeout(cfg_.timeout_seconds, 0);
      auto res = cli.Post(path_, {{"Authorization", "Bearer " + key_}}, body, "application/json");
      if (!res) {
        last_error = httplib::to_string(res.error());
        continue;
      }
      if (res->status == 429 || res->status >= 500) {
        last_error = "HTTP " + std::to_string(res->status);
        continue;
      }
      if (res->status != 200)
        throw BackendError("chat endpoint returned HTTP " + std::to_string(res->status) + ": " +
                           res->body.substr(0, 200));
      return parse_response(res->body);
    }
    throw TransportError("chat endpoint unreachable after " + std::to_string(cfg_.max_retries + 1) +
                         " attempts: " + last_error);
  }

  static BackendReply parse_response(const std::string& body) {
    try {
      const auto j = nlohmann::json::parse(body);
      BackendReply r;
      r.text = j.at("choices").at(0).at("message").at("content").get<std::string>();
      if (j.contains("usage")) {
        const auto& u = j["usage"];
        if (u.contains("prompt_tokens")) r.prompt_tokens = u["prompt_tokens"].get<int>();
        if (u.contains("completion_tokens")) r.completion_tokens = u["completion_tokens"].get<int>();
      }
      return r;
    } catch (const nlohmann::json::exception& e) {
      throw BackendError(std::string("malformed chat completion response: ") + e.what());
    }
  }

 private:
  LiveConfig cfg_;
  RateLimiter limiter_;
  std::string key_;
  std::string base_;
  std::string path_;
};

}  // namespace ahp

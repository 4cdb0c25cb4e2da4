#pragma once

// Token-based cost accounting, in integer cents.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "ahp/conversation.hpp"
#include "ahp/error.hpp"
#include "json.hpp"

namespace ahp {

struct Pricing {
  std::optional<double> per_1k_input;
  std::optional<double> per_1k_output;
  std::optional<double> blended_per_1k;  // takes precedence when set
};

struct PersonaCost {
  std::string persona;
  std::string role;
  long input_tokens = 0;   // system instructions + user messages
  long output_tokens = 0;  // expert replies
  long cents = 0;

  long tokens() const { return input_tokens + output_tokens; }
};

struct CostReport {
  std::vector<PersonaCost> experts;
  std::vector<PersonaCost> guide;
  long panel_cents = 0;
  long guide_cents = 0;
  long total_cents = 0;
  long headline_dollars = 0;  // total rounded up to whole dollars
  double tokens_per_word = kDefaultTokensPerWord;
  std::string pricing;
  std::string rounding_rule =
      "each persona's cost is rounded half-up to whole cents before summing; the headline rounds the total up to "
      "whole dollars";
};

struct CostInput {
  std::string persona;
  bool guide = false;
  const ConversationLog* log = nullptr;
};

inline long micro(double dollars) { return std::llround(dollars * 1e6); }

// tokens/1000 * rate, half-up to cents, in integer arithmetic on micro-dollars.
inline long cents_for(long input_tokens, long output_tokens, const Pricing& p) {
  long long micro_thousandths = 0;
  if (p.blended_per_1k) {
    micro_thousandths = static_cast<long long>(input_tokens + output_tokens) * micro(*p.blended_per_1k);
  } else if (p.per_1k_input && p.per_1k_output) {
    micro_thousandths = static_cast<long long>(input_tokens) * micro(*p.per_1k_input) +
                        static_cast<long long>(output_tokens) * micro(*p.per_1k_output);
  } else {
    throw DataError("pricing needs a blended rate or both input and output rates");
  }
  // micro-dollars * 1000 -> cents is a division by 10^7.
  return static_cast<long>((micro_thousandths + 5'000'000) / 10'000'000);
}

inline std::string format_cents(long cents) {
  std::string s = std::to_string(cents / 100) + ".";
  const long c = cents % 100;
  s += (c < 10 ? "0" : "") + std::to_string(c);
  return "$" + s;
}

inline CostReport estimate_cost(const std::vector<CostInput>& inputs, const Pricing& pricing,
                                double tokens_per_word = kDefaultTokensPerWord) {
  CostReport r;
  r.tokens_per_word = tokens_per_word;
  if (pricing.blended_per_1k) r.pricing = "blended " + format_cents(micro(*pricing.blended_per_1k) / 10'000) + "/1k";
  else if (pricing.per_1k_input && pricing.per_1k_output)
    r.pricing = "input " + format_cents(micro(*pricing.per_1k_input) / 10'000) + "/1k, output " +
                format_cents(micro(*pricing.per_1k_output) / 10'000) + "/1k";
  else
    throw DataError("pricing needs a blended rate or both input and output rates");
  for (const auto& in : inputs) {
    PersonaCost c{in.persona, in.guide ? "guide" : "expert"};
    if (in.log)
      for (const Conversation* conv : in.log->all()) {
        if (conv->messages().empty()) continue;
        c.input_tokens += conv->system_tokens();
        for (const auto& m : conv->messages())
          (m.author == Author::user ? c.input_tokens : c.output_tokens) += m.tokens;
      }
    c.cents = cents_for(c.input_tokens, c.output_tokens, pricing);
    (in.guide ? r.guide_cents : r.panel_cents) += c.cents;
    (in.guide ? r.guide : r.experts).push_back(c);
  }
  r.total_cents = r.panel_cents + r.guide_cents;
  r.headline_dollars = (r.total_cents + 99) / 100;
  return r;
}

inline void to_json(nlohmann::json& j, const PersonaCost& c) {
  j = {{"persona", c.persona},       {"role", c.role},     {"input_tokens", c.input_tokens},
       {"output_tokens", c.output_tokens}, {"tokens", c.tokens()}, {"cents", c.cents}};
}

inline void to_json(nlohmann::json& j, const CostReport& r) {
  j = {{"experts", r.experts},
       {"guide", r.guide},
       {"panel_cents", r.panel_cents},
       {"guide_cents", r.guide_cents},
       {"total_cents", r.total_cents},
       {"panel", format_cents(r.panel_cents)},
       {"total", format_cents(r.total_cents)},
       {"headline_dollars", r.headline_dollars},
       {"tokens_per_word", r.tokens_per_word},
       {"pricing", r.pricing},
       {"rounding_rule", r.rounding_rule}};
}

}  // namespace ahp

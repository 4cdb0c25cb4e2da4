#pragma once

// Ask -> parse -> remind loop around one expert conversation.

#include <functional>
#include <map>
#include <string>

#include "ahp/conversation.hpp"
#include "ahp/parse.hpp"
#include "ahp/prompts.hpp"

namespace ahp {

// Reminder sentence per violated rule.
inline std::string rule_reminder(const std::string& rule) {
  static const std::map<std::string, std::string> k{
      {"reciprocity",
       "AHP reciprocity: if A is rated x against B, then B must be rated 1/x against A."},
      {"scale", "Use only Saaty scale values: 1/9, 1/8, ..., 1/2, 1, 2, ..., 9."},
      {"diagonal", "Every item compared with itself scores exactly 1."},
      {"missing", "Every requested comparison or score must be present."},
      {"missing_matrix", "Provide every requested matrix, each under a heading naming it."},
      {"missing_section", "Provide a list under a heading for every requested criterion."},
      {"label", "Use the item names exactly as given."},
      {"shape", "Each matrix row needs exactly one value per compared item."},
      {"count", "Give exactly the requested number of items."},
      {"max_words", "Keep each name within the requested word limit."},
      {"duplicate", "Do not repeat an item."},
      {"range", "Scores must be whole numbers from 1 to 9."},
      {"integer", "Scores must be whole numbers from 1 to 9."},
      {"persona_format", "Give each expert as 'Title, Name:' followed by 'Background:' and 'Personality/Preferences:'."},
  };
  auto it = k.find(rule);
  return it == k.end() ? "Follow the requested format." : it->second;
}

inline std::string repair_prompt(const PromptLibrary& lib, const ValidationResult& violations) {
  std::string items;
  std::vector<std::string> rules;
  for (const auto& v : violations.violations)
    if (std::find(rules.begin(), rules.end(), v.rule) == rules.end()) rules.push_back(v.rule);
  for (const auto& r : rules) items += "\n- " + rule_reminder(r);
  std::size_t shown = 0;
  for (const auto& v : violations.violations) {
    if (shown++ == 8) {
      items += "\n- ...";
      break;
    }
    items += "\n- " + v.message;
  }
  return lib.render("repair", {{"items", items}});
}

struct ElicitOptions {
  int max_repairs = 2;
  ContextBudget budget;
  std::string stage;  // for error messages
};

template <class T>
struct Elicited {
  T value;
  int repairs = 0;
};

// Sends reminders until `parse` accepts the latest reply. After max_repairs
// failed reminders the exchange stays in the conversation and RepairExhausted
// is thrown.
template <class T>
Elicited<T> repair(ExpertBackend& backend, const ExpertPersona& persona, Conversation& conversation,
                   Parsed<T> first, const std::function<Parsed<T>(const std::string&)>& parse,
                   const PromptLibrary& lib, const ElicitOptions& opt) {
  Parsed<T> p = std::move(first);
  int attempts = 0;
  while (!p.ok()) {
    if (attempts == opt.max_repairs)
      throw RepairExhausted("expert '" + persona.id + "' failed stage " + opt.stage + " after " +
                            std::to_string(attempts) + " repair prompt(s): " + p.violations.summary());
    const auto reply = converse(backend, persona, conversation, repair_prompt(lib, p.violations), opt.budget);
    p = parse(reply);
    ++attempts;
  }
  return {std::move(*p.value), attempts};
}

template <class T>
Elicited<T> elicit(ExpertBackend& backend, const ExpertPersona& persona, Conversation& conversation,
                   const std::string& prompt, const std::function<Parsed<T>(const std::string&)>& parse,
                   const PromptLibrary& lib, const ElicitOptions& opt) {
  const auto reply = converse(backend, persona, conversation, prompt, opt.budget);
  return repair<T>(backend, persona, conversation, parse(reply), parse, lib, opt);
}

}  // namespace ahp

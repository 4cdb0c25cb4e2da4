#pragma once

// Guide and expert personas.

#include <cctype>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ahp/error.hpp"
#include "json.hpp"

namespace ahp {

enum class PersonaRole { guide, expert };

inline const char* to_string(PersonaRole r) { return r == PersonaRole::guide ? "guide" : "expert"; }

inline PersonaRole parse_persona_role(const std::string& s) {
  if (s == "guide") return PersonaRole::guide;
  if (s == "expert") return PersonaRole::expert;
  throw DataError("unknown persona role '" + s + "'");
}

struct ExpertPersona {
  std::string id;
  std::string name;
  std::string title;  // may be empty
  std::string description;
  std::string instructions;
  PersonaRole role = PersonaRole::expert;

  friend bool operator==(const ExpertPersona&, const ExpertPersona&) = default;
};

// "Lt. Col. John Abrams (Retd.)" -> "lt-col-john-abrams". Parenthesised
// suffixes are dropped; Latin-1 accents in UTF-8 are folded for the common cases.
inline std::string slugify(std::string_view name) {
  std::string s(name);
  if (auto p = s.find('('); p != std::string::npos) s.erase(p);
  static const std::pair<const char*, char> kFold[] = {
      {"\xc3\xa1", 'a'}, {"\xc3\xa0", 'a'}, {"\xc3\xa4", 'a'}, {"\xc3\xa9", 'e'}, {"\xc3\xa8", 'e'},
      {"\xc3\xad", 'i'}, {"\xc3\xb3", 'o'}, {"\xc3\xb6", 'o'}, {"\xc3\xba", 'u'}, {"\xc3\xbc", 'u'},
      {"\xc3\xb1", 'n'}, {"\xc3\xa7", 'c'}};
  for (const auto& [from, to] : kFold)
    for (std::size_t pos; (pos = s.find(from)) != std::string::npos;) s.replace(pos, 2, 1, to);
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c)) out += static_cast<char>(std::tolower(c));
    else if (!out.empty() && out.back() != '-') out += '-';
  }
  while (!out.empty() && out.back() == '-') out.pop_back();
  if (out.empty()) throw DataError("cannot derive a persona id from '" + std::string(name) + "'");
  return out;
}

inline const ExpertPersona& guide_persona() {
  static const ExpertPersona g{
      "ahp-guide",
      "AHP Guide",
      "",
      "Guides AHP decision-making, including managing external expert inputs.",
      "As an AHP Guide, your role includes facilitating users who are working with a specific problem or "
      "question using Saaty's Analytic Hierarchy Process. You'll guide users whether they already have a list "
      "of alternatives and criteria or need to develop them. Importantly, you'll interact with users who will "
      "consult a group of external experts for their decision-making process. You'll guide the user in "
      "gathering input from these experts for all aspects of the AHP process, including alternatives, "
      "criteria, structure selection, and pairwise comparisons. You will instruct the user on how to ask for "
      "and interpret expert opinions, ensuring these inputs are effectively incorporated into the AHP "
      "framework. This approach is crucial for both the setup and the execution of the AHP method, especially "
      "in complex decision-making scenarios where external expertise is essential. Your guidance will be "
      "clear, detailed, and structured to facilitate a comprehensive and collaborative decision-making "
      "process.",
      PersonaRole::guide};
  return g;
}

// Priming text for a persona generated from a guide profile.
inline ExpertPersona make_expert(const std::string& name, const std::string& title, const std::string& background,
                                 const std::string& personality) {
  ExpertPersona p;
  p.id = slugify(name);
  p.name = name;
  p.title = title;
  p.description = title.empty() ? name : title + ", " + name + ".";
  p.instructions = "As " + name + (title.empty() ? "" : ", " + title) + ", you are one member of a panel of " +
                   "independent experts.\n\nBackground: " + background +
                   "\n\nPersonality/Preferences: " + personality +
                   "\n\nAnswer from this perspective, follow the requested output format exactly, and keep to "
                   "the Analytic Hierarchy Process guidelines.";
  return p;
}

inline void check_panel(const std::vector<ExpertPersona>& panel) {
  std::set<std::string> ids;
  for (const auto& p : panel) {
    if (p.id.empty()) throw DataError("persona with empty id");
    if (!ids.insert(p.id).second) throw DataError("duplicate persona id '" + p.id + "'");
    if (p.instructions.empty()) throw DataError("persona '" + p.id + "' has no instructions");
  }
}

inline void to_json(nlohmann::json& j, const ExpertPersona& p) {
  j = {{"id", p.id},
       {"name", p.name},
       {"title", p.title},
       {"description", p.description},
       {"instructions", p.instructions},
       {"role", to_string(p.role)}};
}

inline void from_json(const nlohmann::json& j, ExpertPersona& p) {
  p.id = j.at("id").get<std::string>();
  p.name = j.at("name").get<std::string>();
  p.title = j.value("title", std::string{});
  p.description = j.value("description", std::string{});
  p.instructions = j.at("instructions").get<std::string>();
  p.role = parse_persona_role(j.value("role", std::string{"expert"}));
}

}  // namespace ahp

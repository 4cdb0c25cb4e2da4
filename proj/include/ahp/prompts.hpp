#pragma once

// Prompt templates with {placeholder} slots. The built-in bodies mirror the
// files under prompts/; a directory of the same file names overrides them.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ahp/error.hpp"

namespace ahp {

inline const std::set<std::string>& known_placeholders() {
  static const std::set<std::string> k{"goal", "n", "items", "alternatives", "parent", "scale_instructions"};
  return k;
}

struct PromptTemplate {
  std::string name;
  std::string body;

  // Placeholder names in order of first appearance.
  std::vector<std::string> placeholders() const {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (std::size_t pos = 0; (pos = body.find('{', pos)) != std::string::npos;) {
      const auto close = body.find('}', pos);
      if (close == std::string::npos) break;
      const std::string name = body.substr(pos + 1, close - pos - 1);
      if (known_placeholders().count(name) && seen.insert(name).second) out.push_back(name);
      pos = close + 1;
    }
    return out;
  }
};

using Bindings = std::map<std::string, std::string>;

// Substitutes every {name} of a known placeholder. Braces around anything else
// are literal text.
inline std::string render_prompt(const PromptTemplate& t, const Bindings& bindings) {
  const auto used = t.placeholders();
  const std::set<std::string> used_set(used.begin(), used.end());
  for (const auto& name : used)
    if (!bindings.count(name))
      throw DataError("template '" + t.name + "': unbound placeholder {" + name + "}");
  for (const auto& [name, value] : bindings)
    if (!used_set.count(name))
      throw DataError("template '" + t.name + "': binding {" + name + "} is not a placeholder of this template");
  std::string out;
  std::size_t pos = 0;
  while (pos < t.body.size()) {
    const auto open = t.body.find('{', pos);
    if (open == std::string::npos) {
      out.append(t.body, pos, std::string::npos);
      break;
    }
    const auto close = t.body.find('}', open);
    const std::string name = close == std::string::npos ? "" : t.body.substr(open + 1, close - open - 1);
    out.append(t.body, pos, open - pos);
    if (used_set.count(name)) {
      out += bindings.at(name);
      pos = close + 1;
    } else {
      out += '{';
      pos = open + 1;
    }
  }
  return out;
}

namespace prompts {

inline const std::string kScaleInstructions =
    "Use only values of the Saaty scale: 1/9, 1/8, 1/7, 1/6, 1/5, 1/4, 1/3, 1/2, 1, 2, 3, 4, 5, 6, 7, 8, 9. "
    "Present each matrix as a markdown table whose first column holds the row labels, and put the name of "
    "each matrix on its own line above its table.";

// Stage name -> template body.
inline const std::map<std::string, std::string>& builtin_bodies() {
  static const std::map<std::string, std::string> bodies{
      {"advise_experts",
       "Our goal is \"{goal}\".\n\n"
       "I want to rely on the help of a group of experts. How many experts do you think we need for the "
       "optimal solution?"},
      {"advise_levels", "How many criteria levels would be optimal for our goal?"},
      {"personas",
       "Give me a list of {n} high quality diverse experts that will be the best fit in helping me with "
       "selecting criteria, selecting alternatives and completing pairwise comparison of said criteria.\n\n"
       "Approach each expert as a separate persona, describe their professional background, as well as "
       "work-related personality and preferences that would make them optimal for this AHP model building."},
      {"criteria",
       "Hello, you have been tasked with being a part of group of experts working on an AHP tree that has "
       "the following top goal: \"{goal}\".\n\n"
       "First, come up with {n} top-level criteria. Use 3 words max for each criteria."},
      {"criteria_ballot",
       "Can you please assign a score from 1 to 9, with 1 being lowest importance to 9 being highest "
       "importance, for each of these {n} criteria:\n\n{items}"},
      {"subcriteria",
       "Now, come up with {n} sub-criteria for each of these criteria: {items}. Use 3 words max for each "
       "sub-criteria."},
      {"subcriteria_ballot",
       "Can you please assign a score from 1 to 9, with 1 being lowest importance to 9 being highest "
       "importance, for each of these {n} sub-criteria of {parent}:\n\n{items}"},
      {"alternatives",
       "Now, come up with {n} alternatives that could achieve our goal: \"{goal}\". Give each alternative "
       "a short name."},
      {"alternatives_ballot",
       "Can you please assign a score from 1 to 9, based on whether an alternative can satisfy our main "
       "goal ({goal}), with 1 being lowest and 9 being highest, for each of these {n} alternatives:\n\n{items}"},
      {"pairwise_top",
       "I now need you to create a pairwise comparison matrix for the list of our top-level criteria: "
       "{items}.\n\n"
       "The matrix should be build based on Saaty's AHP methodology. Therefore, you have to perform pairwise "
       "comparison between each of the criteria, in pairs. You have to assign value from 1/9 to 9 based on "
       "whether one criteria is less or more important to our main goal ({goal}) than the another one. If "
       "they are equally important, the score is 1.\n\n"
       "As an expert, I would like you to assign weights based on your personal subjective analysis and "
       "judgement.\n\n{scale_instructions}"},
      {"pairwise_sub",
       "Great work. Now, next step. For each top-level criterion, we have {n} sub-criteria. The tree looks "
       "like this:\n\n{items}\n\n"
       "I now want you to create a separate comparison matrix for each of these top-level criteria, where "
       "you will be comparing their sub-criteria.\n\n"
       "As an expert, I would like you to assign weights based on your personal subjective analysis and "
       "judgement.\n\n{scale_instructions}"},
      {"pairwise_alt",
       "I want you to build pairwise comparison matrices to select best alternatives following AHP "
       "guidelines. Let's go over {n} sub-criteria at a time, meaning that you will need to build {n} "
       "matrices.\n\n"
       "Sub-criteria are: {items}.\n\n"
       "Alternatives are: {alternatives}.\n\n"
       "The question should sound \"Between alternative A and alternative B, which one better satisfies (or "
       "performs with respect to) this sub-criterion?\"\n\n"
       "As an expert, I would like you to assign weights based on your personal subjective analysis and "
       "judgement.\n\n{scale_instructions}"},
      {"repair",
       "Reminder: your previous answer does not follow the AHP guidelines or the requested format. "
       "{items}\n\nPlease answer the previous request again in full."},
      {"carryover",
       "We are continuing our work on the AHP tree for the goal \"{goal}\". Decisions made so far:\n\n{items}"},
  };
  return bodies;
}

inline PromptTemplate builtin(const std::string& name) {
  auto it = builtin_bodies().find(name);
  if (it == builtin_bodies().end()) throw DataError("unknown prompt template '" + name + "'");
  return {name, it->second};
}

}  // namespace prompts

// Template set used by a pipeline run. Files named <stage>.txt in `dir`
// replace the built-in bodies; a trailing newline in a file is dropped.
class PromptLibrary {
 public:
  PromptLibrary() {
    for (const auto& [name, body] : prompts::builtin_bodies()) templates_[name] = {name, body};
  }

  static PromptLibrary from_directory(const std::filesystem::path& dir) {
    PromptLibrary lib;
    if (!std::filesystem::is_directory(dir)) throw DataError("prompt directory '" + dir.string() + "' not found");
    for (auto& [name, t] : lib.templates_) {
      const auto file = dir / (name + ".txt");
      if (!std::filesystem::exists(file)) continue;
      std::ifstream in(file, std::ios::binary);
      std::stringstream ss;
      ss << in.rdbuf();
      std::string body = ss.str();
      if (!body.empty() && body.back() == '\n') body.pop_back();
      t.body = body;
    }
    return lib;
  }

  const PromptTemplate& get(const std::string& name) const {
    auto it = templates_.find(name);
    if (it == templates_.end()) throw DataError("unknown prompt template '" + name + "'");
    return it->second;
  }

  std::string render(const std::string& name, const Bindings& b) const { return render_prompt(get(name), b); }

  // FNV-1a over names and bodies; identifies the template set in reports.
  std::string version() const {
    std::uint64_t h = 1469598103934665603ull;
    for (const auto& [name, t] : templates_)
      for (const std::string* s : {&name, &t.body}) {
        for (unsigned char c : *s) {
          h ^= c;
          h *= 1099511628211ull;
        }
        h ^= 0xff;
        h *= 1099511628211ull;
      }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
  }

 private:
  std::map<std::string, PromptTemplate> templates_;
};

}  // namespace ahp

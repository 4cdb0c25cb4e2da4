#pragma once

// Parsers turning free-text expert replies into lists, ballots, matrices and
// personas. Recoverable problems come back as violations so the caller can ask
// for a corrected reply; parsers never throw on bad replies.

#include <algorithm>
#include <charconv>
#include <map>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "ahp/elicitation.hpp"
#include "ahp/matrix.hpp"
#include "ahp/matrix_csv.hpp"
#include "ahp/persona.hpp"
#include "ahp/saaty.hpp"
#include "ahp/validation.hpp"

namespace ahp {

template <class T>
struct Parsed {
  std::optional<T> value;
  ValidationResult violations;

  bool ok() const { return value.has_value() && violations.ok(); }
};

namespace detail {

inline std::vector<std::string> lines_of(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(std::move(line));
    start = end + 1;
  }
  return out;
}

inline std::string strip_emphasis(std::string s) {
  for (const char* mark : {"**", "__", "`"})
    for (std::size_t p; (p = s.find(mark)) != std::string::npos;) s.erase(p, std::char_traits<char>::length(mark));
  return csv::trim(s);
}

// Removes a leading "1.", "2)", "a)", "-", "*", "•" or markdown heading marker.
inline std::string strip_marker(std::string s) {
  static const std::regex marker(R"(^\s*(?:#{1,6}\s*|[-*+]\s+|\xe2\x80\xa2\s*|\d{1,3}[.)]\s*|[a-z][.)]\s+)+)");
  return std::regex_replace(s, marker, "", std::regex_constants::format_first_only);
}

inline bool is_list_line(const std::string& s) {
  static const std::regex marker(R"(^\s*(?:[-*+]\s+|\xe2\x80\xa2\s*|\d{1,3}[.)]\s+))");
  return std::regex_search(s, marker);
}

// "Employee Training: teaches staff..." -> "Employee Training".
inline std::string label_part(std::string s) {
  s = strip_emphasis(strip_marker(s));
  for (const char* sep : {": ", " - ", " \xe2\x80\x93 ", " \xe2\x80\x94 "})
    if (auto p = s.find(sep); p != std::string::npos) s.erase(p);
  s = csv::trim(s);
  while (!s.empty() && (s.back() == '.' || s.back() == ':' || s.back() == ';')) s.pop_back();
  return strip_emphasis(s);
}

inline std::vector<std::string> split_commas(const std::string& line) {
  std::string body = line;
  if (auto colon = body.find(':'); colon != std::string::npos) body = body.substr(colon + 1);
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= body.size()) {
    auto end = body.find(',', start);
    if (end == std::string::npos) end = body.size();
    std::string item = csv::trim(body.substr(start, end - start));
    if (item.rfind("and ", 0) == 0) item = item.substr(4);
    item = label_part(item);
    if (!item.empty()) out.push_back(item);
    start = end + 1;
  }
  return out;
}

inline bool canon_eq(const std::string& a, const std::string& b) {
  try {
    return normalize_label(a) == normalize_label(b);
  } catch (const DataError&) {
    return false;
  }
}

inline std::optional<std::size_t> find_label(const std::vector<std::string>& labels, const std::string& s) {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (canon_eq(labels[i], s)) return i;
  return std::nullopt;
}

inline std::string canon_or_empty(const std::string& s) {
  try {
    return normalize_label(s);
  } catch (const DataError&) {
    return {};
  }
}

}  // namespace detail

// List extraction: bulleted/numbered lines if present, else the line with the
// most commas, else one item per non-empty line.
inline Parsed<std::vector<std::string>> parse_item_list(std::string_view reply, std::size_t expected_n,
                                                       std::size_t max_words) {
  Parsed<std::vector<std::string>> out;
  const auto lines = detail::lines_of(reply);
  std::vector<std::string> items;
  for (const auto& l : lines)
    if (detail::is_list_line(l)) items.push_back(detail::label_part(l));
  if (items.empty()) {
    std::size_t best = 0, best_commas = 0;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const auto c = static_cast<std::size_t>(std::count(lines[i].begin(), lines[i].end(), ','));
      if (c > best_commas) best = i, best_commas = c;
    }
    if (best_commas > 0) items = detail::split_commas(lines[best]);
  }
  if (items.empty())
    for (const auto& l : lines)
      if (!csv::trim(l).empty()) items.push_back(detail::label_part(l));
  std::erase_if(items, [](const std::string& s) { return s.empty(); });

  if (items.size() != expected_n)
    out.violations.add("count", "count mismatch: expected " + std::to_string(expected_n) + " items, got " +
                                    std::to_string(items.size()));
  for (const auto& it : items)
    if (word_count(it) > max_words)
      out.violations.add("max_words", "label '" + it + "' has more than " + std::to_string(max_words) + " words");
  std::vector<std::string> seen;
  for (const auto& it : items) {
    const auto c = detail::canon_or_empty(it);
    if (std::find(seen.begin(), seen.end(), c) != seen.end())
      out.violations.add("duplicate", "label '" + it + "' is listed twice");
    seen.push_back(c);
  }
  out.value = std::move(items);
  return out;
}

// Splits a reply into one block per name. A heading is a non-table line that
// mentions the name and is not much longer than it; each name claims its first
// heading. Missing names map to nullopt.
inline std::vector<std::optional<std::string>> split_sections(std::string_view reply,
                                                              const std::vector<std::string>& names) {
  const auto lines = detail::lines_of(reply);
  std::vector<std::optional<std::size_t>> start(names.size());
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const std::string t = csv::trim(lines[li]);
    if (t.empty() || t.front() == '|') continue;
    const auto canon = detail::canon_or_empty(t);
    std::optional<std::size_t> best;
    for (std::size_t k = 0; k < names.size(); ++k) {
      if (start[k]) continue;
      const auto n = normalize_label(names[k]);
      if (canon.find(n) == std::string::npos) continue;
      if (word_count(t) > word_count(names[k]) + 6) continue;
      if (!best || names[k].size() > names[*best].size()) best = k;
    }
    if (best) start[*best] = li;
  }
  std::vector<std::optional<std::string>> out(names.size());
  for (std::size_t k = 0; k < names.size(); ++k) {
    if (!start[k]) continue;
    std::size_t end = lines.size();
    for (std::size_t o = 0; o < names.size(); ++o)
      if (start[o] && *start[o] > *start[k]) end = std::min(end, *start[o]);
    std::string block;
    for (std::size_t li = *start[k] + 1; li < end; ++li) block += lines[li] + "\n";
    out[k] = block;
  }
  return out;
}

// One list per parent, from a reply with a heading per parent.
inline Parsed<std::vector<std::vector<std::string>>> parse_sectioned_lists(std::string_view reply,
                                                                          const std::vector<std::string>& parents,
                                                                          std::size_t expected_n,
                                                                          std::size_t max_words) {
  Parsed<std::vector<std::vector<std::string>>> out;
  std::vector<std::vector<std::string>> lists;
  const auto sections = split_sections(reply, parents);
  for (std::size_t k = 0; k < parents.size(); ++k) {
    if (!sections[k]) {
      out.violations.add("missing_section", "no list for '" + parents[k] + "'");
      lists.emplace_back();
      continue;
    }
    auto p = parse_item_list(*sections[k], expected_n, max_words);
    for (auto v : p.violations.violations) {
      v.message = parents[k] + ": " + v.message;
      out.violations.violations.push_back(v);
    }
    lists.push_back(p.value.value_or(std::vector<std::string>{}));
  }
  out.value = std::move(lists);
  return out;
}

// Exact scale value of a judgment token: integers 1..9, fractions reducing to
// 1/2..1/9, or decimals within 1e-6 of a scale point.
inline double parse_saaty_value(std::string_view token) {
  const std::string t = detail::strip_emphasis(std::string(token));
  if (t.empty()) throw DataError("empty judgment");
  auto bad = [&] { return DataError("unparseable judgment '" + t + "'"); };
  auto out_of_scale = [&] { return DataError("judgment '" + t + "' is outside the scale 1/9..9"); };
  if (auto slash = t.find('/'); slash != std::string::npos) {
    int p = 0, q = 0;
    const std::string a = csv::trim(t.substr(0, slash)), b = csv::trim(t.substr(slash + 1));
    auto ra = std::from_chars(a.data(), a.data() + a.size(), p);
    auto rb = std::from_chars(b.data(), b.data() + b.size(), q);
    if (ra.ec != std::errc{} || rb.ec != std::errc{} || ra.ptr != a.data() + a.size() || rb.ptr != b.data() + b.size())
      throw bad();
    if (p <= 0 || q <= 0) throw out_of_scale();
    for (const auto& r : saaty::kScale)
      if (static_cast<long long>(p) * r.den == static_cast<long long>(q) * r.num) return r.value();
    throw out_of_scale();
  }
  double x = 0.0;
  auto r = std::from_chars(t.data(), t.data() + t.size(), x);
  if (r.ec != std::errc{} || r.ptr != t.data() + t.size()) throw bad();
  if (auto point = saaty::nearest_point(x)) return point->value();
  throw out_of_scale();
}

inline std::string format_judgment(double v) {
  if (auto f = saaty::exact_small_fraction(v)) return f->str();
  return csv::format_number(v);
}

// Markdown table with a header row of labels; parse_matrix reads it back exactly.
inline std::string format_matrix_table(const PairwiseMatrix& m, const std::string& corner = "") {
  std::string s = "| " + corner + " |";
  for (const auto& l : m.labels()) s += " " + l + " |";
  s += "\n|---|";
  for (std::size_t j = 0; j < m.order(); ++j) s += "---|";
  s += "\n";
  for (std::size_t i = 0; i < m.order(); ++i) {
    s += "| " + m.labels()[i] + " |";
    for (std::size_t j = 0; j < m.order(); ++j) s += " " + format_judgment(m(i, j)) + " |";
    s += "\n";
  }
  return s;
}

namespace detail {

inline std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> cells;
  const char sep = line.find('|') != std::string::npos ? '|' : '\t';
  std::size_t start = 0;
  while (start <= line.size()) {
    auto end = line.find(sep, start);
    if (end == std::string::npos) end = line.size();
    cells.push_back(strip_emphasis(line.substr(start, end - start)));
    start = end + 1;
  }
  if (sep == '|') {
    if (!cells.empty() && cells.front().empty()) cells.erase(cells.begin());
    if (!cells.empty() && cells.back().empty()) cells.pop_back();
  }
  return cells;
}

inline bool is_table_line(const std::string& line) {
  const std::string t = csv::trim(line);
  if (t.empty()) return false;
  if (t.front() == '|') return true;
  return std::count(t.begin(), t.end(), '\t') >= 2;
}

inline bool is_separator_row(const std::vector<std::string>& cells) {
  if (cells.empty()) return false;
  for (const auto& c : cells)
    if (c.find_first_not_of("-: ") != std::string::npos) return false;
  return true;
}

inline bool looks_numeric(const std::string& c) {
  return !c.empty() && c.find_first_not_of("0123456789./ ") == std::string::npos;
}

inline std::string cell_name(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

}  // namespace detail

// Reads a matrix over `labels` from a markdown/tab table or "A vs B: v" lines.
// Rows are matched by label; columns follow the header when it names the
// labels, otherwise row order. A cell may be left out when its mirror is given.
inline Parsed<PairwiseMatrix> parse_matrix(std::string_view reply, const std::vector<std::string>& labels) {
  Parsed<PairwiseMatrix> out;
  auto& v = out.violations;
  const std::size_t n = labels.size();
  std::vector<std::optional<double>> cell(n * n);
  auto put = [&](std::size_t i, std::size_t j, const std::string& token) {
    if (token.empty() || token == "-" || token == "?") return;
    try {
      cell[i * n + j] = parse_saaty_value(token);
    } catch (const DataError& e) {
      v.add("scale", std::string(e.what()) + " at " + detail::cell_name(i, j), std::pair{i + 1, j + 1});
      double raw = 0.0;
      try {
        raw = csv::parse_number(token);
      } catch (const DataError&) {
      }
      if (raw > 0.0) cell[i * n + j] = raw;
    }
  };

  std::vector<std::size_t> columns(n);
  for (std::size_t j = 0; j < n; ++j) columns[j] = j;
  bool any_table = false;
  for (const auto& line : detail::lines_of(reply)) {
    if (!detail::is_table_line(line)) continue;
    auto cells = detail::split_cells(line);
    if (cells.size() < 2 || detail::is_separator_row(cells)) continue;
    std::vector<std::string> values(cells.begin() + 1, cells.end());
    const bool numeric = std::all_of(values.begin(), values.end(), [](const std::string& c) {
      return c.empty() || c == "-" || detail::looks_numeric(c);
    });
    if (!numeric) {
      // Header row: adopt its order only if it names exactly our labels.
      std::vector<std::size_t> order;
      for (const auto& c : values)
        if (auto k = detail::find_label(labels, c)) order.push_back(*k);
      std::vector<std::size_t> sorted = order;
      std::sort(sorted.begin(), sorted.end());
      if (values.size() == n && order.size() == n && std::unique(sorted.begin(), sorted.end()) == sorted.end())
        columns = order;
      continue;
    }
    any_table = true;
    auto row = detail::find_label(labels, cells[0]);
    if (!row) {
      v.add("label", "row '" + cells[0] + "' is not one of the compared items");
      continue;
    }
    if (values.size() > n) {
      v.add("shape", "row '" + cells[0] + "' has " + std::to_string(values.size()) + " values for " +
                         std::to_string(n) + " columns");
      continue;
    }
    for (std::size_t j = 0; j < values.size(); ++j) put(*row, columns[j], values[j]);
  }
  if (!any_table) {
    static const std::regex triple(R"(^\s*(?:[-*+]\s+|\d{1,3}[.)]\s+)?(.+?)\s+(?:vs\.?|versus)\s+(.+?)\s*[:=]\s*(\S+)\s*$)",
                                   std::regex::icase);
    for (const auto& line : detail::lines_of(reply)) {
      std::smatch m;
      if (!std::regex_match(line, m, triple)) continue;
      auto a = detail::find_label(labels, detail::strip_emphasis(m[1]));
      auto b = detail::find_label(labels, detail::strip_emphasis(m[2]));
      if (!a || !b) {
        v.add("label", "comparison '" + std::string(m[1]) + " vs " + std::string(m[2]) + "' names unknown items");
        continue;
      }
      put(*a, *b, m[3]);
    }
  }

  std::vector<double> e(n * n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (cell[i * n + i] && *cell[i * n + i] != 1.0)
      v.add("diagonal", "diagonal entry " + detail::cell_name(i, i) + " must be 1", std::pair{i + 1, i + 1});
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto& a = cell[i * n + j];
      const auto& b = cell[j * n + i];
      if (a && b) {
        if (std::abs(*a * *b - 1.0) > 1e-9)
          v.add("reciprocity",
                "reciprocity breach: " + detail::cell_name(j, i) + " = " + format_judgment(*b) + " but 1/" +
                    detail::cell_name(i, j) + " = 1/" + format_judgment(*a),
                std::pair{j + 1, i + 1});
        e[i * n + j] = *a;
        e[j * n + i] = 1.0 / *a;
      } else if (a) {
        e[i * n + j] = *a;
        e[j * n + i] = 1.0 / *a;
      } else if (b) {
        e[j * n + i] = *b;
        e[i * n + j] = 1.0 / *b;
      } else {
        v.add("missing", "no judgment for " + labels[i] + " vs " + labels[j], std::pair{i + 1, j + 1});
      }
    }
  }
  // A stated fraction and its mirror as 1/x must give the same double.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (auto f = saaty::exact_small_fraction(e[i * n + j])) e[j * n + i] = f->reciprocal().value();
  try {
    PairwiseMatrix m(labels, std::move(e));
    if (v.ok()) out.value = std::move(m);
  } catch (const DataError& ex) {
    v.add("label", ex.what());
  }
  return out;
}

// Several named matrices in one reply: split at headings, or take the tables
// in order when headings cannot be found.
struct MatrixRequest {
  std::string name;  // node the matrix belongs to
  std::vector<std::string> labels;
};

inline Parsed<std::vector<PairwiseMatrix>> parse_matrix_batch(std::string_view reply,
                                                             const std::vector<MatrixRequest>& requests) {
  Parsed<std::vector<PairwiseMatrix>> out;
  if (requests.size() == 1) {
    auto p = parse_matrix(reply, requests[0].labels);
    out.violations = p.violations;
    if (p.ok()) out.value = std::vector{*p.value};
    return out;
  }
  std::vector<std::string> names;
  for (const auto& r : requests) names.push_back(r.name);
  auto sections = split_sections(reply, names);
  if (std::any_of(sections.begin(), sections.end(), [](const auto& s) { return !s; })) {
    // Fallback: consecutive table blocks.
    std::vector<std::string> blocks;
    bool in_table = false;
    for (const auto& line : detail::lines_of(reply)) {
      const bool t = detail::is_table_line(line);
      if (t && !in_table) blocks.emplace_back();
      if (t) blocks.back() += line + "\n";
      in_table = t;
    }
    if (blocks.size() == requests.size())
      for (std::size_t k = 0; k < blocks.size(); ++k) sections[k] = blocks[k];
  }
  std::vector<PairwiseMatrix> ms;
  for (std::size_t k = 0; k < requests.size(); ++k) {
    if (!sections[k]) {
      out.violations.add("missing_matrix", "no matrix for '" + requests[k].name + "'");
      continue;
    }
    auto p = parse_matrix(*sections[k], requests[k].labels);
    for (auto viol : p.violations.violations) {
      viol.message = requests[k].name + ": " + viol.message;
      out.violations.violations.push_back(viol);
    }
    if (p.value) ms.push_back(*p.value);
  }
  if (out.violations.ok()) out.value = std::move(ms);
  return out;
}

// "Label: 7" lines (numbering, bullets, bold and table pipes tolerated).
inline Parsed<ScoreBallot> parse_ballot(std::string_view reply, const std::vector<std::string>& items,
                                        const std::string& expert = "") {
  Parsed<ScoreBallot> out;
  auto& v = out.violations;
  static const std::regex line_re(R"(^(.*?)[\s:=|\-\xe2\x80\x93]+\(?([0-9]+(?:\.[0-9]+)?)\)?(?:\s*/\s*9)?\s*\|?\s*\.?\s*$)");
  std::vector<std::optional<int>> scores(items.size());
  for (const auto& raw : detail::lines_of(reply)) {
    std::smatch m;
    if (!std::regex_match(raw, m, line_re)) continue;
    std::string label = detail::strip_emphasis(detail::strip_marker(detail::strip_emphasis(m[1])));
    while (!label.empty() && (label.back() == ':' || label.back() == '|' || label.back() == '-'))
      label = csv::trim(label.substr(0, label.size() - 1));
    if (!label.empty() && label.front() == '|') label = csv::trim(label.substr(1));
    auto k = detail::find_label(items, label);
    if (!k) continue;
    const std::string num = m[2];
    if (num.find('.') != std::string::npos) {
      v.add("integer", "score '" + num + "' for '" + items[*k] + "' is not an integer");
      continue;
    }
    const int s = std::stoi(num);
    if (s < 1 || s > 9) {
      v.add("range", "score " + num + " for '" + items[*k] + "' is outside 1..9");
      continue;
    }
    if (scores[*k] && *scores[*k] != s) v.add("duplicate", "'" + items[*k] + "' is scored twice");
    scores[*k] = s;
  }
  ScoreBallot b{expert, {}};
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!scores[i]) {
      if (!v.has("range") && !v.has("integer")) v.add("missing", "no score for '" + items[i] + "'");
      else v.add("missing", "no valid score for '" + items[i] + "'");
      continue;
    }
    b.scores.emplace_back(items[i], *scores[i]);
  }
  if (v.ok()) out.value = std::move(b);
  return out;
}

// Guide reply in the "Title, Name:" / "Background:" / "Personality/Preferences:" form.
inline Parsed<std::vector<ExpertPersona>> parse_personas(std::string_view reply, std::size_t expected_n) {
  Parsed<std::vector<ExpertPersona>> out;
  struct Block {
    std::string title, name, background, personality;
  };
  std::vector<Block> blocks;
  std::string* current = nullptr;
  static const std::regex header(R"(^\s*(?:\d{1,2}[.)]\s*|#{1,6}\s*|[-*]\s+)?(.+?):\s*$)");
  for (const auto& raw : detail::lines_of(reply)) {
    const std::string line = detail::strip_emphasis(raw);
    if (line.empty()) continue;
    const std::string body = detail::strip_marker(line);
    if (body.rfind("Background:", 0) == 0 && !blocks.empty()) {
      blocks.back().background = csv::trim(body.substr(11));
      current = &blocks.back().background;
      continue;
    }
    if (body.rfind("Personality/Preferences:", 0) == 0 && !blocks.empty()) {
      blocks.back().personality = csv::trim(body.substr(24));
      current = &blocks.back().personality;
      continue;
    }
    std::smatch m;
    if (std::regex_match(line, m, header)) {
      const std::string h = detail::strip_emphasis(m[1]);
      Block b;
      if (auto comma = h.find(", "); comma != std::string::npos) {
        b.title = csv::trim(h.substr(0, comma));
        b.name = csv::trim(h.substr(comma + 2));
      } else {
        b.name = h;
      }
      blocks.push_back(b);
      current = nullptr;
      continue;
    }
    if (current) *current += " " + csv::trim(line);
  }
  std::erase_if(blocks, [](const Block& b) { return b.background.empty() && b.personality.empty(); });
  if (blocks.size() != expected_n)
    out.violations.add("count", "count mismatch: expected " + std::to_string(expected_n) + " personas, got " +
                                    std::to_string(blocks.size()));
  std::vector<ExpertPersona> ps;
  for (const auto& b : blocks) {
    if (b.background.empty() || b.personality.empty()) {
      out.violations.add("persona_format", "persona '" + b.name + "' lacks a background or personality section");
      continue;
    }
    try {
      ps.push_back(make_expert(b.name, b.title, b.background, b.personality));
    } catch (const DataError& e) {
      out.violations.add("persona_format", e.what());
    }
  }
  try {
    check_panel(ps);
  } catch (const DataError& e) {
    out.violations.add("duplicate", e.what());
  }
  if (out.violations.ok()) out.value = std::move(ps);
  return out;
}

namespace detail {

inline std::optional<int> number_word(std::string w) {
  static const std::map<std::string, int> words{{"one", 1},  {"two", 2},    {"three", 3},  {"four", 4},
                                                {"five", 5}, {"six", 6},    {"seven", 7},  {"eight", 8},
                                                {"nine", 9}, {"ten", 10},   {"eleven", 11}, {"twelve", 12}};
  std::transform(w.begin(), w.end(), w.begin(), [](unsigned char c) { return std::tolower(c); });
  if (auto it = words.find(w); it != words.end()) return it->second;
  int x = 0;
  auto r = std::from_chars(w.data(), w.data() + w.size(), x);
  if (r.ec == std::errc{} && r.ptr == w.data() + w.size()) return x;
  return std::nullopt;
}

}  // namespace detail

// "a group of 5-7 experts" -> {5, 7}; "seven experts" -> {7, 7}.
inline std::optional<std::pair<int, int>> parse_expert_count_advice(std::string_view reply) {
  const std::string s(reply);
  static const std::regex range(R"((\w+)\s*(?:-|\xe2\x80\x93|to)\s*(\w+)\s+(?:\w+\s+){0,2}experts)", std::regex::icase);
  static const std::regex single(R"((\w+)\s+(?:\w+\s+){0,2}experts)", std::regex::icase);
  std::smatch m;
  if (std::regex_search(s, m, range)) {
    auto a = detail::number_word(m[1]), b = detail::number_word(m[2]);
    if (a && b && *a > 0 && *a <= *b) return std::pair{*a, *b};
  }
  for (auto it = std::sregex_iterator(s.begin(), s.end(), single); it != std::sregex_iterator(); ++it)
    if (auto a = detail::number_word((*it)[1]); a && *a > 0) return std::pair{*a, *a};
  return std::nullopt;
}

// "a two-level structure" -> 2; "ten levels" -> 10.
inline std::optional<int> parse_levels_advice(std::string_view reply) {
  const std::string s(reply);
  static const std::regex re(R"((\w+)[\s-]+(?:criteria\s+)?level)", std::regex::icase);
  for (auto it = std::sregex_iterator(s.begin(), s.end(), re); it != std::sregex_iterator(); ++it)
    if (auto a = detail::number_word((*it)[1]); a && *a > 0) return *a;
  return std::nullopt;
}

}  // namespace ahp

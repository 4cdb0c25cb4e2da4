#pragma once

// Matrix files: a header row of column captions, then one row per item whose
// first cell is the item label. Cells are decimals or integer fractions "p/q".
// The row labels are the matrix labels; the header row may use abbreviations.

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ahp/error.hpp"
#include "ahp/matrix.hpp"
#include "ahp/saaty.hpp"

namespace ahp::csv {

inline std::vector<std::vector<std::string>> parse_records(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, field_started = false;
  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    bool blank = row.size() == 1 && row[0].empty();
    if (!blank) rows.push_back(std::move(row));
    row.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && !field_started) {
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\n') {
      end_row();
    } else if (c != '\r') {
      field += c;
      field_started = true;
    }
  }
  if (quoted) throw DataError("csv: unterminated quoted field");
  if (field_started || !field.empty() || !row.empty()) end_row();
  return rows;
}

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

// "3", "0.756", "1/3", "2.5/5". Fractions evaluate as double(p) / double(q).
inline double parse_number(std::string_view cell) {
  const std::string s = trim(cell);
  auto to_double = [&](std::string_view part) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc{} || ptr != part.data() + part.size() || part.empty())
      throw DataError("unparseable number '" + s + "'");
    return v;
  };
  const auto slash = s.find('/');
  if (slash == std::string::npos) return to_double(s);
  const double den = to_double(trim(std::string_view(s).substr(slash + 1)));
  if (den == 0.0) throw DataError("zero denominator in '" + s + "'");
  return to_double(trim(std::string_view(s).substr(0, slash))) / den;
}

// Shortest text that parses back to exactly `v`: a small fraction when `v` is
// bit-identical to one, otherwise the shortest round-trip decimal.
inline std::string format_number(double v) {
  if (auto r = saaty::exact_small_fraction(v)) return r->str();
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline PairwiseMatrix read_matrix(std::string_view text) {
  auto rows = parse_records(text);
  if (rows.size() < 3) throw DataError("matrix csv needs a header row and at least two item rows");
  const std::size_t n = rows.size() - 1;
  if (rows[0].size() != n + 1)
    throw DataError("matrix csv header has " + std::to_string(rows[0].size()) +
                    " cells, expected " + std::to_string(n + 1));
  std::vector<std::string> labels;
  std::vector<double> entries;
  entries.reserve(n * n);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != n + 1)
      throw DataError("matrix csv row " + std::to_string(r + 1) + " has " +
                      std::to_string(row.size()) + " cells, expected " + std::to_string(n + 1));
    labels.push_back(trim(row[0]));
    for (std::size_t c = 1; c < row.size(); ++c) entries.push_back(parse_number(row[c]));
  }
  return PairwiseMatrix(std::move(labels), std::move(entries));
}

inline PairwiseMatrix load_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open matrix file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return read_matrix(ss.str());
}

inline std::string write_matrix(const PairwiseMatrix& m, const std::string& corner = "") {
  std::string out = quote_if_needed(corner);
  for (const auto& l : m.labels()) out += "," + quote_if_needed(l);
  out += "\n";
  for (std::size_t i = 0; i < m.order(); ++i) {
    out += quote_if_needed(m.labels()[i]);
    for (std::size_t j = 0; j < m.order(); ++j) out += "," + format_number(m(i, j));
    out += "\n";
  }
  return out;
}

}  // namespace ahp::csv

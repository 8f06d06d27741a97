#include "pintervals_cli/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "pintervals_cli/errors.hpp"

namespace pintervals::cli {

std::optional<std::size_t> CsvTable::find(std::string_view column) const {
  const auto it = std::find(header.begin(), header.end(), column);
  if (it == header.end()) return std::nullopt;
  return static_cast<std::size_t>(it - header.begin());
}

std::size_t CsvTable::require(std::string_view column, std::string_view source) const {
  if (auto i = find(column)) return *i;
  throw DataError(std::string(source) + ": missing column \"" + std::string(column) + "\"");
}

namespace {

// Splits one logical record; quoted fields may span physical lines.
bool next_record(std::istream& in, std::vector<std::string>& cells, std::size_t& line) {
  cells.clear();
  std::string cell;
  bool quoted = false;
  bool any = false;
  char c = 0;
  while (in.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          cell.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        cell.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else if (c == '\n') {
      ++line;
      break;
    } else if (c != '\r') {
      cell.push_back(c);
    }
  }
  if (!any) return false;
  cells.push_back(std::move(cell));
  return true;
}

}  // namespace

CsvTable parse_csv(std::istream& in, std::string_view source) {
  if (in.peek() == 0xEF) {
    char bom[3];
    in.read(bom, 3);
  }
  CsvTable t;
  std::size_t line = 0;
  std::vector<std::string> cells;
  if (!next_record(in, t.header, line)) {
    throw DataError(std::string(source) + ": empty file (no header row)");
  }
  for (auto& h : t.header) h = trim(h);
  while (next_record(in, cells, line)) {
    if (cells.size() == 1 && cells[0].empty()) continue;  // blank line
    if (cells.size() != t.header.size()) {
      throw DataError(std::string(source) + ": line " + std::to_string(line) + " has " +
                      std::to_string(cells.size()) + " fields, header has " +
                      std::to_string(t.header.size()));
    }
    t.rows.push_back(cells);
  }
  return t;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open \"" + path + "\"");
  return parse_csv(in, path);
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out << ',';
    const auto& c = cells[i];
    if (c.find_first_of(",\"\n\r") == std::string::npos) {
      out << c;
      continue;
    }
    out << '"';
    for (char ch : c) {
      if (ch == '"') out << '"';
      out << ch;
    }
    out << '"';
  }
  out << '\n';
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, r.ptr};
}

std::string format_short(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::optional<double> parse_number(std::string_view s) {
  std::string t = trim(s);
  if (t.empty()) return std::nullopt;
  std::string lower = t;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "inf" || lower == "+inf" || lower == "infinity" || lower == "+infinity") {
    return std::numeric_limits<double>::infinity();
  }
  if (lower == "-inf" || lower == "-infinity") return -std::numeric_limits<double>::infinity();
  if (t.front() == '+') t.erase(0, 1);
  double v = 0.0;
  const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
  if (r.ec != std::errc() || r.ptr != t.data() + t.size()) return std::nullopt;
  return v;
}

double number_cell(const CsvTable& t, std::size_t row, std::size_t col, std::string_view source) {
  const auto& cell = t.rows[row][col];
  if (auto v = parse_number(cell)) return *v;
  throw DataError(std::string(source) + ": row " + std::to_string(row + 1) + ", column \"" +
                  t.header[col] + "\": cannot parse \"" + cell + "\" as a number");
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string trim(std::string_view s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

}  // namespace pintervals::cli

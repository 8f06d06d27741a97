#include "pintervals_cli/interval_io.hpp"

#include <fstream>
#include <map>
#include <ostream>

#include "pintervals/error.hpp"
#include "pintervals_cli/errors.hpp"

namespace pintervals::cli {

namespace {

constexpr const char* kEmpty = "empty";

}  // namespace

std::string format_interval_set(const IntervalSet& set) {
  std::string out;
  for (const auto& part : set.parts()) {
    if (!out.empty()) out += '|';
    out += format_number(part.lower) + ':' + format_number(part.upper);
  }
  return out;
}

IntervalSet parse_interval_set(const std::string& text) {
  std::vector<Interval> parts;
  for (const auto& item : split(text, '|')) {
    const auto bounds = split(item, ':');
    const auto lo = bounds.size() == 2 ? parse_number(bounds[0]) : std::nullopt;
    const auto hi = bounds.size() == 2 ? parse_number(bounds[1]) : std::nullopt;
    if (!lo || !hi || *lo > *hi) {
      throw DataError("malformed interval \"" + item + "\" in \"" + text + "\"");
    }
    parts.push_back({*lo, *hi});
  }
  return IntervalSet(std::move(parts));
}

void write_interval_table(std::ostream& out, const IntervalTable& table) {
  bool group = false;
  bool cluster = false;
  bool bin = false;
  bool sets = false;
  for (const auto& r : table.rows) {
    group = group || r.group.has_value();
    cluster = cluster || r.cluster.has_value();
    bin = bin || r.bin.has_value();
    sets = sets || r.set.has_value() || r.empty;
  }
  std::map<std::size_t, std::string> row_warnings;
  for (const auto& w : table.warnings) {
    if (!w.row) continue;
    auto& s = row_warnings[*w.row];
    if (!s.empty()) s += ';';
    s += w.code;
  }

  std::vector<std::string> header{"pred", "lower", "upper"};
  if (group) header.emplace_back("group");
  if (cluster) header.emplace_back("cluster");
  if (bin) header.emplace_back("bin");
  if (sets) header.emplace_back("intervals");
  if (!row_warnings.empty()) header.emplace_back("warning");
  write_csv_row(out, header);

  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    std::vector<std::string> cells{format_number(r.pred), format_number(r.bounds.lower),
                                   format_number(r.bounds.upper)};
    if (group) cells.push_back(r.group.value_or(""));
    if (cluster) cells.push_back(r.cluster ? std::to_string(*r.cluster) : "");
    if (bin) cells.push_back(r.bin ? std::to_string(*r.bin) : "");
    if (sets) cells.push_back(r.empty ? kEmpty : r.set ? format_interval_set(*r.set) : "");
    if (!row_warnings.empty()) {
      const auto it = row_warnings.find(i);
      cells.push_back(it == row_warnings.end() ? "" : it->second);
    }
    write_csv_row(out, cells);
  }
}

void write_interval_table(const std::string& path, const IntervalTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write \"" + path + "\"");
  write_interval_table(out, table);
}

IntervalTable interval_table_from_csv(const CsvTable& t, const std::string& source) {
  const auto c_pred = t.require("pred", source);
  const auto c_lo = t.require("lower", source);
  const auto c_hi = t.require("upper", source);
  const auto c_group = t.find("group");
  const auto c_cluster = t.find("cluster");
  const auto c_bin = t.find("bin");
  const auto c_sets = t.find("intervals");
  const auto c_warn = t.find("warning");

  IntervalTable table;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& cells = t.rows[r];
    IntervalRow row;
    row.pred = number_cell(t, r, c_pred, source);
    const double lo = number_cell(t, r, c_lo, source);
    const double hi = number_cell(t, r, c_hi, source);
    if (!(lo <= hi)) {
      throw DataError(source + ": row " + std::to_string(r + 1) + ": lower exceeds upper");
    }
    row.bounds = {lo, hi};
    if (c_group && !cells[*c_group].empty()) row.group = cells[*c_group];
    if (c_cluster && !cells[*c_cluster].empty()) {
      row.cluster = static_cast<int>(number_cell(t, r, *c_cluster, source));
    }
    if (c_bin && !cells[*c_bin].empty()) row.bin = static_cast<int>(number_cell(t, r, *c_bin, source));
    if (c_sets && !cells[*c_sets].empty()) {
      if (cells[*c_sets] == kEmpty) {
        row.empty = true;
      } else {
        try {
          row.set = parse_interval_set(cells[*c_sets]);
        } catch (const DataError& e) {
          throw DataError(source + ": row " + std::to_string(r + 1) + ": " + e.what());
        }
      }
    }
    if (c_warn && !cells[*c_warn].empty()) {
      for (const auto& code : split(cells[*c_warn], ';')) table.warn(code, code, table.rows.size());
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

IntervalTable read_interval_table(const std::string& path) {
  return interval_table_from_csv(read_csv(path), path);
}

}  // namespace pintervals::cli

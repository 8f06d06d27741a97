#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pintervals::cli {

/// Header plus string cells. Every row has exactly header.size() cells.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  [[nodiscard]] std::optional<std::size_t> find(std::string_view column) const;
  /// Throws DataError naming the column and `source`.
  [[nodiscard]] std::size_t require(std::string_view column, std::string_view source) const;
};

/// RFC 4180-style reader: comma separated, double-quote escaping, optional
/// UTF-8 BOM, CRLF tolerated. Throws DataError on ragged rows.
CsvTable parse_csv(std::istream& in, std::string_view source);
CsvTable read_csv(const std::string& path);

void write_csv_row(std::ostream& out, const std::vector<std::string>& cells);

/// Shortest round-trip decimal; infinities as "inf"/"-inf".
std::string format_number(double v);
/// printf %.6g, used for text tables.
std::string format_short(double v);
/// Accepts anything format_number emits plus "+inf", "Inf", "infinity".
std::optional<double> parse_number(std::string_view s);

/// Numeric cell with a DataError naming row (1-based, header excluded) and column.
double number_cell(const CsvTable& t, std::size_t row, std::size_t col, std::string_view source);

std::vector<std::string> split(std::string_view s, char sep);
std::string trim(std::string_view s);

}  // namespace pintervals::cli

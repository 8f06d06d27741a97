#pragma once

#include <iosfwd>
#include <string>

#include "pintervals/table.hpp"
#include "pintervals_cli/csv.hpp"

namespace pintervals::cli {

/// "l1:u1|l2:u2" for sets, "empty" for empty prediction sets.
std::string format_interval_set(const IntervalSet& set);
IntervalSet parse_interval_set(const std::string& text);

/// Columns pred,lower,upper[,group][,cluster][,bin][,intervals][,warning];
/// optional columns appear when any row uses them.
void write_interval_table(std::ostream& out, const IntervalTable& table);
void write_interval_table(const std::string& path, const IntervalTable& table);

/// Inverse of write_interval_table. Row warnings come back as codes only.
IntervalTable interval_table_from_csv(const CsvTable& t, const std::string& source);
IntervalTable read_interval_table(const std::string& path);

}  // namespace pintervals::cli

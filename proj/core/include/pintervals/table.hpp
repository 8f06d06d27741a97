#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pintervals/types.hpp"

namespace pintervals {

/// Non-fatal condition raised while building intervals. `row` is set when
/// the condition concerns a single test point.
struct Warning {
  std::string code;
  std::string message;
  std::optional<std::size_t> row;

  friend bool operator==(const Warning&, const Warning&) = default;
};

/// One test point's prediction region.
///
/// `bounds` is always populated. For discontiguous bin-conditional output
/// `set` holds the components and `bounds` is their hull. An empty
/// prediction set is flagged with `empty` and degenerate bounds at pred.
struct IntervalRow {
  double pred = 0.0;
  Interval bounds;
  std::optional<IntervalSet> set;
  bool empty = false;
  std::optional<std::string> group;
  std::optional<int> cluster;
  std::optional<int> bin;

  [[nodiscard]] bool contains(double y) const noexcept;
  /// Sum of component widths for sets, 0 for empty rows.
  [[nodiscard]] double width() const noexcept;

  friend bool operator==(const IntervalRow&, const IntervalRow&) = default;
};

struct IntervalTable {
  std::vector<IntervalRow> rows;
  std::vector<Warning> warnings;

  [[nodiscard]] std::size_t size() const noexcept { return rows.size(); }

  void warn(std::string code, std::string message, std::optional<std::size_t> row = std::nullopt);
  [[nodiscard]] bool has_warning(const std::string& code) const noexcept;
};

}  // namespace pintervals

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>

#include "pintervals/table.hpp"
#include "pintervals/types.hpp"

namespace pintervals {

/// Share of rows whose truth lies in the row's region; empty rows are misses.
double interval_coverage(std::span<const double> truth, const IntervalTable& table);

struct WidthSummary {
  /// +inf as soon as one row is unbounded.
  double mean = 0.0;
  /// Mean over bounded rows only (NaN when there are none).
  double finite_mean = 0.0;
  std::size_t n_unbounded = 0;
};

WidthSummary mean_width(const IntervalTable& table);

/// (1 / G) sum_g |c_g - (1 - alpha)|.
double mae_coverage(const std::map<std::string, double>& coverages, ConfidenceLevel alpha);

struct KeyCoverage {
  double coverage = 0.0;
  std::size_t n = 0;
  std::size_t covered = 0;
  double mean_width = 0.0;
};

struct CoverageReport {
  double coverage = 0.0;
  std::size_t n = 0;
  std::size_t covered = 0;
  WidthSummary width;
  std::map<std::string, KeyCoverage> by_key;
  /// MAE of coverage across keys; set when keys were supplied.
  std::optional<double> mae;
};

/// Overall and (optionally) per-key coverage and width.
CoverageReport coverage_report(std::span<const double> truth, const IntervalTable& table,
                               ConfidenceLevel alpha,
                               std::optional<std::span<const std::string>> keys = std::nullopt);

}  // namespace pintervals

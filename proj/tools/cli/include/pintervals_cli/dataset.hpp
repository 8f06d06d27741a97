#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pintervals/types.hpp"
#include "pintervals_cli/config.hpp"
#include "pintervals_cli/csv.hpp"

namespace pintervals::cli {

/// Columns a caller insists on; optional columns are loaded whenever present.
struct Requirements {
  bool truth = false;
  bool groups = false;
  bool features = false;
};

struct Dataset {
  std::vector<double> preds;
  std::optional<std::vector<double>> truths;
  std::optional<std::vector<std::string>> groups;
  std::optional<std::vector<int>> bins;
  std::optional<Matrix> features;

  [[nodiscard]] std::size_t size() const noexcept { return preds.size(); }

  /// Throws DataError when truths are absent.
  [[nodiscard]] CalibrationSet calibration() const;
  [[nodiscard]] PredictionSet prediction() const;
  [[nodiscard]] Dataset subset(const std::vector<std::size_t>& rows) const;
};

/// Loads the configured columns. Errors name the file, column and row.
Dataset load_dataset(const std::string& path, const DataColumns& columns, Requirements need);
Dataset dataset_from_table(const CsvTable& t, const DataColumns& columns, Requirements need,
                           const std::string& source);

/// Breaks with roughly equal calibration counts per bin: interior breaks are
/// the empirical (k = ceil(q n)) quantiles of `values` at t / n_bins, outer
/// breaks are infinite. Duplicate quantiles are dropped, so fewer bins may result.
std::vector<double> balanced_breaks(const std::vector<double>& values, int n_bins);

}  // namespace pintervals::cli

#pragma once

#include <span>
#include <vector>

#include "pintervals/conformal.hpp"

namespace pintervals {

/// Outcome bins [b_{t-1}, b_t), t = 1..B, from strictly increasing breaks.
/// The outer breaks may be infinite; a finite last break closes the last bin.
class BinSpec {
 public:
  explicit BinSpec(std::vector<double> breaks);

  [[nodiscard]] const std::vector<double>& breaks() const noexcept { return breaks_; }
  [[nodiscard]] int count() const noexcept { return static_cast<int>(breaks_.size()) - 1; }
  /// Closed range of bin t (1-based), used when clipping emitted intervals.
  [[nodiscard]] Interval range(int bin) const;
  /// Throws out_of_range for values outside the breaks.
  [[nodiscard]] int assign(double value) const;

 private:
  std::vector<double> breaks_;
};

std::vector<int> assign_bins(std::span<const double> values, const BinSpec& spec);

struct BccpOptions {
  ScoreFunction score;
  DistanceWeightConfig weighting;
  bool contiguize = false;
};

/// Bin-conditional conformal intervals. Bin membership of calibration rows
/// comes from calib.bins when present, otherwise from the truths.
IntervalTable pinterval_bccp(const PredictionSet& test, const CalibrationSet& calib,
                             const BinSpec& spec, ConfidenceLevel alpha,
                             const BccpOptions& options = {});

}  // namespace pintervals

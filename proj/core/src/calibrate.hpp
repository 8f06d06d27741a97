#pragma once

// Internal: score pools and thresholds shared by the conformal family.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pintervals/conformal.hpp"
#include "pintervals/quantile.hpp"

namespace pintervals::detail {

/// Score thresholds. Symmetric scores use `hi` only; raw scores use the
/// signed pair [lo, hi].
struct Threshold {
  double lo = 0.0;
  double hi = 0.0;
};

/// Scores of one calibration pool (all rows, a group, a cluster or a bin).
class ScorePool {
 public:
  ScorePool(bool raw, std::vector<std::size_t> rows, std::span<const double> all_scores);

  [[nodiscard]] std::size_t size() const noexcept { return rows_.size(); }
  [[nodiscard]] std::span<const std::size_t> rows() const noexcept { return rows_; }

  [[nodiscard]] Threshold unweighted(ConfidenceLevel alpha) const;
  /// `weights` is indexed by calibration row, not pool position.
  [[nodiscard]] Threshold weighted(std::span<const double> weights, ConfidenceLevel alpha,
                                   TestPointMass mass) const;

 private:
  bool raw_;
  std::vector<std::size_t> rows_;
  SortedScores sorted_;
  std::optional<SortedScores> negated_;
};

[[nodiscard]] bool unbounded(const Threshold& t) noexcept;

Interval apply_threshold(const ScoreFunction& fn, double pred, const Threshold& t);

/// Throws unsupported_inversion for custom scores without an inverse.
void check_invertible(const ScoreFunction& fn);

/// Calibration rows split into pools, and the pool each test point uses.
struct Partition {
  std::vector<std::vector<std::size_t>> pools;
  std::vector<std::string> names;
  std::vector<std::size_t> test_pool;
  /// Used in warnings: "group", "cluster", ...
  std::string kind = "pool";
};

/// Per-row thresholds for every test point under the partition. Unbounded
/// thresholds are reported on `table` as warnings.
std::vector<Threshold> pool_thresholds(const PredictionSet& test, const CalibrationSet& calib,
                                       ConfidenceLevel alpha, const ConformalOptions& options,
                                       const Partition& partition, IntervalTable& table);

/// Distance weights (n_test x n_calib) or nullopt when weighting is disabled.
std::optional<Matrix> weights_for(const DistanceWeightConfig& cfg, const CalibrationSet& calib,
                                  const PredictionSet& test);

/// Conformal intervals under a partition; rows carry only pred and bounds.
IntervalTable calibrate_partitioned(const PredictionSet& test, const CalibrationSet& calib,
                                    ConfidenceLevel alpha, const ConformalOptions& options,
                                    const Partition& partition);

}  // namespace pintervals::detail

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pintervals/types.hpp"

namespace pintervals {

/// 1-based rank ceil((1 - alpha)(n + 1)); a result of n + 1 means "unbounded".
///
/// Products that land within 1e-9 of an integer are treated as that integer so
/// that, e.g., alpha = 0.05 and n = 19 give k = 19 rather than 20.
std::size_t conformal_rank(std::size_t n, double alpha) noexcept;

/// k-th smallest score with k = conformal_rank(n, alpha), or +inf when k > n.
double conformal_quantile(std::span<const double> scores, ConfidenceLevel alpha);

/// Plain empirical quantile: k-th smallest value with k = ceil(q n) clamped to [1, n].
double empirical_quantile(std::span<const double> values, double q);

/// 1-based order statistic; k must lie in [1, values.size()].
double order_statistic(std::vector<double> values, std::size_t k);

/// Mass assigned to the unseen test point in a weighted quantile.
enum class TestPointMass {
  max_weight,  ///< largest calibration weight (conservative)
  unit,        ///< weight 1
};

/// Calibration scores sorted once so that many weighted quantiles (one per
/// test point) can be taken without re-sorting. The sort is stable.
class SortedScores {
 public:
  explicit SortedScores(std::span<const double> scores);

  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

  /// Smallest sorted score whose cumulative normalized mass reaches
  /// 1 - alpha, where masses are w_i / (sum_j w_j + w_test); +inf when the
  /// calibration mass never gets there. `weights` is in the original
  /// (unsorted) order.
  [[nodiscard]] double weighted_quantile(std::span<const double> weights, ConfidenceLevel alpha,
                                         TestPointMass test_mass = TestPointMass::max_weight) const;

 private:
  std::vector<double> values_;
  std::vector<std::size_t> order_;
};

double weighted_quantile(std::span<const double> scores, std::span<const double> weights,
                         ConfidenceLevel alpha,
                         TestPointMass test_mass = TestPointMass::max_weight);

}  // namespace pintervals

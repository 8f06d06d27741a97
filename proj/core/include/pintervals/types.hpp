#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace pintervals {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Row-major storage is not required; one row per observation.
using Matrix = Eigen::MatrixXd;

/// Closed interval [lower, upper]; either end may be infinite.
struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  [[nodiscard]] bool contains(double y) const noexcept { return lower <= y && y <= upper; }
  [[nodiscard]] bool bounded() const noexcept;
  [[nodiscard]] double width() const noexcept { return upper - lower; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Builds an interval after checking lower <= upper and that neither end is NaN.
Interval make_interval(double lower, double upper);

/// Intersection of a closed interval with [lo, hi]; nullopt when empty.
std::optional<Interval> intersect(const Interval& a, const Interval& b) noexcept;

/// Sorted, pairwise-disjoint, non-empty union of closed intervals.
/// Members that overlap or share an endpoint are merged on construction.
class IntervalSet {
 public:
  explicit IntervalSet(std::vector<Interval> parts);

  [[nodiscard]] std::span<const Interval> parts() const noexcept { return parts_; }
  [[nodiscard]] std::size_t size() const noexcept { return parts_.size(); }
  [[nodiscard]] bool contains(double y) const noexcept;
  /// Sum of member widths.
  [[nodiscard]] double width() const noexcept;
  [[nodiscard]] Interval hull() const noexcept;

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  std::vector<Interval> parts_;
};

/// [min of lowers, max of uppers].
Interval contiguize(const IntervalSet& set) noexcept;

/// Miscoverage level alpha, 0 < alpha < 1; the nominal coverage is 1 - alpha.
class ConfidenceLevel {
 public:
  explicit ConfidenceLevel(double alpha);

  [[nodiscard]] double alpha() const noexcept { return alpha_; }
  [[nodiscard]] double coverage() const noexcept { return 1.0 - alpha_; }

 private:
  double alpha_;
};

/// Paired calibration predictions and outcomes with optional partition
/// labels and distance features.
struct CalibrationSet {
  std::vector<double> preds;
  std::vector<double> truths;
  std::optional<std::vector<std::string>> groups;
  /// Bin ids (1-based) of each truth, as an alternative to deriving them from breaks.
  std::optional<std::vector<int>> bins;
  std::optional<Matrix> features;

  [[nodiscard]] std::size_t size() const noexcept { return preds.size(); }

  /// Throws Error{empty_calibration, length_mismatch, invalid_argument}.
  void validate() const;

  /// Copy of the selected rows, in the order given.
  [[nodiscard]] CalibrationSet subset(std::span<const std::size_t> rows) const;
};

/// Test points: predictions plus whatever the chosen method needs.
struct PredictionSet {
  std::vector<double> preds;
  std::optional<std::vector<std::string>> groups;
  std::optional<Matrix> features;

  [[nodiscard]] std::size_t size() const noexcept { return preds.size(); }

  void validate() const;
};

}  // namespace pintervals

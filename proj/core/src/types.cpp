#include "pintervals/types.hpp"

#include <algorithm>
#include <cmath>

#include "pintervals/error.hpp"

namespace pintervals {

bool Interval::bounded() const noexcept { return std::isfinite(lower) && std::isfinite(upper); }

Interval make_interval(double lower, double upper) {
  if (std::isnan(lower) || std::isnan(upper) || lower > upper) {
    throw Error(Errc::invalid_argument, "interval requires lower <= upper, got [" +
                                            std::to_string(lower) + ", " + std::to_string(upper) +
                                            "]");
  }
  return {lower, upper};
}

std::optional<Interval> intersect(const Interval& a, const Interval& b) noexcept {
  const double lo = std::max(a.lower, b.lower);
  const double hi = std::min(a.upper, b.upper);
  if (lo > hi) return std::nullopt;
  return Interval{lo, hi};
}

IntervalSet::IntervalSet(std::vector<Interval> parts) {
  if (parts.empty()) throw Error(Errc::invalid_argument, "interval set must be non-empty");
  for (const auto& p : parts) make_interval(p.lower, p.upper);
  std::sort(parts.begin(), parts.end(), [](const Interval& a, const Interval& b) {
    return a.lower < b.lower || (a.lower == b.lower && a.upper < b.upper);
  });
  parts_.reserve(parts.size());
  for (const auto& p : parts) {
    if (!parts_.empty() && p.lower <= parts_.back().upper) {
      parts_.back().upper = std::max(parts_.back().upper, p.upper);
    } else {
      parts_.push_back(p);
    }
  }
}

bool IntervalSet::contains(double y) const noexcept {
  return std::any_of(parts_.begin(), parts_.end(),
                     [y](const Interval& p) { return p.contains(y); });
}

double IntervalSet::width() const noexcept {
  double total = 0.0;
  for (const auto& p : parts_) total += p.width();
  return total;
}

Interval IntervalSet::hull() const noexcept { return {parts_.front().lower, parts_.back().upper}; }

Interval contiguize(const IntervalSet& set) noexcept {
  double lo = kInf;
  double hi = -kInf;
  for (const auto& p : set.parts()) {
    lo = std::min(lo, p.lower);
    hi = std::max(hi, p.upper);
  }
  return {lo, hi};
}

ConfidenceLevel::ConfidenceLevel(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(Errc::invalid_argument, "alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
}

namespace {

void check_finite(const std::vector<double>& v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      throw Error(Errc::invalid_argument,
                  std::string(what) + " has a non-finite value at index " + std::to_string(i));
    }
  }
}

}  // namespace

void CalibrationSet::validate() const {
  if (preds.empty()) throw Error(Errc::empty_calibration, "calibration set has no rows");
  const auto n = preds.size();
  if (truths.size() != n) {
    throw Error(Errc::length_mismatch, "calibration preds (" + std::to_string(n) +
                                           ") and truths (" + std::to_string(truths.size()) +
                                           ") differ in length");
  }
  if (groups && groups->size() != n) {
    throw Error(Errc::length_mismatch, "calibration groups must have one label per row");
  }
  if (bins && bins->size() != n) {
    throw Error(Errc::length_mismatch, "calibration bins must have one label per row");
  }
  if (features && static_cast<std::size_t>(features->rows()) != n) {
    throw Error(Errc::length_mismatch, "calibration features must have one row per observation");
  }
  check_finite(preds, "calibration preds");
  check_finite(truths, "calibration truths");
  if (features && !features->allFinite()) {
    throw Error(Errc::invalid_argument, "calibration features contain non-finite values");
  }
}

CalibrationSet CalibrationSet::subset(std::span<const std::size_t> rows) const {
  CalibrationSet out;
  out.preds.reserve(rows.size());
  out.truths.reserve(rows.size());
  for (auto r : rows) {
    out.preds.push_back(preds.at(r));
    out.truths.push_back(truths.at(r));
  }
  if (groups) {
    out.groups.emplace();
    for (auto r : rows) out.groups->push_back((*groups)[r]);
  }
  if (bins) {
    out.bins.emplace();
    for (auto r : rows) out.bins->push_back((*bins)[r]);
  }
  if (features) {
    Matrix f(static_cast<Eigen::Index>(rows.size()), features->cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      f.row(static_cast<Eigen::Index>(i)) = features->row(static_cast<Eigen::Index>(rows[i]));
    }
    out.features = std::move(f);
  }
  return out;
}

void PredictionSet::validate() const {
  const auto n = preds.size();
  check_finite(preds, "test preds");
  if (groups && groups->size() != n) {
    throw Error(Errc::length_mismatch, "test groups must have one label per prediction");
  }
  if (features && static_cast<std::size_t>(features->rows()) != n) {
    throw Error(Errc::length_mismatch, "test features must have one row per prediction");
  }
  if (features && !features->allFinite()) {
    throw Error(Errc::invalid_argument, "test features contain non-finite values");
  }
}

}  // namespace pintervals

#include "pintervals/quantile.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pintervals/error.hpp"

namespace pintervals {

namespace {

constexpr double kRankFuzz = 1e-9;

std::size_t ceil_fuzzy(double x) {
  const double k = std::ceil(x - kRankFuzz);
  return k < 1.0 ? 1 : static_cast<std::size_t>(k);
}

void require_finite(std::span<const double> v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      throw Error(Errc::invalid_argument,
                  std::string(what) + " has a non-finite value at index " + std::to_string(i));
    }
  }
}

}  // namespace

std::size_t conformal_rank(std::size_t n, double alpha) noexcept {
  return ceil_fuzzy((1.0 - alpha) * static_cast<double>(n + 1));
}

double order_statistic(std::vector<double> values, std::size_t k) {
  if (k < 1 || k > values.size()) {
    throw Error(Errc::invalid_argument, "order statistic rank out of range");
  }
  auto nth = values.begin() + static_cast<std::ptrdiff_t>(k - 1);
  std::nth_element(values.begin(), nth, values.end());
  return *nth;
}

double conformal_quantile(std::span<const double> scores, ConfidenceLevel alpha) {
  if (scores.empty()) throw Error(Errc::empty_calibration, "no calibration scores");
  require_finite(scores, "scores");
  const std::size_t k = conformal_rank(scores.size(), alpha.alpha());
  if (k > scores.size()) return kInf;
  return order_statistic({scores.begin(), scores.end()}, k);
}

double empirical_quantile(std::span<const double> values, double q) {
  if (values.empty()) throw Error(Errc::empty_calibration, "no values");
  if (!(q > 0.0 && q < 1.0)) throw Error(Errc::invalid_argument, "quantile level must be in (0,1)");
  const std::size_t k = std::min(ceil_fuzzy(q * static_cast<double>(values.size())), values.size());
  return order_statistic({values.begin(), values.end()}, k);
}

SortedScores::SortedScores(std::span<const double> scores) : order_(scores.size()) {
  require_finite(scores, "scores");
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::stable_sort(order_.begin(), order_.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  values_.reserve(scores.size());
  for (auto i : order_) values_.push_back(scores[i]);
}

double SortedScores::weighted_quantile(std::span<const double> weights, ConfidenceLevel alpha,
                                       TestPointMass test_mass) const {
  if (values_.empty()) throw Error(Errc::empty_calibration, "no calibration scores");
  if (weights.size() != values_.size()) {
    throw Error(Errc::length_mismatch, "scores and weights differ in length");
  }
  double total = 0.0;
  double max_w = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    if (!std::isfinite(w) || w < 0.0) {
      throw Error(Errc::invalid_weights, "weight at index " + std::to_string(i) +
                                             " is negative or non-finite");
    }
    total += w;
    max_w = std::max(max_w, w);
  }
  if (!(max_w > 0.0)) throw Error(Errc::degenerate_weights, "all weights are zero");

  const double test_w = test_mass == TestPointMass::max_weight ? max_w : 1.0;
  // Same integer fuzz as conformal_rank, expressed in units of average mass,
  // so uniform weights reproduce the unweighted rank exactly.
  const double mass = total + test_w;
  const double target =
      alpha.coverage() * mass - kRankFuzz * mass / static_cast<double>(values_.size() + 1);
  double cum = 0.0;
  for (std::size_t k = 0; k < values_.size(); ++k) {
    cum += weights[order_[k]];
    if (cum >= target) return values_[k];
  }
  return kInf;
}

double weighted_quantile(std::span<const double> scores, std::span<const double> weights,
                         ConfidenceLevel alpha, TestPointMass test_mass) {
  if (scores.size() != weights.size()) {
    throw Error(Errc::length_mismatch, "scores and weights differ in length");
  }
  return SortedScores(scores).weighted_quantile(weights, alpha, test_mass);
}

}  // namespace pintervals

#include "pintervals/bccp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "calibrate.hpp"
#include "pintervals/error.hpp"

namespace pintervals {

BinSpec::BinSpec(std::vector<double> breaks) : breaks_(std::move(breaks)) {
  if (breaks_.size() < 2) throw Error(Errc::invalid_argument, "bins need at least two breaks");
  for (std::size_t i = 0; i < breaks_.size(); ++i) {
    if (std::isnan(breaks_[i])) throw Error(Errc::invalid_argument, "bin break is NaN");
    if (i > 0 && !(breaks_[i - 1] < breaks_[i])) {
      throw Error(Errc::invalid_argument, "bin breaks must be strictly increasing");
    }
  }
  if (breaks_.front() == kInf || breaks_.back() == -kInf) {
    throw Error(Errc::invalid_argument, "bin breaks cannot start at +inf or end at -inf");
  }
}

Interval BinSpec::range(int bin) const {
  if (bin < 1 || bin > count()) {
    throw Error(Errc::out_of_range, "bin " + std::to_string(bin) + " does not exist");
  }
  return {breaks_[static_cast<std::size_t>(bin - 1)], breaks_[static_cast<std::size_t>(bin)]};
}

int BinSpec::assign(double value) const {
  if (std::isnan(value)) throw Error(Errc::out_of_range, "cannot bin NaN");
  if (value < breaks_.front() || value > breaks_.back() ||
      (value == breaks_.back() && std::isinf(value))) {
    throw Error(Errc::out_of_range, "value " + std::to_string(value) + " lies outside the bins [" +
                                        std::to_string(breaks_.front()) + ", " +
                                        std::to_string(breaks_.back()) + "]");
  }
  // First break strictly greater than value closes the bin on the right.
  const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), value);
  if (it == breaks_.end()) return count();  // value == finite last break
  return static_cast<int>(it - breaks_.begin());
}

std::vector<int> assign_bins(std::span<const double> values, const BinSpec& spec) {
  std::vector<int> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(spec.assign(v));
  return out;
}

IntervalTable pinterval_bccp(const PredictionSet& test, const CalibrationSet& calib,
                             const BinSpec& spec, ConfidenceLevel alpha,
                             const BccpOptions& options) {
  calib.validate();
  test.validate();
  detail::check_invertible(options.score);
  const int n_bins = spec.count();

  std::vector<int> bins;
  if (calib.bins) {
    bins = *calib.bins;
    for (std::size_t i = 0; i < bins.size(); ++i) {
      if (bins[i] < 1 || bins[i] > n_bins) {
        throw Error(Errc::out_of_range, "calibration bin label " + std::to_string(bins[i]) +
                                            " at row " + std::to_string(i) + " is not in 1.." +
                                            std::to_string(n_bins));
      }
    }
  } else {
    bins = assign_bins(calib.truths, spec);
  }

  IntervalTable table;
  std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(n_bins));
  for (std::size_t i = 0; i < bins.size(); ++i) {
    members[static_cast<std::size_t>(bins[i] - 1)].push_back(i);
  }
  const double guarantee_floor = 1.0 / alpha.alpha() - 1.0;
  for (int t = 1; t <= n_bins; ++t) {
    const auto n_t = members[static_cast<std::size_t>(t - 1)].size();
    if (n_t == 0) {
      throw Error(Errc::empty_bin, "bin " + std::to_string(t) + " has no calibration points");
    }
    if (static_cast<double>(n_t) < guarantee_floor) {
      table.warn("small-bin", "bin " + std::to_string(t) + " has " + std::to_string(n_t) +
                                  " calibration points, fewer than 1/alpha - 1");
    }
  }

  // Thresholds for every (test point, bin) pair, one partition per bin.
  ConformalOptions conf{options.score, options.weighting};
  std::vector<std::vector<detail::Threshold>> per_bin;
  per_bin.reserve(static_cast<std::size_t>(n_bins));
  for (int t = 1; t <= n_bins; ++t) {
    detail::Partition part;
    part.kind = "bin";
    part.names = {std::to_string(t)};
    part.pools = {members[static_cast<std::size_t>(t - 1)]};
    part.test_pool.assign(test.size(), 0);
    per_bin.push_back(detail::pool_thresholds(test, calib, alpha, conf, part, table));
  }

  table.rows.reserve(test.size());
  for (std::size_t j = 0; j < test.size(); ++j) {
    const double pred = test.preds[j];
    std::vector<Interval> candidates;
    for (int t = 1; t <= n_bins; ++t) {
      const auto region =
          detail::apply_threshold(options.score, pred, per_bin[static_cast<std::size_t>(t - 1)][j]);
      if (auto clipped = intersect(region, spec.range(t))) candidates.push_back(*clipped);
    }

    IntervalRow row;
    row.pred = pred;
    if (candidates.empty()) {
      row.empty = true;
      row.bounds = {pred, pred};
      table.warn("empty-prediction-set", "every bin was rejected for test point " +
                                             std::to_string(j), j);
    } else {
      IntervalSet set(std::move(candidates));
      if (options.contiguize) {
        row.bounds = contiguize(set);
      } else {
        row.bounds = set.hull();
        row.set = std::move(set);
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace pintervals

#include "calibrate.hpp"

#include <cmath>
#include <string>

#include "pintervals/error.hpp"
#include "pintervals/score.hpp"

namespace pintervals::detail {

namespace {

std::vector<double> gather(std::span<const double> all, std::span<const std::size_t> rows,
                           bool negate) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (auto r : rows) out.push_back(negate ? -all[r] : all[r]);
  return out;
}

double kth_or_inf(std::span<const double> sorted, std::size_t k) {
  return k > sorted.size() ? kInf : sorted[k - 1];
}

}  // namespace

ScorePool::ScorePool(bool raw, std::vector<std::size_t> rows, std::span<const double> all_scores)
    : raw_(raw), rows_(std::move(rows)), sorted_(gather(all_scores, rows_, false)) {
  if (rows_.empty()) throw Error(Errc::empty_calibration, "calibration pool is empty");
  if (raw_) negated_.emplace(gather(all_scores, rows_, true));
}

Threshold ScorePool::unweighted(ConfidenceLevel alpha) const {
  const auto sorted = sorted_.values();
  if (!raw_) {
    const double q = kth_or_inf(sorted, conformal_rank(sorted.size(), alpha.alpha()));
    return {q, q};
  }
  const std::size_t k = conformal_rank(sorted.size(), alpha.alpha() / 2.0);
  const double hi = kth_or_inf(sorted, k);
  const double lo = k > sorted.size() ? -kInf : sorted[sorted.size() - k];
  return {lo, hi};
}

Threshold ScorePool::weighted(std::span<const double> weights, ConfidenceLevel alpha,
                              TestPointMass mass) const {
  std::vector<double> w;
  w.reserve(rows_.size());
  for (auto r : rows_) w.push_back(weights[r]);
  if (!raw_) {
    const double q = sorted_.weighted_quantile(w, alpha, mass);
    return {q, q};
  }
  const ConfidenceLevel half(alpha.alpha() / 2.0);
  return {-negated_->weighted_quantile(w, half, mass), sorted_.weighted_quantile(w, half, mass)};
}

bool unbounded(const Threshold& t) noexcept { return std::isinf(t.lo) || std::isinf(t.hi); }

Interval apply_threshold(const ScoreFunction& fn, double pred, const Threshold& t) {
  if (fn.kind == ScoreKind::raw) return invert_raw(pred, t.lo, t.hi);
  return invert_score(fn, pred, t.hi);
}

void check_invertible(const ScoreFunction& fn) {
  if (fn.kind == ScoreKind::custom && !fn.custom_inverse) {
    throw Error(Errc::unsupported_inversion,
                "custom scores cannot be inverted automatically; supply a custom inverse");
  }
}

std::optional<Matrix> weights_for(const DistanceWeightConfig& cfg, const CalibrationSet& calib,
                                  const PredictionSet& test) {
  if (!cfg.enabled) return std::nullopt;
  if (!calib.features || !test.features) {
    throw Error(Errc::invalid_argument,
                "distance weighting needs features for both calibration and test points");
  }
  return distance_weights(cfg, *calib.features, *test.features);
}

std::vector<Threshold> pool_thresholds(const PredictionSet& test, const CalibrationSet& calib,
                                       ConfidenceLevel alpha, const ConformalOptions& options,
                                       const Partition& partition, IntervalTable& table) {
  const auto all_scores = scores(options.score, calib.preds, calib.truths);
  const bool raw = options.score.kind == ScoreKind::raw;

  std::vector<ScorePool> pools;
  pools.reserve(partition.pools.size());
  for (const auto& rows : partition.pools) pools.emplace_back(raw, rows, all_scores);

  std::vector<Threshold> out(test.size());
  const auto weights = weights_for(options.weighting, calib, test);
  if (!weights) {
    std::vector<Threshold> per_pool;
    per_pool.reserve(pools.size());
    for (std::size_t p = 0; p < pools.size(); ++p) {
      per_pool.push_back(pools[p].unweighted(alpha));
      if (unbounded(per_pool.back())) {
        table.warn("unbounded-quantile",
                   partition.kind + " '" + partition.names[p] + "' has " +
                       std::to_string(pools[p].size()) + " calibration points, too few for alpha " +
                       std::to_string(alpha.alpha()) + "; its intervals are unbounded");
      }
    }
    for (std::size_t j = 0; j < test.size(); ++j) out[j] = per_pool[partition.test_pool[j]];
    return out;
  }

  std::vector<double> wj(calib.size());
  for (std::size_t j = 0; j < test.size(); ++j) {
    for (std::size_t i = 0; i < calib.size(); ++i) {
      wj[i] = (*weights)(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
    }
    const auto p = partition.test_pool[j];
    try {
      out[j] = pools[p].weighted(wj, alpha, options.weighting.test_mass);
    } catch (const Error& e) {
      if (e.code() != Errc::degenerate_weights) throw;
      throw Error(Errc::degenerate_weights,
                  "all distance weights are zero for test point " + std::to_string(j));
    }
    if (unbounded(out[j])) {
      table.warn("unbounded-quantile",
                 "weighted calibration mass in " + partition.kind + " '" + partition.names[p] +
                     "' is too small for alpha " + std::to_string(alpha.alpha()),
                 j);
    }
  }
  return out;
}

IntervalTable calibrate_partitioned(const PredictionSet& test, const CalibrationSet& calib,
                                    ConfidenceLevel alpha, const ConformalOptions& options,
                                    const Partition& partition) {
  check_invertible(options.score);
  IntervalTable table;
  const auto thresholds = pool_thresholds(test, calib, alpha, options, partition, table);
  table.rows.reserve(test.size());
  for (std::size_t j = 0; j < test.size(); ++j) {
    IntervalRow row;
    row.pred = test.preds[j];
    row.bounds = apply_threshold(options.score, test.preds[j], thresholds[j]);
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace pintervals::detail

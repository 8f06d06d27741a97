#include "pintervals/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pintervals/error.hpp"
#include "pintervals/quantile.hpp"
#include "pintervals/rng.hpp"

namespace pintervals {

std::string_view to_string(BootstrapErrorType t) noexcept {
  return t == BootstrapErrorType::raw ? "raw" : "absolute";
}

BootstrapErrorType parse_bootstrap_error_type(std::string_view s) {
  if (s == "raw") return BootstrapErrorType::raw;
  if (s == "absolute") return BootstrapErrorType::absolute;
  throw Error(Errc::invalid_argument, "unknown bootstrap error type '" + std::string(s) + "'");
}

namespace {

std::size_t bootstrap_rank(double q, std::size_t b) {
  const double k = std::ceil(q * static_cast<double>(b) - 1e-9);
  return std::clamp<std::size_t>(k < 1.0 ? 1 : static_cast<std::size_t>(k), 1, b);
}

// Inverse-CDF draw from cumulative weights.
std::size_t draw_weighted(Engine& eng, const std::vector<double>& cum) {
  const double u = uniform01(eng) * cum.back();
  const auto it = std::upper_bound(cum.begin(), cum.end(), u);
  return std::min(static_cast<std::size_t>(it - cum.begin()), cum.size() - 1);
}

}  // namespace

IntervalTable pinterval_bootstrap(const PredictionSet& test, const CalibrationSet& calib,
                                  ConfidenceLevel alpha, const BootstrapConfig& cfg) {
  calib.validate();
  test.validate();
  if (cfg.n_bootstrap < 1) throw Error(Errc::invalid_argument, "n_bootstrap must be at least 1");

  const auto n = calib.size();
  std::vector<double> errors(n);
  for (std::size_t i = 0; i < n; ++i) errors[i] = calib.truths[i] - calib.preds[i];

  std::optional<Matrix> weights;
  if (cfg.weighting.enabled) {
    if (!calib.features || !test.features) {
      throw Error(Errc::invalid_argument,
                  "distance-weighted bootstrap needs features for calibration and test points");
    }
    weights = distance_weights(cfg.weighting, *calib.features, *test.features);
  }

  const std::size_t b = cfg.n_bootstrap;
  const std::size_t k_lo = bootstrap_rank(alpha.alpha() / 2.0, b);
  const std::size_t k_hi = bootstrap_rank(1.0 - alpha.alpha() / 2.0, b);

  IntervalTable table;
  table.rows.reserve(test.size());
  std::vector<double> sims(b);
  std::vector<double> cum(n);
  for (std::size_t j = 0; j < test.size(); ++j) {
    auto eng = make_engine(cfg.seed, j);
    if (weights) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += (*weights)(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
        cum[i] = acc;
      }
      if (!(acc > 0.0)) {
        throw Error(Errc::degenerate_weights,
                    "all resampling weights are zero for test point " + std::to_string(j));
      }
    }
    const double pred = test.preds[j];
    for (std::size_t s = 0; s < b; ++s) {
      const std::size_t i = weights ? draw_weighted(eng, cum) : uniform_index(eng, n);
      double e = errors[i];
      if (cfg.error_type == BootstrapErrorType::absolute) {
        e = (eng() >> 63) != 0 ? std::abs(e) : -std::abs(e);
      }
      sims[s] = pred + e;
    }
    std::sort(sims.begin(), sims.end());
    IntervalRow row;
    row.pred = pred;
    row.bounds = {sims[k_lo - 1], sims[k_hi - 1]};
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace pintervals

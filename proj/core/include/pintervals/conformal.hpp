#pragma once

#include "pintervals/distance.hpp"
#include "pintervals/score.hpp"
#include "pintervals/table.hpp"
#include "pintervals/types.hpp"

namespace pintervals {

struct ConformalOptions {
  ScoreFunction score;
  DistanceWeightConfig weighting;
};

/// Split conformal intervals. With weighting enabled each test point gets
/// its own weighted quantile; raw scores give asymmetric intervals from two
/// one-sided quantiles at alpha / 2.
IntervalTable pinterval_conformal(const PredictionSet& test, const CalibrationSet& calib,
                                  ConfidenceLevel alpha, const ConformalOptions& options = {});

}  // namespace pintervals

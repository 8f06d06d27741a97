#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "pintervals/table.hpp"
#include "pintervals/types.hpp"

namespace pintervals {

enum class Distribution { normal, lognormal, logistic, poisson, negbin, chisq, custom };

std::string_view to_string(Distribution) noexcept;
Distribution parse_distribution(std::string_view);

using ParamMap = std::map<std::string, double>;

/// Quantile of the outcome at probability p given parameters and the point prediction.
using CustomQuantile = std::function<double(double p, const ParamMap& pars, double pred)>;

/// Parameter names per family:
///   normal    mean, sd          (errors truth - pred)
///   logistic  location, scale   (errors truth - pred)
///   lognormal meanlog, sdlog    (log truth - log pred)
///   negbin    theta             (mean = pred, Var = mu + mu^2 / theta)
///   poisson, chisq              none; lambda / df = pred
struct DistSpec {
  Distribution dist = Distribution::normal;
  std::optional<ParamMap> pars;
  CustomQuantile custom_quantile;
  /// Fix the normal mean / logistic location at zero when estimating.
  bool center_at_zero = false;
};

enum class ParamSource { estimated, supplied };

struct EstimatedParams {
  ParamMap values;
  ParamSource source = ParamSource::estimated;

  [[nodiscard]] double at(const std::string& name) const;
};

EstimatedParams estimate_params(Distribution dist, const CalibrationSet& calib,
                                bool center_at_zero = false);

/// Standard normal quantile; accurate to a few ulps over (0, 1).
double normal_quantile(double p);
double normal_cdf(double x) noexcept;

/// CDF of the outcome distribution at y for a test point with prediction `pred`.
double dist_cdf(Distribution dist, double y, const ParamMap& params, double pred);

/// Quantile of the outcome distribution. Discrete families return the
/// smallest integer k with CDF(k) >= p.
double dist_quantile(Distribution dist, double p, const ParamMap& params, double pred,
                     const CustomQuantile& custom = {});

IntervalTable pinterval_parametric(const PredictionSet& test, const DistSpec& spec,
                                   const std::optional<CalibrationSet>& calib,
                                   ConfidenceLevel alpha);

}  // namespace pintervals

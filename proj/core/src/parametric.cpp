#include "pintervals/parametric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "pintervals/error.hpp"

namespace pintervals {

std::string_view to_string(Distribution d) noexcept {
  switch (d) {
    case Distribution::normal: return "normal";
    case Distribution::lognormal: return "lognormal";
    case Distribution::logistic: return "logistic";
    case Distribution::poisson: return "poisson";
    case Distribution::negbin: return "negbin";
    case Distribution::chisq: return "chisq";
    case Distribution::custom: return "custom";
  }
  return "unknown";
}

Distribution parse_distribution(std::string_view s) {
  if (s == "normal") return Distribution::normal;
  if (s == "lognormal") return Distribution::lognormal;
  if (s == "logistic") return Distribution::logistic;
  if (s == "poisson") return Distribution::poisson;
  if (s == "negbin") return Distribution::negbin;
  if (s == "chisq") return Distribution::chisq;
  if (s == "custom") return Distribution::custom;
  throw Error(Errc::invalid_argument, "unknown distribution '" + std::string(s) + "'");
}

double EstimatedParams::at(const std::string& name) const {
  const auto it = values.find(name);
  if (it == values.end()) throw Error(Errc::missing_parameters, "parameter '" + name + "' missing");
  return it->second;
}

namespace {

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double param(const ParamMap& pars, const char* name) {
  const auto it = pars.find(name);
  if (it == pars.end()) {
    throw Error(Errc::missing_parameters, std::string("parameter '") + name + "' missing");
  }
  return it->second;
}

double positive_param(const ParamMap& pars, const char* name) {
  const double v = param(pars, name);
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(Errc::degenerate_distribution,
                std::string("parameter '") + name + "' must be positive and finite");
  }
  return v;
}

void check_probability(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(Errc::domain_error, "probability must lie in (0, 1), got " + std::to_string(p));
  }
}

double require_positive_pred(double pred, Distribution d) {
  if (!(pred > 0.0) || !std::isfinite(pred)) {
    throw Error(Errc::domain_error, std::string(to_string(d)) +
                                        " needs a positive prediction, got " +
                                        std::to_string(pred));
  }
  return pred;
}

double require_count_mean(double pred, Distribution d) {
  if (!(pred >= 0.0) || !std::isfinite(pred)) {
    throw Error(Errc::domain_error, std::string(to_string(d)) +
                                        " needs a non-negative prediction, got " +
                                        std::to_string(pred));
  }
  return pred;
}

double logit(double p) { return std::log(p) - std::log1p(-p); }

// CDF at integer k >= 0 for the discrete families.
double count_cdf(Distribution d, double k, const ParamMap& pars, double mu) {
  if (k < 0.0) return 0.0;
  if (mu == 0.0) return 1.0;
  if (d == Distribution::poisson) return boost::math::gamma_q(k + 1.0, mu);
  const double theta = positive_param(pars, "theta");
  return boost::math::ibeta(theta, k + 1.0, theta / (theta + mu));
}

double count_quantile(Distribution d, double p, const ParamMap& pars, double mu) {
  if (mu == 0.0) return 0.0;
  double var = mu;
  if (d == Distribution::negbin) var += mu * mu / positive_param(pars, "theta");
  double k = std::max(0.0, std::floor(mu + normal_quantile(p) * std::sqrt(var)));
  while (k > 0.0 && count_cdf(d, k - 1.0, pars, mu) >= p) k -= 1.0;
  while (count_cdf(d, k, pars, mu) < p) k += 1.0;
  return k;
}

double chisq_quantile(double p, double df) {
  const auto cdf = [df](double x) { return boost::math::gamma_p(df / 2.0, x / 2.0); };
  double lo = 0.0;
  double hi = std::max(1.0, df);
  while (cdf(hi) < p) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 400 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// Acklam's rational approximation followed by one Halley step against erfc.
double normal_quantile(double p) {
  check_probability(p);
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x = 0.0;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(x * x / 2.0);
  return x - u / (1.0 + x * u / 2.0);
}

EstimatedParams estimate_params(Distribution dist, const CalibrationSet& calib,
                                bool center_at_zero) {
  calib.validate();
  EstimatedParams out;
  out.source = ParamSource::estimated;
  const auto n = calib.size();
  switch (dist) {
    case Distribution::normal:
    case Distribution::logistic: {
      std::vector<double> e(n);
      for (std::size_t i = 0; i < n; ++i) e[i] = calib.truths[i] - calib.preds[i];
      const double mean = mean_of(e);
      const double sd = sample_sd(e, mean);
      if (!(sd > 0.0)) {
        throw Error(Errc::degenerate_distribution,
                    "calibration errors have zero spread; cannot fit a " +
                        std::string(to_string(dist)) + " error model");
      }
      const double center = center_at_zero ? 0.0 : mean;
      if (dist == Distribution::normal) {
        out.values = {{"mean", center}, {"sd", sd}};
      } else {
        out.values = {{"location", center}, {"scale", sd * std::sqrt(3.0) / std::numbers::pi}};
      }
      break;
    }
    case Distribution::lognormal: {
      std::vector<double> e(n);
      for (std::size_t i = 0; i < n; ++i) {
        if (!(calib.truths[i] > 0.0) || !(calib.preds[i] > 0.0)) {
          throw Error(Errc::domain_error, "lognormal errors need positive preds and truths (row " +
                                              std::to_string(i) + ")");
        }
        e[i] = std::log(calib.truths[i]) - std::log(calib.preds[i]);
      }
      const double mean = mean_of(e);
      const double sd = sample_sd(e, mean);
      if (!(sd > 0.0)) {
        throw Error(Errc::degenerate_distribution, "log errors have zero spread");
      }
      out.values = {{"meanlog", center_at_zero ? 0.0 : mean}, {"sdlog", sd}};
      break;
    }
    case Distribution::negbin: {
      double num = 0.0;
      double den = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double y = calib.truths[i];
        const double mu = calib.preds[i];
        if (y < 0.0) {
          throw Error(Errc::domain_error,
                      "negative binomial needs non-negative truths (row " + std::to_string(i) + ")");
        }
        if (mu < 0.0) {
          throw Error(Errc::domain_error,
                      "negative binomial needs non-negative preds (row " + std::to_string(i) + ")");
        }
        num += mu * mu;
        den += (y - mu) * (y - mu) - mu;
      }
      if (!(den > 0.0) || !(num > 0.0)) {
        throw Error(Errc::underdispersion,
                    "calibration data are not overdispersed relative to poisson; use poisson");
      }
      out.values = {{"theta", num / den}};
      break;
    }
    case Distribution::poisson:
    case Distribution::chisq:
      break;
    case Distribution::custom:
      throw Error(Errc::missing_parameters, "custom distributions take supplied parameters only");
  }
  return out;
}

double dist_cdf(Distribution dist, double y, const ParamMap& pars, double pred) {
  switch (dist) {
    case Distribution::normal:
      return normal_cdf((y - pred - param(pars, "mean")) / positive_param(pars, "sd"));
    case Distribution::logistic: {
      const double z = (y - pred - param(pars, "location")) / positive_param(pars, "scale");
      return 1.0 / (1.0 + std::exp(-z));
    }
    case Distribution::lognormal: {
      if (y <= 0.0) return 0.0;
      const double base = require_positive_pred(pred, dist);
      return normal_cdf((std::log(y) - std::log(base) - param(pars, "meanlog")) /
                        positive_param(pars, "sdlog"));
    }
    case Distribution::poisson:
    case Distribution::negbin:
      return count_cdf(dist, std::floor(y), pars, require_count_mean(pred, dist));
    case Distribution::chisq: {
      const double df = require_positive_pred(pred, dist);
      return y <= 0.0 ? 0.0 : boost::math::gamma_p(df / 2.0, y / 2.0);
    }
    case Distribution::custom: break;
  }
  throw Error(Errc::invalid_argument, "no CDF is available for custom distributions");
}

double dist_quantile(Distribution dist, double p, const ParamMap& pars, double pred,
                     const CustomQuantile& custom) {
  check_probability(p);
  switch (dist) {
    case Distribution::normal:
      return pred + param(pars, "mean") + positive_param(pars, "sd") * normal_quantile(p);
    case Distribution::logistic:
      return pred + param(pars, "location") + positive_param(pars, "scale") * logit(p);
    case Distribution::lognormal:
      return require_positive_pred(pred, dist) *
             std::exp(param(pars, "meanlog") + positive_param(pars, "sdlog") * normal_quantile(p));
    case Distribution::poisson:
    case Distribution::negbin:
      return count_quantile(dist, p, pars, require_count_mean(pred, dist));
    case Distribution::chisq:
      return chisq_quantile(p, require_positive_pred(pred, dist));
    case Distribution::custom:
      if (!custom) throw Error(Errc::invalid_argument, "custom distribution needs a quantile function");
      return custom(p, pars, pred);
  }
  return 0.0;
}

namespace {

void check_params(Distribution dist, const ParamMap& pars) {
  switch (dist) {
    case Distribution::normal:
      param(pars, "mean");
      positive_param(pars, "sd");
      break;
    case Distribution::logistic:
      param(pars, "location");
      positive_param(pars, "scale");
      break;
    case Distribution::lognormal:
      param(pars, "meanlog");
      positive_param(pars, "sdlog");
      break;
    case Distribution::negbin: positive_param(pars, "theta"); break;
    default: break;
  }
}

ParamMap resolve_params(const DistSpec& spec, const std::optional<CalibrationSet>& calib) {
  switch (spec.dist) {
    case Distribution::poisson:
    case Distribution::chisq:
      return {};
    case Distribution::custom:
      if (!spec.custom_quantile) {
        throw Error(Errc::invalid_argument, "custom distribution needs a quantile function");
      }
      if (!spec.pars) throw Error(Errc::missing_parameters, "custom distribution needs pars");
      return *spec.pars;
    default: break;
  }
  if (calib && spec.pars) {
    throw Error(Errc::ambiguous_parameters,
                "supply either a calibration set or parameters, not both");
  }
  if (!calib && !spec.pars) {
    throw Error(Errc::missing_parameters, std::string(to_string(spec.dist)) +
                                              " intervals need a calibration set or parameters");
  }
  ParamMap pars = spec.pars ? *spec.pars : estimate_params(spec.dist, *calib, spec.center_at_zero).values;
  check_params(spec.dist, pars);
  return pars;
}

}  // namespace

IntervalTable pinterval_parametric(const PredictionSet& test, const DistSpec& spec,
                                   const std::optional<CalibrationSet>& calib,
                                   ConfidenceLevel alpha) {
  test.validate();
  const ParamMap pars = resolve_params(spec, calib);
  const double p_lo = alpha.alpha() / 2.0;
  const double p_hi = 1.0 - p_lo;

  IntervalTable table;
  table.rows.reserve(test.size());
  for (double pred : test.preds) {
    IntervalRow row;
    row.pred = pred;
    switch (spec.dist) {
      case Distribution::normal: {
        // Symmetric about the center by construction.
        const double center = pred + pars.at("mean");
        const double half = -pars.at("sd") * normal_quantile(p_lo);
        row.bounds = {center - half, center + half};
        break;
      }
      case Distribution::logistic: {
        const double center = pred + pars.at("location");
        const double half = -pars.at("scale") * logit(p_lo);
        row.bounds = {center - half, center + half};
        break;
      }
      case Distribution::lognormal: {
        const double base = require_positive_pred(pred, spec.dist);
        const double z = -normal_quantile(p_lo);
        const double m = pars.at("meanlog");
        const double s = pars.at("sdlog");
        row.bounds = {base * std::exp(m - s * z), base * std::exp(m + s * z)};
        break;
      }
      default:
        row.bounds = make_interval(dist_quantile(spec.dist, p_lo, pars, pred, spec.custom_quantile),
                                   dist_quantile(spec.dist, p_hi, pars, pred, spec.custom_quantile));
        break;
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace pintervals

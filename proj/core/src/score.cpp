#include "pintervals/score.hpp"

#include <cmath>
#include <string>

#include "pintervals/error.hpp"

namespace pintervals {

std::string_view to_string(ScoreKind kind) noexcept {
  switch (kind) {
    case ScoreKind::absolute: return "absolute";
    case ScoreKind::raw: return "raw";
    case ScoreKind::relative: return "relative";
    case ScoreKind::zero_adjusted_relative: return "zero_adjusted_relative";
    case ScoreKind::heterogeneous: return "heterogeneous";
    case ScoreKind::custom: return "custom";
  }
  return "unknown";
}

ScoreKind parse_score_kind(std::string_view name) {
  if (name == "absolute") return ScoreKind::absolute;
  if (name == "raw") return ScoreKind::raw;
  if (name == "relative") return ScoreKind::relative;
  if (name == "zero_adjusted_relative" || name == "zero-adjusted-relative") {
    return ScoreKind::zero_adjusted_relative;
  }
  if (name == "heterogeneous") return ScoreKind::heterogeneous;
  if (name == "custom") return ScoreKind::custom;
  throw Error(Errc::invalid_argument, "unknown score function '" + std::string(name) + "'");
}

ScoreFunction ScoreFunction::of(ScoreKind kind) {
  if (kind == ScoreKind::custom) {
    throw Error(Errc::invalid_argument, "custom scores need a function; use ScoreFunction::custom");
  }
  ScoreFunction fn;
  fn.kind = kind;
  return fn;
}

ScoreFunction ScoreFunction::custom(Fn fn, Inverse inverse) {
  if (!fn) throw Error(Errc::invalid_argument, "custom score function is empty");
  ScoreFunction out;
  out.kind = ScoreKind::custom;
  out.custom_fn = std::move(fn);
  out.custom_inverse = std::move(inverse);
  return out;
}

namespace {

// Scale s(pred) such that symmetric scores are |truth - pred| / s(pred).
double scale_of(ScoreKind kind, double pred) {
  switch (kind) {
    case ScoreKind::absolute: return 1.0;
    case ScoreKind::relative: return std::max(std::abs(pred), kScoreEpsilon);
    case ScoreKind::zero_adjusted_relative: return std::abs(pred) + 1.0;
    case ScoreKind::heterogeneous: return std::sqrt(std::max(std::abs(pred), kScoreEpsilon));
    default: break;
  }
  throw Error(Errc::invalid_argument, "score kind has no scale");
}

}  // namespace

double score(const ScoreFunction& fn, double pred, double truth) {
  switch (fn.kind) {
    case ScoreKind::raw: return truth - pred;
    case ScoreKind::custom:
      if (!fn.custom_fn) throw Error(Errc::invalid_argument, "custom score function is empty");
      return fn.custom_fn(pred, truth);
    default: return std::abs(truth - pred) / scale_of(fn.kind, pred);
  }
}

std::vector<double> scores(const ScoreFunction& fn, std::span<const double> preds,
                           std::span<const double> truths) {
  if (preds.size() != truths.size()) {
    throw Error(Errc::length_mismatch, "preds and truths differ in length");
  }
  std::vector<double> out(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    out[i] = score(fn, preds[i], truths[i]);
    if (!std::isfinite(out[i])) {
      throw Error(Errc::invalid_score, "non-finite score at calibration index " + std::to_string(i));
    }
  }
  return out;
}

Interval invert_score(const ScoreFunction& fn, double pred, double q) {
  if (fn.kind == ScoreKind::custom) {
    if (!fn.custom_inverse) {
      throw Error(Errc::unsupported_inversion,
                  "custom scores cannot be inverted automatically; supply a custom inverse");
    }
    return fn.custom_inverse(pred, q);
  }
  if (fn.kind == ScoreKind::raw) {
    throw Error(Errc::invalid_argument, "raw scores are two-sided; use invert_raw");
  }
  if (std::isnan(q) || q < 0.0) {
    throw Error(Errc::invalid_argument, "score threshold must be non-negative");
  }
  const double half = q * scale_of(fn.kind, pred);
  return {pred - half, pred + half};
}

Interval invert_raw(double pred, double q_lo, double q_hi) {
  return make_interval(pred + q_lo, pred + q_hi);
}

}  // namespace pintervals

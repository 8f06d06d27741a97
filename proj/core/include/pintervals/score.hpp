#pragma once

#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "pintervals/types.hpp"

namespace pintervals {

/// Guard for scores that divide by |pred|.
inline constexpr double kScoreEpsilon = 1e-8;

enum class ScoreKind { absolute, raw, relative, zero_adjusted_relative, heterogeneous, custom };

std::string_view to_string(ScoreKind kind) noexcept;
/// Accepts the names printed by to_string plus "zero-adjusted-relative".
ScoreKind parse_score_kind(std::string_view name);

struct ScoreFunction {
  using Fn = std::function<double(double pred, double truth)>;
  /// Maps (pred, threshold) to the region {y : score(pred, y) <= threshold}.
  using Inverse = std::function<Interval(double pred, double threshold)>;

  ScoreKind kind = ScoreKind::absolute;
  Fn custom_fn;
  Inverse custom_inverse;

  static ScoreFunction of(ScoreKind kind);
  static ScoreFunction custom(Fn fn, Inverse inverse = {});

  /// Raw and custom scores are not of the form |y - pred| / scale(pred).
  [[nodiscard]] bool symmetric() const noexcept {
    return kind != ScoreKind::raw && kind != ScoreKind::custom;
  }
};

double score(const ScoreFunction& fn, double pred, double truth);

/// Vectorised score; a non-finite value throws invalid_score naming the index.
std::vector<double> scores(const ScoreFunction& fn, std::span<const double> preds,
                           std::span<const double> truths);

/// Region {y : score(pred, y) <= q} for the symmetric built-ins, or via the
/// custom inverse when one was supplied. Raw scores go through invert_raw.
Interval invert_score(const ScoreFunction& fn, double pred, double q);

/// [pred + q_lo, pred + q_hi] for signed (raw) residual thresholds.
Interval invert_raw(double pred, double q_lo, double q_hi);

}  // namespace pintervals

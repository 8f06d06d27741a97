#pragma once

#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "pintervals/quantile.hpp"
#include "pintervals/types.hpp"

namespace pintervals {

enum class DistanceType { mahalanobis, euclidean };
enum class Normalization { none, minmax, sd };
enum class Kernel { gaussian, cauchy, logistic, reciprocal_linear, custom };

std::string_view to_string(DistanceType) noexcept;
std::string_view to_string(Normalization) noexcept;
std::string_view to_string(Kernel) noexcept;
DistanceType parse_distance_type(std::string_view);
Normalization parse_normalization(std::string_view);
Kernel parse_kernel(std::string_view);

using CustomKernel = std::function<std::vector<double>(std::span<const double> distances)>;

/// Controls distance-weighted calibration (conformal) and resampling (bootstrap).
struct DistanceWeightConfig {
  bool enabled = false;
  DistanceType distance_type = DistanceType::mahalanobis;
  Normalization normalize = Normalization::none;
  Kernel kernel = Kernel::gaussian;
  CustomKernel custom_kernel;
  /// Added to the covariance diagonal before inversion.
  double ridge = 1e-8;
  TestPointMass test_mass = TestPointMass::max_weight;

  void validate() const;
};

/// n_pred x n_calib matrix of feature distances. Mahalanobis distances use
/// the sample covariance of `calib` plus ridge * I.
Matrix compute_distances(const Matrix& calib, const Matrix& pred, DistanceType type,
                         double ridge = 1e-8);

/// Global (whole-matrix) normalization. Degenerate spreads map to zeros.
Matrix normalize_distances(Matrix d, Normalization mode);

std::vector<double> kernel_weights(std::span<const double> d, Kernel kernel,
                                   const CustomKernel& custom = {});

/// Distances, normalization and kernel in one step: n_pred x n_calib weights.
Matrix distance_weights(const DistanceWeightConfig& cfg, const Matrix& calib, const Matrix& pred);

}  // namespace pintervals

#include "pintervals/distance.hpp"

#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "pintervals/error.hpp"

namespace pintervals {

std::string_view to_string(DistanceType t) noexcept {
  return t == DistanceType::mahalanobis ? "mahalanobis" : "euclidean";
}

std::string_view to_string(Normalization n) noexcept {
  switch (n) {
    case Normalization::none: return "none";
    case Normalization::minmax: return "minmax";
    case Normalization::sd: return "sd";
  }
  return "unknown";
}

std::string_view to_string(Kernel k) noexcept {
  switch (k) {
    case Kernel::gaussian: return "gaussian";
    case Kernel::cauchy: return "cauchy";
    case Kernel::logistic: return "logistic";
    case Kernel::reciprocal_linear: return "reciprocal_linear";
    case Kernel::custom: return "custom";
  }
  return "unknown";
}

DistanceType parse_distance_type(std::string_view s) {
  if (s == "mahalanobis") return DistanceType::mahalanobis;
  if (s == "euclidean") return DistanceType::euclidean;
  throw Error(Errc::invalid_argument, "unknown distance type '" + std::string(s) + "'");
}

Normalization parse_normalization(std::string_view s) {
  if (s == "none") return Normalization::none;
  if (s == "minmax") return Normalization::minmax;
  if (s == "sd") return Normalization::sd;
  throw Error(Errc::invalid_argument, "unknown distance normalization '" + std::string(s) + "'");
}

Kernel parse_kernel(std::string_view s) {
  if (s == "gaussian") return Kernel::gaussian;
  if (s == "cauchy") return Kernel::cauchy;
  if (s == "logistic") return Kernel::logistic;
  if (s == "reciprocal_linear" || s == "reciprocal-linear") return Kernel::reciprocal_linear;
  if (s == "custom") return Kernel::custom;
  throw Error(Errc::invalid_argument, "unknown kernel '" + std::string(s) + "'");
}

void DistanceWeightConfig::validate() const {
  if ((kernel == Kernel::custom) != static_cast<bool>(custom_kernel)) {
    throw Error(Errc::invalid_argument,
                "a custom kernel function is required exactly when kernel = custom");
  }
  if (!(ridge >= 0.0) || !std::isfinite(ridge)) {
    throw Error(Errc::invalid_argument, "ridge must be a finite non-negative number");
  }
}

namespace {

Matrix pairwise_euclidean(const Matrix& calib, const Matrix& pred) {
  Matrix d(pred.rows(), calib.rows());
  for (Eigen::Index j = 0; j < pred.rows(); ++j) {
    for (Eigen::Index i = 0; i < calib.rows(); ++i) {
      d(j, i) = (pred.row(j) - calib.row(i)).norm();
    }
  }
  return d;
}

}  // namespace

Matrix compute_distances(const Matrix& calib, const Matrix& pred, DistanceType type,
                         double ridge) {
  if (calib.cols() != pred.cols()) {
    throw Error(Errc::length_mismatch, "calibration and test features have different columns");
  }
  if (calib.cols() == 0) throw Error(Errc::invalid_argument, "distance features have no columns");
  if (type == DistanceType::euclidean) return pairwise_euclidean(calib, pred);

  if (calib.rows() < 2) {
    throw Error(Errc::invalid_argument, "mahalanobis distance needs at least 2 calibration rows");
  }
  const Eigen::RowVectorXd mean = calib.colwise().mean();
  const Matrix centered = calib.rowwise() - mean;
  Matrix cov = (centered.transpose() * centered) / static_cast<double>(calib.rows() - 1);
  cov.diagonal().array() += ridge;

  if (ridge == 0.0) {
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(cov, Eigen::EigenvaluesOnly);
    const double max_ev = eig.eigenvalues().maxCoeff();
    const double min_ev = eig.eigenvalues().minCoeff();
    if (!(max_ev > 0.0) || min_ev <= 1e-12 * max_ev) {
      throw Error(Errc::singular_covariance,
                  "feature covariance is singular; use a positive ridge or euclidean distance");
    }
  }

  // Whiten with the Cholesky factor: d(x, z) = ||L^{-1} (x - z)||.
  const Eigen::LLT<Matrix> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw Error(Errc::singular_covariance, "feature covariance is not positive definite");
  }
  const Matrix calib_w = llt.matrixL().solve(calib.transpose()).transpose();
  const Matrix pred_w = llt.matrixL().solve(pred.transpose()).transpose();
  return pairwise_euclidean(calib_w, pred_w);
}

Matrix normalize_distances(Matrix d, Normalization mode) {
  if (d.size() == 0 || mode == Normalization::none) return d;
  if (mode == Normalization::minmax) {
    const double lo = d.minCoeff();
    const double range = d.maxCoeff() - lo;
    if (!(range > 0.0)) return Matrix::Zero(d.rows(), d.cols());
    return (d.array() - lo) / range;
  }
  const double mean = d.mean();
  const double sd = std::sqrt((d.array() - mean).square().mean());
  if (!(sd > 0.0)) return Matrix::Zero(d.rows(), d.cols());
  return d / sd;
}

std::vector<double> kernel_weights(std::span<const double> d, Kernel kernel,
                                   const CustomKernel& custom) {
  std::vector<double> w(d.size());
  switch (kernel) {
    case Kernel::gaussian:
      for (std::size_t i = 0; i < d.size(); ++i) w[i] = std::exp(-d[i] * d[i]);
      break;
    case Kernel::cauchy:
      for (std::size_t i = 0; i < d.size(); ++i) w[i] = 1.0 / (1.0 + d[i] * d[i]);
      break;
    case Kernel::logistic:
      for (std::size_t i = 0; i < d.size(); ++i) w[i] = 1.0 / (1.0 + std::exp(d[i]));
      break;
    case Kernel::reciprocal_linear:
      for (std::size_t i = 0; i < d.size(); ++i) w[i] = 1.0 / (1.0 + d[i]);
      break;
    case Kernel::custom: {
      if (!custom) throw Error(Errc::invalid_argument, "custom kernel function is empty");
      w = custom(d);
      if (w.size() != d.size()) {
        throw Error(Errc::invalid_weights, "custom kernel returned " + std::to_string(w.size()) +
                                               " weights for " + std::to_string(d.size()) +
                                               " distances");
      }
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (!std::isfinite(w[i]) || w[i] < 0.0) {
          throw Error(Errc::invalid_weights,
                      "custom kernel weight at index " + std::to_string(i) +
                          " is negative or non-finite");
        }
      }
      break;
    }
  }
  return w;
}

Matrix distance_weights(const DistanceWeightConfig& cfg, const Matrix& calib, const Matrix& pred) {
  cfg.validate();
  const Matrix d =
      normalize_distances(compute_distances(calib, pred, cfg.distance_type, cfg.ridge),
                          cfg.normalize);
  Matrix w(d.rows(), d.cols());
  std::vector<double> row(static_cast<std::size_t>(d.cols()));
  for (Eigen::Index j = 0; j < d.rows(); ++j) {
    for (Eigen::Index i = 0; i < d.cols(); ++i) row[static_cast<std::size_t>(i)] = d(j, i);
    const auto wj = kernel_weights(row, cfg.kernel, cfg.custom_kernel);
    for (Eigen::Index i = 0; i < d.cols(); ++i) w(j, i) = wj[static_cast<std::size_t>(i)];
  }
  return w;
}

}  // namespace pintervals

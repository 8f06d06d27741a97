#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pintervals/conformal.hpp"

namespace pintervals {

/// Calibration set whose rows are partitioned by group label.
class GroupedCalibration {
 public:
  explicit GroupedCalibration(CalibrationSet base);

  [[nodiscard]] const CalibrationSet& base() const noexcept { return base_; }
  /// Row indices per label, each list in increasing order.
  [[nodiscard]] const std::map<std::string, std::vector<std::size_t>>& index() const noexcept {
    return index_;
  }
  [[nodiscard]] std::vector<std::string> labels() const;
  [[nodiscard]] std::size_t group_count() const noexcept { return index_.size(); }

 private:
  CalibrationSet base_;
  std::map<std::string, std::vector<std::size_t>> index_;
};

/// Mondrian (group-conditional) conformal intervals. Rows carry their group.
IntervalTable pinterval_mondrian(const PredictionSet& test, const GroupedCalibration& calib,
                                 ConfidenceLevel alpha, const ConformalOptions& options = {});

inline const std::vector<double> kDefaultEmbeddingLevels{0.5, 0.6, 0.7, 0.8, 0.9};

/// Per-group vector of score quantiles (k = ceil(q n) convention).
std::map<std::string, std::vector<double>> group_embeddings(
    const GroupedCalibration& calib, const ScoreFunction& score_fn,
    std::span<const double> levels = kDefaultEmbeddingLevels);

struct KMeansResult {
  /// 0-based cluster per row of the input.
  std::vector<int> assignment;
  Matrix centroids;
  double inertia = 0.0;
  int iterations = 0;
};

/// Lloyd's algorithm with k-means++ seeding. `restarts` independent seedings
/// are tried and the lowest-inertia run kept; deterministic given `seed`.
KMeansResult kmeans(const Matrix& points, int clusters, std::uint64_t seed, int max_iter = 100,
                    int restarts = 10);

/// Calinski-Harabasz index [B / (M - 1)] / [W / (n - M)]; +inf when W = 0.
double calinski_harabasz(const Matrix& points, std::span<const int> assignment);

enum class ChDirection { maximize, minimize };

struct CcpOptions {
  ScoreFunction score;
  DistanceWeightConfig weighting;
  /// Fixed cluster count; when unset the count is chosen by the CH index.
  std::optional<int> n_clusters;
  bool optimize_n_clusters = true;
  int max_n_clusters = 5;
  /// Share of each group's rows used for clustering; 1.0 reuses the full
  /// calibration set for both clustering and quantiles.
  double clustering_fraction = 0.5;
  std::uint64_t seed = 0;
  std::vector<double> embedding_levels = kDefaultEmbeddingLevels;
  ChDirection ch_direction = ChDirection::maximize;
  int kmeans_max_iter = 100;
};

struct ClusterAssignment {
  /// Group label -> cluster id in 1..m.
  std::map<std::string, int> mapping;
  int m = 1;
  std::map<std::string, std::vector<double>> embeddings;
  /// (M, CH index) for every candidate evaluated during optimisation.
  std::vector<std::pair<int, double>> ch_scores;
};

struct CcpResult {
  IntervalTable table;
  ClusterAssignment clusters;
};

/// Clustered conformal prediction. Rows carry both group and cluster id.
CcpResult pinterval_ccp_detailed(const PredictionSet& test, const GroupedCalibration& calib,
                                 ConfidenceLevel alpha, const CcpOptions& options = {});

IntervalTable pinterval_ccp(const PredictionSet& test, const GroupedCalibration& calib,
                            ConfidenceLevel alpha, const CcpOptions& options = {});

}  // namespace pintervals

#include "pintervals/grouped.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "calibrate.hpp"
#include "pintervals/error.hpp"
#include "pintervals/quantile.hpp"
#include "pintervals/rng.hpp"

namespace pintervals {

GroupedCalibration::GroupedCalibration(CalibrationSet base) : base_(std::move(base)) {
  base_.validate();
  if (!base_.groups) {
    throw Error(Errc::invalid_argument, "grouped calibration requires group labels");
  }
  for (std::size_t i = 0; i < base_.size(); ++i) index_[(*base_.groups)[i]].push_back(i);
}

std::vector<std::string> GroupedCalibration::labels() const {
  std::vector<std::string> out;
  out.reserve(index_.size());
  for (const auto& [label, rows] : index_) out.push_back(label);
  return out;
}

namespace {

const std::vector<std::string>& test_groups(const PredictionSet& test) {
  if (!test.groups) throw Error(Errc::invalid_argument, "test points need group labels");
  return *test.groups;
}

std::size_t position_of(const std::vector<std::string>& labels, const std::string& label) {
  const auto it = std::lower_bound(labels.begin(), labels.end(), label);
  if (it == labels.end() || *it != label) {
    throw Error(Errc::unknown_group,
                "test group '" + label + "' does not occur in the calibration set");
  }
  return static_cast<std::size_t>(it - labels.begin());
}

double squared_distance(const Matrix& a, Eigen::Index i, const Matrix& b, Eigen::Index j) {
  return (a.row(i) - b.row(j)).squaredNorm();
}

struct LloydRun {
  std::vector<int> assignment;
  Matrix centroids;
  double inertia = 0.0;
  int iterations = 0;
};

std::vector<int> assign_nearest(const Matrix& x, const Matrix& c) {
  std::vector<int> out(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (Eigen::Index k = 0; k < c.rows(); ++k) {
      const double d = squared_distance(x, i, c, k);
      if (d < best) {
        best = d;
        arg = static_cast<int>(k);
      }
    }
    out[static_cast<std::size_t>(i)] = arg;
  }
  return out;
}

Matrix seed_plus_plus(const Matrix& x, int m, Engine& eng) {
  const auto n = static_cast<std::size_t>(x.rows());
  Matrix c(m, x.cols());
  std::vector<bool> chosen(n, false);
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());

  std::size_t pick = uniform_index(eng, n);
  for (int k = 0; k < m; ++k) {
    if (k > 0) {
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) total += d2[i];
      if (total > 0.0) {
        const double u = uniform01(eng) * total;
        double cum = 0.0;
        pick = n;
        for (std::size_t i = 0; i < n; ++i) {
          cum += d2[i];
          if (d2[i] > 0.0 && u < cum) {
            pick = i;
            break;
          }
        }
        if (pick == n) {  // rounding at the tail
          for (std::size_t i = n; i-- > 0;) {
            if (d2[i] > 0.0) {
              pick = i;
              break;
            }
          }
        }
      } else {
        pick = static_cast<std::size_t>(
            std::find(chosen.begin(), chosen.end(), false) - chosen.begin());
      }
    }
    chosen[pick] = true;
    c.row(k) = x.row(static_cast<Eigen::Index>(pick));
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(x, static_cast<Eigen::Index>(i), c, k));
    }
  }
  return c;
}

void update_centroids(const Matrix& x, std::vector<int>& assign, Matrix& c) {
  const int m = static_cast<int>(c.rows());
  std::vector<int> counts(static_cast<std::size_t>(m), 0);
  c.setZero();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const int k = assign[static_cast<std::size_t>(i)];
    c.row(k) += x.row(i);
    ++counts[static_cast<std::size_t>(k)];
  }
  for (int k = 0; k < m; ++k) {
    if (counts[static_cast<std::size_t>(k)] > 0) c.row(k) /= counts[static_cast<std::size_t>(k)];
  }
  // Empty clusters take the point farthest from its centroid among clusters
  // that can spare one.
  for (int k = 0; k < m; ++k) {
    if (counts[static_cast<std::size_t>(k)] > 0) continue;
    double worst = -1.0;
    Eigen::Index arg = -1;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const int owner = assign[static_cast<std::size_t>(i)];
      if (counts[static_cast<std::size_t>(owner)] < 2) continue;
      const double d = squared_distance(x, i, c, owner);
      if (d > worst) {
        worst = d;
        arg = i;
      }
    }
    if (arg < 0) break;
    const int owner = assign[static_cast<std::size_t>(arg)];
    --counts[static_cast<std::size_t>(owner)];
    assign[static_cast<std::size_t>(arg)] = k;
    counts[static_cast<std::size_t>(k)] = 1;
    c.row(k) = x.row(arg);
    c.row(owner).setZero();
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      if (assign[static_cast<std::size_t>(i)] == owner) c.row(owner) += x.row(i);
    }
    c.row(owner) /= counts[static_cast<std::size_t>(owner)];
  }
}

double inertia_of(const Matrix& x, const std::vector<int>& assign, const Matrix& c) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    total += squared_distance(x, i, c, assign[static_cast<std::size_t>(i)]);
  }
  return total;
}

LloydRun lloyd(const Matrix& x, int m, Engine& eng, int max_iter) {
  LloydRun run;
  run.centroids = seed_plus_plus(x, m, eng);
  run.assignment = assign_nearest(x, run.centroids);
  for (run.iterations = 1; run.iterations <= max_iter; ++run.iterations) {
    update_centroids(x, run.assignment, run.centroids);
    auto next = assign_nearest(x, run.centroids);
    if (next == run.assignment) break;
    run.assignment = std::move(next);
  }
  run.iterations = std::min(run.iterations, max_iter);
  run.inertia = inertia_of(x, run.assignment, run.centroids);
  return run;
}

}  // namespace

IntervalTable pinterval_mondrian(const PredictionSet& test, const GroupedCalibration& calib,
                                 ConfidenceLevel alpha, const ConformalOptions& options) {
  test.validate();
  const auto& groups = test_groups(test);
  const auto labels = calib.labels();

  detail::Partition part;
  part.kind = "group";
  part.names = labels;
  for (const auto& label : labels) part.pools.push_back(calib.index().at(label));
  part.test_pool.reserve(test.size());
  for (const auto& g : groups) part.test_pool.push_back(position_of(labels, g));

  auto table = detail::calibrate_partitioned(test, calib.base(), alpha, options, part);
  for (std::size_t j = 0; j < test.size(); ++j) table.rows[j].group = groups[j];
  return table;
}

std::map<std::string, std::vector<double>> group_embeddings(const GroupedCalibration& calib,
                                                            const ScoreFunction& score_fn,
                                                            std::span<const double> levels) {
  if (levels.empty()) throw Error(Errc::invalid_argument, "embedding needs at least one level");
  const auto& base = calib.base();
  const auto all = scores(score_fn, base.preds, base.truths);
  std::map<std::string, std::vector<double>> out;
  for (const auto& [label, rows] : calib.index()) {
    std::vector<double> s;
    s.reserve(rows.size());
    for (auto r : rows) s.push_back(all[r]);
    auto& e = out[label];
    for (double q : levels) e.push_back(empirical_quantile(s, q));
  }
  return out;
}

KMeansResult kmeans(const Matrix& points, int clusters, std::uint64_t seed, int max_iter,
                    int restarts) {
  if (clusters < 1) {
    throw Error(Errc::invalid_cluster_count, "cluster count must be at least 1");
  }
  if (clusters > points.rows()) {
    throw Error(Errc::invalid_cluster_count, "cluster count " + std::to_string(clusters) +
                                                 " exceeds the number of points " +
                                                 std::to_string(points.rows()));
  }
  if (max_iter < 1 || restarts < 1) {
    throw Error(Errc::invalid_argument, "max_iter and restarts must be positive");
  }
  std::optional<LloydRun> best;
  for (int r = 0; r < restarts; ++r) {
    auto eng = make_engine(seed, static_cast<std::uint64_t>(r));
    auto run = lloyd(points, clusters, eng, max_iter);
    if (!best || run.inertia < best->inertia) best = std::move(run);
  }
  return {std::move(best->assignment), std::move(best->centroids), best->inertia,
          best->iterations};
}

double calinski_harabasz(const Matrix& points, std::span<const int> assignment) {
  const auto n = static_cast<std::size_t>(points.rows());
  if (assignment.size() != n) {
    throw Error(Errc::length_mismatch, "assignment must have one label per point");
  }
  std::map<int, std::vector<Eigen::Index>> members;
  for (std::size_t i = 0; i < n; ++i) members[assignment[i]].push_back(static_cast<Eigen::Index>(i));
  const auto m = members.size();
  if (m < 2 || m >= n) {
    throw Error(Errc::undefined_index, "Calinski-Harabasz index needs 2 <= M < n, got M = " +
                                           std::to_string(m) + ", n = " + std::to_string(n));
  }
  const Eigen::RowVectorXd grand = points.colwise().mean();
  double between = 0.0;
  double within = 0.0;
  for (const auto& [label, rows] : members) {
    Eigen::RowVectorXd c = Eigen::RowVectorXd::Zero(points.cols());
    for (auto i : rows) c += points.row(i);
    c /= static_cast<double>(rows.size());
    between += static_cast<double>(rows.size()) * (c - grand).squaredNorm();
    for (auto i : rows) within += (points.row(i) - c).squaredNorm();
  }
  if (within == 0.0) return kInf;
  return (between / static_cast<double>(m - 1)) / (within / static_cast<double>(n - m));
}

namespace {

struct CalibrationSplit {
  std::map<std::string, std::vector<std::size_t>> clustering;
  std::map<std::string, std::vector<std::size_t>> quantile;
};

// Stratified per group: every group with >= 2 rows lands in both partitions.
CalibrationSplit split_calibration(const GroupedCalibration& calib, double fraction,
                                   std::uint64_t seed) {
  CalibrationSplit split;
  if (fraction >= 1.0) {
    split.clustering = calib.index();
    split.quantile = calib.index();
    return split;
  }
  std::uint64_t stream = 0;
  for (const auto& [label, rows] : calib.index()) {
    auto eng = make_engine(seed, stream++);
    std::vector<std::size_t> shuffled = rows;
    for (std::size_t i = shuffled.size(); i > 1; --i) {
      std::swap(shuffled[i - 1], shuffled[uniform_index(eng, i)]);
    }
    const auto n = shuffled.size();
    std::size_t n_clust = 1;
    if (n >= 2) {
      const auto want = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
      n_clust = std::clamp<std::size_t>(want, 1, n - 1);
    }
    std::vector<std::size_t> c(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(n_clust));
    std::vector<std::size_t> q(shuffled.begin() + static_cast<std::ptrdiff_t>(n_clust), shuffled.end());
    std::sort(c.begin(), c.end());
    std::sort(q.begin(), q.end());
    split.clustering[label] = std::move(c);
    split.quantile[label] = std::move(q);
  }
  return split;
}

// Map possibly sparse k-means labels onto 1..m in order of first appearance.
std::map<std::string, int> compact_labels(const std::vector<std::string>& labels,
                                          const std::vector<int>& raw) {
  std::map<int, int> remap;
  std::map<std::string, int> out;
  for (std::size_t g = 0; g < labels.size(); ++g) {
    auto [it, inserted] = remap.try_emplace(raw[g], static_cast<int>(remap.size()) + 1);
    out[labels[g]] = it->second;
  }
  return out;
}

int distinct(const std::vector<int>& v) { return static_cast<int>(std::set<int>(v.begin(), v.end()).size()); }

}  // namespace

CcpResult pinterval_ccp_detailed(const PredictionSet& test, const GroupedCalibration& calib,
                                 ConfidenceLevel alpha, const CcpOptions& options) {
  test.validate();
  detail::check_invertible(options.score);
  const auto& groups = test_groups(test);
  const auto labels = calib.labels();
  for (const auto& g : groups) position_of(labels, g);
  if (!(options.clustering_fraction > 0.0 && options.clustering_fraction <= 1.0)) {
    throw Error(Errc::invalid_argument, "clustering_fraction must lie in (0, 1]");
  }
  const int k_groups = static_cast<int>(labels.size());

  CcpResult result;
  auto& table = result.table;
  auto& clusters = result.clusters;

  // An explicit single cluster needs no clustering, so no rows are held out.
  const bool trivial = options.n_clusters && *options.n_clusters == 1;
  const auto split = split_calibration(calib, trivial ? 1.0 : options.clustering_fraction,
                                       derive_seed(options.seed, 0x53504c4954ULL));

  // Embed each group from its clustering rows.
  const auto& base = calib.base();
  const auto all_scores = scores(options.score, base.preds, base.truths);
  Matrix emb(k_groups, static_cast<Eigen::Index>(options.embedding_levels.size()));
  for (int g = 0; g < k_groups; ++g) {
    std::vector<double> s;
    for (auto r : split.clustering.at(labels[static_cast<std::size_t>(g)])) s.push_back(all_scores[r]);
    auto& e = clusters.embeddings[labels[static_cast<std::size_t>(g)]];
    for (std::size_t l = 0; l < options.embedding_levels.size(); ++l) {
      e.push_back(empirical_quantile(s, options.embedding_levels[l]));
      emb(g, static_cast<Eigen::Index>(l)) = e.back();
    }
  }

  int m = 0;
  if (options.n_clusters) {
    m = *options.n_clusters;
    if (m < 1 || m > k_groups) {
      throw Error(Errc::invalid_cluster_count, "n_clusters must lie in [1, " +
                                                   std::to_string(k_groups) + "], got " +
                                                   std::to_string(m));
    }
  } else if (options.optimize_n_clusters) {
    if (options.max_n_clusters < 2) {
      throw Error(Errc::invalid_cluster_count, "max_n_clusters must be at least 2");
    }
    int upper = options.max_n_clusters;
    if (upper >= k_groups) {
      upper = k_groups - 1;
      table.warn("max-clusters-clamped", "max_n_clusters " +
                                             std::to_string(options.max_n_clusters) +
                                             " clamped to " + std::to_string(upper) + " for " +
                                             std::to_string(k_groups) + " groups");
    }
    std::optional<std::pair<int, double>> best;
    for (int cand = 2; cand <= upper; ++cand) {
      const auto km = kmeans(emb, cand, derive_seed(options.seed, static_cast<std::uint64_t>(cand)),
                             options.kmeans_max_iter);
      if (distinct(km.assignment) != cand) continue;
      const double ch = calinski_harabasz(emb, km.assignment);
      clusters.ch_scores.emplace_back(cand, ch);
      const bool better = !best || (options.ch_direction == ChDirection::maximize
                                        ? ch > best->second
                                        : ch < best->second);
      if (better) best = std::make_pair(cand, ch);
    }
    if (best) {
      m = best->first;
    } else {
      m = k_groups;
      table.warn("cluster-selection-fallback",
                 "no candidate cluster count could be scored; using one cluster per group");
    }
  } else {
    throw Error(Errc::invalid_argument, "set n_clusters or enable optimize_n_clusters");
  }

  std::vector<int> raw(static_cast<std::size_t>(k_groups), 0);
  if (m == k_groups) {
    std::iota(raw.begin(), raw.end(), 0);
  } else if (m > 1) {
    raw = kmeans(emb, m, derive_seed(options.seed, static_cast<std::uint64_t>(m)),
                 options.kmeans_max_iter)
              .assignment;
  }
  clusters.mapping = compact_labels(labels, raw);
  clusters.m = distinct(raw);

  // Quantile pools per cluster, drawn from the quantile partition.
  detail::Partition part;
  part.kind = "cluster";
  std::vector<std::vector<std::size_t>> pools(static_cast<std::size_t>(clusters.m));
  std::vector<std::size_t> pooled;
  for (const auto& label : labels) {
    const auto& q = split.quantile.at(label);
    auto& pool = pools[static_cast<std::size_t>(clusters.mapping.at(label) - 1)];
    pool.insert(pool.end(), q.begin(), q.end());
    pooled.insert(pooled.end(), q.begin(), q.end());
  }
  std::vector<std::size_t> pool_of_cluster(pools.size());
  std::optional<std::size_t> pooled_index;
  for (std::size_t c = 0; c < pools.size(); ++c) {
    std::sort(pools[c].begin(), pools[c].end());
    if (pools[c].size() < 2) {
      if (!pooled_index) {
        std::sort(pooled.begin(), pooled.end());
        pooled_index = part.pools.size();
        part.pools.push_back(pooled);
        part.names.push_back("pooled");
      }
      table.warn("cluster-fallback-pooled",
                 "cluster " + std::to_string(c + 1) + " has " + std::to_string(pools[c].size()) +
                     " quantile-partition points; using the pooled quantile");
      pool_of_cluster[c] = *pooled_index;
    } else {
      pool_of_cluster[c] = part.pools.size();
      part.pools.push_back(std::move(pools[c]));
      part.names.push_back(std::to_string(c + 1));
    }
  }
  for (const auto& g : groups) {
    part.test_pool.push_back(pool_of_cluster[static_cast<std::size_t>(clusters.mapping.at(g) - 1)]);
  }

  ConformalOptions conf{options.score, options.weighting};
  auto calibrated = detail::calibrate_partitioned(test, base, alpha, conf, part);
  calibrated.warnings.insert(calibrated.warnings.begin(), table.warnings.begin(),
                             table.warnings.end());
  table = std::move(calibrated);
  for (std::size_t j = 0; j < test.size(); ++j) {
    table.rows[j].group = groups[j];
    table.rows[j].cluster = clusters.mapping.at(groups[j]);
  }
  return result;
}

IntervalTable pinterval_ccp(const PredictionSet& test, const GroupedCalibration& calib,
                            ConfidenceLevel alpha, const CcpOptions& options) {
  return pinterval_ccp_detailed(test, calib, alpha, options).table;
}

}  // namespace pintervals

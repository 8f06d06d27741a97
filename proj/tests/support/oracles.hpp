#pragma once

// Independent reference implementations used only by tests. None of these
// share code with the library beyond the public types.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include <Eigen/Core>

namespace pintervals::oracle {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Smallest score s with #{i : s_i <= s} / (n + 1) >= 1 - alpha, with
/// alpha = alpha_percent / 100 so the comparison is exact in integers.
inline double rank_quantile(std::vector<double> scores, int alpha_percent) {
  std::sort(scores.begin(), scores.end());
  const long n = static_cast<long>(scores.size());
  for (double s : scores) {
    long count = 0;
    for (double t : scores) count += t <= s ? 1 : 0;
    if (count * 100 >= (100 - alpha_percent) * (n + 1)) return s;
  }
  return kInf;
}

/// Calinski-Harabasz from pairwise squared distances: the within-cluster SSE
/// of a cluster equals sum_{i<j} |x_i - x_j|^2 / n_m, and the total SSE is the
/// same identity over all points, so B = T - W needs no centroids.
inline double calinski_harabasz(const Eigen::MatrixXd& x, const std::vector<int>& labels) {
  const auto n = static_cast<long>(x.rows());
  int m = 0;
  for (int l : labels) m = std::max(m, l + 1);
  auto sse = [&](auto&& in) {
    double acc = 0.0;
    long count = 0;
    for (long i = 0; i < n; ++i) {
      if (!in(i)) continue;
      ++count;
      for (long j = i + 1; j < n; ++j) {
        if (in(j)) acc += (x.row(i) - x.row(j)).squaredNorm();
      }
    }
    return count > 0 ? acc / static_cast<double>(count) : 0.0;
  };
  const double total = sse([](long) { return true; });
  double within = 0.0;
  for (int c = 0; c < m; ++c) within += sse([&](long i) { return labels[static_cast<std::size_t>(i)] == c; });
  const double between = total - within;
  if (within == 0.0) return kInf;
  return (between / (m - 1)) / (within / static_cast<double>(n - m));
}

/// Normal CDF from std::erfc; the quantile is plain bisection on it.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }


inline double normal_quantile(double p) {
  double lo = -40.0;
  double hi = 40.0;
  for (int i = 0; i < 300; ++i) {
    const double mid = 0.5 * (lo + hi);
    (normal_cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Poisson CDF by direct pmf summation.
inline double poisson_cdf(long k, double lambda) {
  double term = std::exp(-lambda);
  double acc = term;
  for (long i = 1; i <= k; ++i) {
    term *= lambda / static_cast<double>(i);
    acc += term;
  }
  return acc;
}

inline long poisson_quantile(double p, double lambda) {
  long k = 0;
  while (poisson_cdf(k, lambda) < p) ++k;
  return k;
}

}  // namespace pintervals::oracle

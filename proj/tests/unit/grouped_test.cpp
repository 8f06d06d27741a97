#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "generators.hpp"
#include "oracles.hpp"
#include "pintervals/conformal.hpp"
#include "pintervals/error.hpp"
#include "pintervals/grouped.hpp"
#include "pintervals/rng.hpp"

namespace pi = pintervals;

namespace {

pi::Matrix points_1d(std::initializer_list<double> v) {
  pi::Matrix m(static_cast<Eigen::Index>(v.size()), 1);
  Eigen::Index i = 0;
  for (double x : v) m(i++, 0) = x;
  return m;
}

// Six groups of 20: three with noise sd 0.5, three with sd 4.
pi::testgen::Sample six_groups(pi::Engine& eng) {
  pi::testgen::Sample s;
  for (int g = 0; g < 6; ++g) {
    for (int i = 0; i < 20; ++i) {
      const double p = pi::standard_normal(eng);
      s.preds.push_back(p);
      s.truths.push_back(p + (g < 3 ? 0.5 : 4.0) * pi::standard_normal(eng));
      s.groups.push_back("g" + std::to_string(g));
    }
  }
  return s;
}

void expect_rows_equal(const pi::IntervalTable& a, const pi::IntervalTable& b) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.rows[i].pred, b.rows[i].pred);
    EXPECT_EQ(a.rows[i].bounds, b.rows[i].bounds) << "row " << i;
  }
}

}  // namespace

TEST(Mondrian, DisjointGroupQuantiles) {
  pi::CalibrationSet c;
  std::vector<std::string> g;
  for (int i = 1; i <= 10; ++i) {
    c.preds.push_back(0);
    c.truths.push_back(i / 10.0);
    g.push_back("lo");
    c.preds.push_back(0);
    c.truths.push_back(10.0 * i);
    g.push_back("hi");
  }
  c.groups = g;
  pi::PredictionSet t;
  t.preds = {0, 0};
  t.groups = std::vector<std::string>{"lo", "hi"};
  const auto table = pi::pinterval_mondrian(t, pi::GroupedCalibration(c), pi::ConfidenceLevel(0.1));
  EXPECT_EQ(table.rows[0].bounds, (pi::Interval{-1.0, 1.0}));
  EXPECT_EQ(table.rows[1].bounds, (pi::Interval{-100.0, 100.0}));
  EXPECT_EQ(table.rows[0].group, "lo");
  EXPECT_EQ(table.rows[1].group, "hi");
}

TEST(Mondrian, SingleGroupEqualsConformal) {
  auto eng = pi::make_engine(1, 0);
  auto s = pi::testgen::gaussian(60, 1.0, eng);
  s.groups.assign(60, "only");
  const auto c = pi::testgen::calibration(s, true);
  auto t = pi::testgen::prediction(s, true);
  expect_rows_equal(pi::pinterval_mondrian(t, pi::GroupedCalibration(c), pi::ConfidenceLevel(0.1)),
                    pi::pinterval_conformal(t, c, pi::ConfidenceLevel(0.1)));
}

TEST(Mondrian, UnknownGroupAndSmallGroupWarning) {
  pi::CalibrationSet c;
  c.preds = {0, 0, 0};
  c.truths = {1, 2, 3};
  c.groups = std::vector<std::string>{"a", "a", "b"};
  pi::PredictionSet t;
  t.preds = {0};
  t.groups = std::vector<std::string>{"zz"};
  try {
    pi::pinterval_mondrian(t, pi::GroupedCalibration(c), pi::ConfidenceLevel(0.1));
    FAIL();
  } catch (const pi::Error& e) {
    EXPECT_EQ(e.code(), pi::Errc::unknown_group);
    EXPECT_NE(std::string(e.what()).find("zz"), std::string::npos);
  }
  t.groups = std::vector<std::string>{"b"};
  const auto table = pi::pinterval_mondrian(t, pi::GroupedCalibration(c), pi::ConfidenceLevel(0.1));
  EXPECT_EQ(table.rows[0].bounds, (pi::Interval{-pi::kInf, pi::kInf}));
  ASSERT_FALSE(table.warnings.empty());
  EXPECT_NE(table.warnings[0].message.find("b"), std::string::npos);
}

TEST(Embeddings, Examples) {
  pi::CalibrationSet c;
  std::vector<std::string> g;
  for (int i = 1; i <= 100; ++i) {
    c.preds.push_back(0);
    c.truths.push_back(i);
    g.push_back("big");
  }
  c.preds.push_back(0);
  c.truths.push_back(7);
  g.push_back("one");
  c.groups = g;
  const pi::GroupedCalibration gc(c);
  const auto abs = pi::ScoreFunction::of(pi::ScoreKind::absolute);
  const std::vector<double> half{0.5};
  const auto e = pi::group_embeddings(gc, abs, half);
  EXPECT_EQ(e.at("big"), std::vector<double>{50});
  const auto full = pi::group_embeddings(gc, abs);
  EXPECT_EQ(full.at("one"), std::vector<double>(5, 7.0));
}

TEST(KMeans, SeparatesTwoPairs) {
  const auto pts = points_1d({0, 0.1, 10, 10.1});
  const auto r = pi::kmeans(pts, 2, 17);
  EXPECT_EQ(r.assignment[0], r.assignment[1]);
  EXPECT_EQ(r.assignment[2], r.assignment[3]);
  EXPECT_NE(r.assignment[0], r.assignment[2]);
  EXPECT_NEAR(r.inertia, 0.01, 1e-12);
}

TEST(KMeans, DegenerateCounts) {
  const auto pts = points_1d({0, 1, 2, 3, 4});
  const auto one = pi::kmeans(pts, 1, 3);
  EXPECT_EQ(std::set<int>(one.assignment.begin(), one.assignment.end()).size(), 1u);
  const auto all = pi::kmeans(pts, 5, 3);
  EXPECT_EQ(std::set<int>(all.assignment.begin(), all.assignment.end()).size(), 5u);
  try {
    pi::kmeans(pts, 0, 3);
    FAIL();
  } catch (const pi::Error& e) {
    EXPECT_EQ(e.code(), pi::Errc::invalid_cluster_count);
  }
  EXPECT_THROW(pi::kmeans(pts, 6, 3), pi::Error);
}

TEST(KMeansProperty, DeterministicLloydFixedPoint) {
  auto eng = pi::make_engine(8, 0);
  for (int rep = 0; rep < 50; ++rep) {
    pi::Matrix pts(12, 2);
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
      for (Eigen::Index j = 0; j < 2; ++j) pts(i, j) = pi::uniform01(eng);
    }
    const auto a = pi::kmeans(pts, 3, 99);
    const auto b = pi::kmeans(pts, 3, 99);
    EXPECT_EQ(a.assignment, b.assignment);
    EXPECT_EQ(a.inertia, b.inertia);
    // Centroids are cluster means and every point sits with its nearest centroid.
    double inertia = 0.0;
    for (Eigen::Index k = 0; k < 3; ++k) {
      Eigen::RowVector2d mean = Eigen::RowVector2d::Zero();
      int n = 0;
      for (Eigen::Index i = 0; i < pts.rows(); ++i) {
        if (a.assignment[static_cast<std::size_t>(i)] == k) {
          mean += pts.row(i);
          ++n;
        }
      }
      ASSERT_GT(n, 0);
      EXPECT_TRUE((mean / n).isApprox(a.centroids.row(k), 1e-12));
    }
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
      const int own = a.assignment[static_cast<std::size_t>(i)];
      const double d_own = (pts.row(i) - a.centroids.row(own)).squaredNorm();
      inertia += d_own;
      for (Eigen::Index k = 0; k < 3; ++k) {
        EXPECT_LE(d_own, (pts.row(i) - a.centroids.row(k)).squaredNorm() + 1e-15);
      }
    }
    EXPECT_NEAR(a.inertia, inertia, 1e-12);
  }
}

TEST(KMeansProperty, GlobalOptimumOnSeparatedClusters) {
  // Three tight blobs far apart: the brute-force optimal 3-partition is the blobs.
  auto eng = pi::make_engine(8, 1);
  for (int rep = 0; rep < 20; ++rep) {
    pi::Matrix pts(9, 2);
    for (Eigen::Index i = 0; i < 9; ++i) {
      pts(i, 0) = 10.0 * static_cast<double>(i / 3) + 0.1 * pi::uniform01(eng);
      pts(i, 1) = 0.1 * pi::uniform01(eng);
    }
    const auto r = pi::kmeans(pts, 3, static_cast<std::uint64_t>(rep));
    for (int i = 0; i < 9; ++i) {
      EXPECT_EQ(r.assignment[static_cast<std::size_t>(i)], r.assignment[static_cast<std::size_t>(3 * (i / 3))]);
    }
    EXPECT_EQ(std::set<int>(r.assignment.begin(), r.assignment.end()).size(), 3u);
  }
}

TEST(CalinskiHarabasz, Examples) {
  const auto pts = points_1d({0, 0.1, 10, 10.1});
  const std::vector<int> sep{0, 0, 1, 1};
  EXPECT_NEAR(pi::calinski_harabasz(pts, sep), 20000.0, 1e-6);
  const std::vector<int> mixed{0, 1, 0, 1};
  EXPECT_LT(pi::calinski_harabasz(pts, mixed), pi::calinski_harabasz(pts, sep));
  const auto twins = points_1d({1, 1, 4, 4});
  EXPECT_EQ(pi::calinski_harabasz(twins, sep), pi::kInf);
  const std::vector<int> single{0, 0, 0, 0};
  const std::vector<int> each{0, 1, 2, 3};
  for (const auto* a : {&single, &each}) {
    try {
      pi::calinski_harabasz(pts, *a);
      FAIL();
    } catch (const pi::Error& e) {
      EXPECT_EQ(e.code(), pi::Errc::undefined_index);
    }
  }
}

TEST(CalinskiHarabaszProperty, MatchesPairwiseOracle) {
  auto eng = pi::make_engine(12, 0);
  for (int n = 3; n <= 8; ++n) {
    pi::Matrix pts(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < 2; ++j) pts(i, j) = 10.0 * pi::uniform01(eng);
    }
    // Every labelling into 2 or 3 clusters that uses each label.
    for (int m = 2; m <= std::min(3, n - 1); ++m) {
      std::vector<int> labels(static_cast<std::size_t>(n), 0);
      while (true) {
        std::set<int> used(labels.begin(), labels.end());
        if (static_cast<int>(used.size()) == m) {
          const double got = pi::calinski_harabasz(pts, labels);
          const double want = pi::oracle::calinski_harabasz(pts, labels);
          if (std::isinf(want)) {
            EXPECT_TRUE(std::isinf(got));
          } else {
            EXPECT_NEAR(got, want, 1e-12 * std::abs(want));
          }
        }
        std::size_t i = 0;
        while (i < labels.size() && ++labels[i] == m) labels[i++] = 0;
        if (i == labels.size()) break;
      }
    }
  }
}

TEST(Ccp, SingleClusterEqualsConformal) {
  auto eng = pi::make_engine(2, 0);
  const auto s = six_groups(eng);
  const auto c = pi::testgen::calibration(s, true);
  const auto t = pi::testgen::prediction(s, true);
  pi::CcpOptions opt;
  opt.n_clusters = 1;
  expect_rows_equal(pi::pinterval_ccp(t, pi::GroupedCalibration(c), pi::ConfidenceLevel(0.1), opt),
                    pi::pinterval_conformal(t, c, pi::ConfidenceLevel(0.1)));
}

TEST(Ccp, OneClusterPerGroupEqualsMondrian) {
  auto eng = pi::make_engine(2, 1);
  const auto s = six_groups(eng);
  const auto c = pi::testgen::calibration(s, true);
  const auto t = pi::testgen::prediction(s, true);
  pi::CcpOptions opt;
  opt.n_clusters = 6;
  opt.clustering_fraction = 1.0;
  const pi::GroupedCalibration gc(c);
  const auto res = pi::pinterval_ccp_detailed(t, gc, pi::ConfidenceLevel(0.1), opt);
  expect_rows_equal(res.table, pi::pinterval_mondrian(t, gc, pi::ConfidenceLevel(0.1)));
  EXPECT_EQ(res.clusters.m, 6);
  for (std::size_t i = 0; i < res.table.size(); ++i) {
    EXPECT_EQ(res.table.rows[i].group, s.groups[i]);
    EXPECT_EQ(res.table.rows[i].cluster, res.clusters.mapping.at(s.groups[i]));
  }
}

TEST(Ccp, SelectionFollowsChDirection) {
  // With six embeddings, maximizing CH favours M = K - 1 (merging two nearly
  // identical quiet groups makes W tiny); minimizing recovers the two families.
  int picked_two = 0;
  for (int rep = 0; rep < 20; ++rep) {
    auto eng = pi::make_engine(40 + rep, 0);
    const auto s = six_groups(eng);
    const pi::GroupedCalibration gc(pi::testgen::calibration(s, true));
    pi::CcpOptions opt;
    opt.seed = static_cast<std::uint64_t>(rep);
    const auto t = pi::testgen::prediction(s, true);
    const auto max = pi::pinterval_ccp_detailed(t, gc, pi::ConfidenceLevel(0.1), opt);
    ASSERT_FALSE(max.clusters.ch_scores.empty());
    auto best = max.clusters.ch_scores.front();
    for (const auto& c : max.clusters.ch_scores) {
      if (c.second > best.second) best = c;
    }
    EXPECT_EQ(max.clusters.m, best.first);

    opt.ch_direction = pi::ChDirection::minimize;
    const auto min = pi::pinterval_ccp_detailed(t, gc, pi::ConfidenceLevel(0.1), opt);
    const auto& map = min.clusters.mapping;
    const bool families = map.at("g1") == map.at("g0") && map.at("g2") == map.at("g0") &&
                          map.at("g4") == map.at("g3") && map.at("g5") == map.at("g3") &&
                          map.at("g0") != map.at("g3");
    picked_two += min.clusters.m == 2 && families ? 1 : 0;
  }
  // Ten clustering points per noisy group occasionally let one pass as quiet.
  EXPECT_GE(picked_two, 18);
}

TEST(Ccp, FamilyCoverageOverReplications) {
  std::map<bool, std::pair<std::size_t, std::size_t>> hits;  // noisy -> (covered, n)
  for (int rep = 0; rep < 200; ++rep) {
    auto eng = pi::make_engine(500 + rep, 0);
    const auto cal = six_groups(eng);
    const auto test = six_groups(eng);
    pi::CcpOptions opt;
    opt.seed = static_cast<std::uint64_t>(rep);
    const auto table = pi::pinterval_ccp(pi::testgen::prediction(test, true),
                                         pi::GroupedCalibration(pi::testgen::calibration(cal, true)),
                                         pi::ConfidenceLevel(0.1), opt);
    for (std::size_t i = 0; i < test.truths.size(); ++i) {
      auto& h = hits[test.groups[i] >= "g3"];
      h.first += table.rows[i].contains(test.truths[i]) ? 1 : 0;
      ++h.second;
    }
  }
  for (const auto& [noisy, h] : hits) {
    const double cov = static_cast<double>(h.first) / static_cast<double>(h.second);
    EXPECT_NEAR(cov, 0.9, 0.03) << (noisy ? "noisy" : "quiet");
  }
}

TEST(Ccp, ClampsMaxClusters) {
  auto eng = pi::make_engine(3, 0);
  const auto s = six_groups(eng);
  pi::CcpOptions opt;
  opt.max_n_clusters = 10;
  const auto table = pi::pinterval_ccp(pi::testgen::prediction(s, true),
                                       pi::GroupedCalibration(pi::testgen::calibration(s, true)),
                                       pi::ConfidenceLevel(0.1), opt);
  EXPECT_TRUE(table.has_warning("max-clusters-clamped"));
}

TEST(Ccp, Deterministic) {
  auto eng = pi::make_engine(4, 0);
  const auto s = six_groups(eng);
  const pi::GroupedCalibration gc(pi::testgen::calibration(s, true));
  pi::CcpOptions opt;
  opt.seed = 77;
  const auto a = pi::pinterval_ccp(pi::testgen::prediction(s, true), gc, pi::ConfidenceLevel(0.1), opt);
  const auto b = pi::pinterval_ccp(pi::testgen::prediction(s, true), gc, pi::ConfidenceLevel(0.1), opt);
  EXPECT_EQ(a.rows, b.rows);
}

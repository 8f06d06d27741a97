#include <benchmark/benchmark.h>

#include <vector>

#include "pintervals/bootstrap.hpp"
#include "pintervals/conformal.hpp"
#include "pintervals/quantile.hpp"
#include "pintervals/rng.hpp"

namespace pi = pintervals;

namespace {

std::vector<double> uniform_values(std::size_t n, std::uint64_t seed) {
  auto eng = pi::make_engine(seed, 0);
  std::vector<double> v(n);
  for (auto& x : v) x = pi::uniform01(eng);
  return v;
}

struct Data {
  pi::CalibrationSet calib;
  pi::PredictionSet test;
};

Data gaussian_data(std::size_t n_calib, std::size_t n_test, bool features) {
  auto eng = pi::make_engine(99, 0);
  Data d;
  auto fill = [&](std::size_t n, std::vector<double>& preds, std::vector<double>* truths,
                  std::optional<pi::Matrix>& feats) {
    pi::Matrix f(static_cast<Eigen::Index>(n), 2);
    for (std::size_t i = 0; i < n; ++i) {
      const double p = pi::standard_normal(eng);
      preds.push_back(p);
      if (truths) truths->push_back(p + pi::standard_normal(eng));
      f(static_cast<Eigen::Index>(i), 0) = pi::standard_normal(eng);
      f(static_cast<Eigen::Index>(i), 1) = pi::standard_normal(eng);
    }
    if (features) feats = std::move(f);
  };
  fill(n_calib, d.calib.preds, &d.calib.truths, d.calib.features);
  fill(n_test, d.test.preds, nullptr, d.test.features);
  return d;
}

void BM_ConformalQuantile(benchmark::State& state) {
  const auto scores = uniform_values(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pi::conformal_quantile(scores, pi::ConfidenceLevel(0.1)));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ConformalQuantile)->RangeMultiplier(10)->Range(100, 100000)->Complexity();

void BM_WeightedQuantile(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto scores = uniform_values(n, 2);
  const auto weights = uniform_values(n, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pi::weighted_quantile(scores, weights, pi::ConfidenceLevel(0.1)));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_WeightedQuantile)->RangeMultiplier(10)->Range(100, 100000)->Complexity();

// Pre-sorted scores amortize the sort across many test points.
void BM_SortedScoresWeighted(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const pi::SortedScores sorted(uniform_values(n, 2));
  const auto weights = uniform_values(n, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sorted.weighted_quantile(weights, pi::ConfidenceLevel(0.1)));
  }
}
BENCHMARK(BM_SortedScoresWeighted)->RangeMultiplier(10)->Range(100, 100000);

void BM_SplitConformal(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto d = gaussian_data(n, n, false);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pi::pinterval_conformal(d.test, d.calib, pi::ConfidenceLevel(0.1)));
  }
}
BENCHMARK(BM_SplitConformal)->RangeMultiplier(10)->Range(100, 10000);

void BM_DistanceWeightedConformal(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto d = gaussian_data(n, n, true);
  pi::ConformalOptions opt;
  opt.weighting.enabled = true;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pi::pinterval_conformal(d.test, d.calib, pi::ConfidenceLevel(0.1), opt));
  }
}
BENCHMARK(BM_DistanceWeightedConformal)->RangeMultiplier(4)->Range(100, 1600)->Unit(benchmark::kMillisecond);

void BM_Bootstrap(benchmark::State& state) {
  const auto d = gaussian_data(1000, 100, false);
  pi::BootstrapConfig cfg;
  cfg.n_bootstrap = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(pi::pinterval_bootstrap(d.test, d.calib, pi::ConfidenceLevel(0.1), cfg));
  }
}
BENCHMARK(BM_Bootstrap)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

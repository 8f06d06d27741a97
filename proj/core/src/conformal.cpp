#include "pintervals/conformal.hpp"

#include <numeric>

#include "calibrate.hpp"

namespace pintervals {

IntervalTable pinterval_conformal(const PredictionSet& test, const CalibrationSet& calib,
                                  ConfidenceLevel alpha, const ConformalOptions& options) {
  calib.validate();
  test.validate();

  detail::Partition all;
  all.kind = "calibration set";
  all.names = {"all"};
  all.pools.emplace_back(calib.size());
  std::iota(all.pools[0].begin(), all.pools[0].end(), std::size_t{0});
  all.test_pool.assign(test.size(), 0);
  return detail::calibrate_partitioned(test, calib, alpha, options, all);
}

}  // namespace pintervals

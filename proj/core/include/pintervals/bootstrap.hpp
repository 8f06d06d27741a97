#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "pintervals/distance.hpp"
#include "pintervals/table.hpp"
#include "pintervals/types.hpp"

namespace pintervals {

enum class BootstrapErrorType { raw, absolute };

std::string_view to_string(BootstrapErrorType) noexcept;
BootstrapErrorType parse_bootstrap_error_type(std::string_view);

struct BootstrapConfig {
  std::size_t n_bootstrap = 1000;
  BootstrapErrorType error_type = BootstrapErrorType::raw;
  std::uint64_t seed = 0;
  DistanceWeightConfig weighting;
};

/// Residual-bootstrap intervals. Each test point draws from its own RNG
/// stream derived from (seed, row index), so the output does not depend on
/// evaluation order.
IntervalTable pinterval_bootstrap(const PredictionSet& test, const CalibrationSet& calib,
                                  ConfidenceLevel alpha, const BootstrapConfig& cfg = {});

}  // namespace pintervals

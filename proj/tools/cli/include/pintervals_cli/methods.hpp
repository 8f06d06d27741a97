#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "pintervals/bccp.hpp"
#include "pintervals/table.hpp"
#include "pintervals_cli/config.hpp"
#include "pintervals_cli/dataset.hpp"

namespace pintervals::cli {

/// Bins for bccp: configured breaks, or balanced breaks over calibration truths.
BinSpec bin_spec_for(const RunConfig& cfg, const Dataset& calib);

/// Whether `cfg.method` consumes a calibration set.
bool needs_calibration(const RunConfig& cfg);

/// Runs cfg.method. `seed` drives bootstrap draws and the CCP split.
/// Rows of bccp output carry the bin of the test truth when truths are known.
IntervalTable run_method(const RunConfig& cfg, const std::optional<Dataset>& calib,
                         const Dataset& test, std::uint64_t seed);

/// Rewrites a simulation method name (scp, dwcp, bccp_c, normal, ...) into
/// the interval method it stands for.
RunConfig config_for_simulation_method(const RunConfig& base, const std::string& name);

}  // namespace pintervals::cli

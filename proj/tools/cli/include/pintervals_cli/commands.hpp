#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pintervals_cli/config.hpp"
#include "pintervals_cli/csv.hpp"

namespace pintervals::cli {

// Every command returns a process exit code and never throws: failures are
// reported on `err` with the exit code of their class (see errors.hpp).

/// Intervals for `test_path` calibrated on `calib_path` (may be empty for
/// parametric runs with supplied parameters). `out_path` empty or "-" means `out`.
int cmd_interval(const RunConfig& cfg, const std::string& calib_path, const std::string& test_path,
                 const std::string& out_path, std::ostream& out, std::ostream& err);

struct EvaluateOptions {
  std::string intervals_path;
  /// CSV holding the truth column (and any group_by columns not in the intervals file).
  std::string truth_path;
  std::string truth_col = "truth";
  std::vector<std::string> group_by;
  double alpha = 0.1;
  /// Directory for evaluation.csv / evaluation.json; text goes to `out` only when unset.
  std::optional<std::string> out_dir;
  bool json = false;
};

int cmd_evaluate(const EvaluateOptions& opt, std::ostream& out, std::ostream& err);

/// Rows pred,truth,group,lat,lon. Deterministic in (spec, seed).
CsvTable synthesize(const SynthSpec& spec, std::uint64_t seed);
int cmd_synth(const SynthSpec& spec, std::uint64_t seed, const std::string& out_path,
              std::ostream& out, std::ostream& err);

/// Writes aggregate.csv, group.csv, bin.csv, failures.csv, report.txt (and
/// report.json when cfg.simulate.json) into `out_dir`.
int cmd_simulate(const RunConfig& cfg, const std::string& out_dir, std::ostream& out,
                 std::ostream& err);

}  // namespace pintervals::cli

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pintervals/bootstrap.hpp"
#include "pintervals/distance.hpp"
#include "pintervals/grouped.hpp"
#include "pintervals/parametric.hpp"
#include "pintervals/score.hpp"

namespace pintervals::cli {

/// Column roles in input CSVs.
struct DataColumns {
  std::string pred = "pred";
  std::string truth = "truth";
  std::string group = "group";
  /// Empty: bins are derived from breaks.
  std::string bin;
  std::vector<std::string> features;
};

struct SynthSpec {
  std::size_t n = 1000;
  /// homoskedastic | group-heteroskedastic | outcome-dependent
  std::string noise = "homoskedastic";
  int n_groups = 4;
  double sd = 1.0;
  /// Per-group sds for group-heteroskedastic, cycled over groups.
  std::vector<double> sds{1.0, 5.0};

  /// Throws ConfigError.
  void validate() const;
};

struct SimulateSpec {
  int n_iterations = 100;
  double split_fraction = 0.5;
  std::vector<std::string> methods{"scp",    "mcp",    "ccp",       "dwcp",  "bccp_d",
                                   "bccp_c", "bootstrap", "normal", "logistic"};
  /// Dataset path; synthetic data from [synth] when unset.
  std::optional<std::string> data;
  bool json = false;
};

/// Everything a run needs. Defaults match the documented config keys.
struct RunConfig {
  std::string method = "conformal";
  double alpha = 0.1;
  std::string score = "absolute";
  std::uint64_t seed = 0;
  unsigned threads = 1;

  DataColumns columns;
  DistanceWeightConfig weighting;

  std::optional<int> n_clusters;
  bool optimize_n_clusters = true;
  int max_n_clusters = 5;
  double clustering_fraction = 0.5;
  ChDirection ch_direction = ChDirection::maximize;

  std::optional<std::vector<double>> breaks;
  int n_bins = 4;
  bool contiguize = false;

  std::size_t n_bootstrap = 1000;
  BootstrapErrorType error_type = BootstrapErrorType::raw;

  Distribution dist = Distribution::normal;
  std::optional<ParamMap> pars;
  bool center_at_zero = false;

  SimulateSpec simulate;
  SynthSpec synth;

  /// Cross-field checks. Throws ConfigError.
  void validate() const;
  [[nodiscard]] ScoreFunction score_function() const;
};

inline const std::vector<std::string> kIntervalMethods{"conformal", "mondrian",  "ccp",
                                                       "bccp",      "bootstrap", "parametric"};
inline const std::vector<std::string> kSimulateMethods{"scp",    "mcp",       "ccp",   "dwcp",
                                                       "bccp_d", "bccp_c",    "bootstrap",
                                                       "normal", "logistic"};

/// Parses INI text ([section] / key = value; '#' and ';' comments). Unknown
/// sections or keys throw ConfigError naming them.
RunConfig parse_config(const std::string& text, const std::string& source = "config");
RunConfig load_config(const std::string& path);

/// "mean:0,sd:2" -> {mean: 0, sd: 2}.
ParamMap parse_pars(const std::string& text);
std::vector<double> parse_number_list(const std::string& text, const std::string& key);

}  // namespace pintervals::cli

// pintervals: prediction intervals from point predictions and a calibration set.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pintervals_cli/commands.hpp"
#include "pintervals_cli/config.hpp"
#include "pintervals_cli/errors.hpp"

namespace cli = pintervals::cli;

int main(int argc, char** argv) {
  CLI::App app{"Prediction intervals: conformal, bootstrap and parametric"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> alpha;
  std::string out_path;
  std::optional<unsigned> threads;
  app.add_option("--config", config_path, "INI configuration file");
  app.add_option("--seed", seed, "Master seed (overrides [run] seed)");
  app.add_option("--alpha", alpha, "Miscoverage level in (0, 1) (overrides [run] alpha)");
  app.add_option("--out", out_path, "Output file (interval, synth) or directory (evaluate, simulate)");
  app.add_option("--threads", threads, "Worker threads for simulate (overrides [run] threads)");

  auto* interval = app.add_subcommand("interval", "Build prediction intervals for a test file");
  std::optional<std::string> method;
  std::string calib_path;
  std::string test_path;
  interval->add_option("--method", method, "conformal|mondrian|ccp|bccp|bootstrap|parametric");
  interval->add_option("--calib", calib_path, "Calibration CSV (pred, truth, ...)");
  interval->add_option("--test", test_path, "Test CSV (pred, ...)")->required();

  auto* evaluate = app.add_subcommand("evaluate", "Coverage and width of an interval file");
  cli::EvaluateOptions eval;
  std::vector<std::string> group_by;
  evaluate->add_option("--intervals", eval.intervals_path, "Interval CSV from `interval`")->required();
  evaluate->add_option("--truth", eval.truth_path, "CSV holding the observed outcomes")->required();
  evaluate->add_option("--truth-col", eval.truth_col, "Outcome column in the truth CSV");
  evaluate->add_option("--group-by", group_by, "Columns to break coverage down by")->delimiter(',');
  evaluate->add_flag("--json", eval.json, "Also write evaluation.json (needs --out)");

  auto* simulate = app.add_subcommand("simulate", "Repeated split simulation over methods");
  std::optional<std::string> sim_data;
  std::optional<int> iterations;
  bool sim_json = false;
  simulate->add_option("--data", sim_data, "Dataset CSV; synthetic data from [synth] when absent");
  simulate->add_option("--iterations", iterations, "Overrides [simulate] n_iterations");
  simulate->add_flag("--json", sim_json, "Also write report.json");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  std::optional<std::size_t> synth_n;
  std::optional<std::string> synth_noise;
  std::optional<int> synth_groups;
  synth->add_option("--n", synth_n, "Row count");
  synth->add_option("--noise", synth_noise, "homoskedastic|group-heteroskedastic|outcome-dependent");
  synth->add_option("--groups", synth_groups, "Number of groups");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kExitOk : cli::kExitConfig;
  }

  cli::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = cli::load_config(config_path);
  } catch (const cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return cli::kExitConfig;
  }
  // Flags win over the file.
  if (seed) cfg.seed = *seed;
  if (alpha) cfg.alpha = *alpha;
  if (threads) cfg.threads = *threads;

  if (interval->parsed()) {
    if (method) cfg.method = *method;
    return cli::cmd_interval(cfg, calib_path, test_path, out_path, std::cout, std::cerr);
  }
  if (evaluate->parsed()) {
    eval.alpha = cfg.alpha;
    eval.group_by = group_by;
    if (!out_path.empty()) eval.out_dir = out_path;
    if (eval.json && !eval.out_dir) {
      std::cerr << "config error: --json needs --out\n";
      return cli::kExitConfig;
    }
    return cli::cmd_evaluate(eval, std::cout, std::cerr);
  }
  if (simulate->parsed()) {
    if (sim_data) cfg.simulate.data = *sim_data;
    if (iterations) cfg.simulate.n_iterations = *iterations;
    if (sim_json) cfg.simulate.json = true;
    return cli::cmd_simulate(cfg, out_path, std::cout, std::cerr);
  }
  if (synth->parsed()) {
    if (synth_n) cfg.synth.n = *synth_n;
    if (synth_noise) cfg.synth.noise = *synth_noise;
    if (synth_groups) cfg.synth.n_groups = *synth_groups;
    return cli::cmd_synth(cfg.synth, cfg.seed, out_path, std::cout, std::cerr);
  }
  return cli::kExitUnexpected;
}

#include "pintervals_cli/methods.hpp"

#include "pintervals/bootstrap.hpp"
#include "pintervals/conformal.hpp"
#include "pintervals/grouped.hpp"
#include "pintervals/parametric.hpp"
#include "pintervals_cli/errors.hpp"

namespace pintervals::cli {

BinSpec bin_spec_for(const RunConfig& cfg, const Dataset& calib) {
  if (cfg.breaks) return BinSpec(*cfg.breaks);
  if (!calib.truths) throw DataError("bin breaks need calibration truths");
  return BinSpec(balanced_breaks(*calib.truths, cfg.n_bins));
}

bool needs_calibration(const RunConfig& cfg) {
  if (cfg.method != "parametric") return true;
  if (cfg.dist == Distribution::poisson || cfg.dist == Distribution::chisq) return false;
  return !cfg.pars.has_value();
}

IntervalTable run_method(const RunConfig& cfg, const std::optional<Dataset>& calib,
                         const Dataset& test, std::uint64_t seed) {
  const ConfidenceLevel alpha(cfg.alpha);
  const auto pred = test.prediction();
  if (needs_calibration(cfg) && !calib) {
    throw ConfigError("method " + cfg.method + " needs a calibration file (--calib)");
  }
  const auto score = cfg.score_function();

  if (cfg.method == "conformal") {
    return pinterval_conformal(pred, calib->calibration(), alpha, {score, cfg.weighting});
  }
  if (cfg.method == "mondrian") {
    return pinterval_mondrian(pred, GroupedCalibration(calib->calibration()), alpha,
                              {score, cfg.weighting});
  }
  if (cfg.method == "ccp") {
    CcpOptions opt;
    opt.score = score;
    opt.weighting = cfg.weighting;
    opt.n_clusters = cfg.n_clusters;
    opt.optimize_n_clusters = cfg.optimize_n_clusters;
    opt.max_n_clusters = cfg.max_n_clusters;
    opt.clustering_fraction = cfg.clustering_fraction;
    opt.seed = seed;
    opt.ch_direction = cfg.ch_direction;
    return pinterval_ccp(pred, GroupedCalibration(calib->calibration()), alpha, opt);
  }
  if (cfg.method == "bccp") {
    const auto spec = bin_spec_for(cfg, *calib);
    BccpOptions opt;
    opt.score = score;
    opt.weighting = cfg.weighting;
    opt.contiguize = cfg.contiguize;
    auto table = pinterval_bccp(pred, calib->calibration(), spec, alpha, opt);
    if (test.truths) {
      for (std::size_t i = 0; i < table.size(); ++i) {
        table.rows[i].bin = spec.assign((*test.truths)[i]);
      }
    }
    return table;
  }
  if (cfg.method == "bootstrap") {
    BootstrapConfig b;
    b.n_bootstrap = cfg.n_bootstrap;
    b.error_type = cfg.error_type;
    b.seed = seed;
    b.weighting = cfg.weighting;
    return pinterval_bootstrap(pred, calib->calibration(), alpha, b);
  }
  if (cfg.method == "parametric") {
    DistSpec spec;
    spec.dist = cfg.dist;
    spec.pars = cfg.pars;
    spec.center_at_zero = cfg.center_at_zero;
    std::optional<CalibrationSet> c;
    if (needs_calibration(cfg)) c = calib->calibration();
    return pinterval_parametric(pred, spec, c, alpha);
  }
  throw ConfigError("unknown method \"" + cfg.method + "\"");
}

RunConfig config_for_simulation_method(const RunConfig& base, const std::string& name) {
  RunConfig c = base;
  c.weighting.enabled = false;
  if (name == "scp") {
    c.method = "conformal";
  } else if (name == "dwcp") {
    c.method = "conformal";
    c.weighting.enabled = true;
  } else if (name == "mcp") {
    c.method = "mondrian";
  } else if (name == "ccp") {
    c.method = "ccp";
  } else if (name == "bccp_d" || name == "bccp_c") {
    c.method = "bccp";
    c.contiguize = name == "bccp_c";
  } else if (name == "bootstrap") {
    c.method = "bootstrap";
  } else if (name == "normal" || name == "logistic") {
    c.method = "parametric";
    c.dist = name == "normal" ? Distribution::normal : Distribution::logistic;
    c.pars.reset();
  } else {
    throw ConfigError("unknown simulation method \"" + name + "\"");
  }
  return c;
}

}  // namespace pintervals::cli

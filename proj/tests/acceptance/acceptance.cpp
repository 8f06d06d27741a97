// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "oracles.hpp"
#include "pintervals/bccp.hpp"
#include "pintervals/bootstrap.hpp"
#include "pintervals/conformal.hpp"
#include "pintervals/evaluation.hpp"
#include "pintervals/grouped.hpp"
#include "pintervals/parametric.hpp"
#include "pintervals/quantile.hpp"
#include "pintervals/rng.hpp"
#include "pintervals_cli/commands.hpp"
#include "pintervals_cli/dataset.hpp"
#include "pintervals_cli/interval_io.hpp"

namespace pi = pintervals;
namespace gen = pintervals::testgen;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Records the first few failing checks; `detail` always ends with the summary.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    pass_ = false;
    if (++failures_ <= 3) failed_ += (failed_.empty() ? "" : "; ") + what;
  }
  void note(const std::string& s) { notes_ += (notes_.empty() ? "" : ", ") + s; }
  [[nodiscard]] Outcome done() const {
    std::string d = notes_;
    if (!pass_) d += (d.empty() ? "" : " | ") + std::string("failed: ") + failed_;
    return {pass_, d};
  }

 private:
  bool pass_ = true;
  int failures_ = 0;
  std::string failed_;
  std::string notes_;
};

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

double coverage_of(const std::vector<double>& truth, const pi::IntervalTable& t) {
  return pi::interval_coverage(truth, t);
}

// ---- AC1 ----
Outcome split_cp_guarantee() {
  Check c;
  for (int pct : {5, 10, 20}) {
    const double alpha = pct / 100.0;
    double total = 0.0;
    for (int rep = 0; rep < 200; ++rep) {
      auto eng = pi::make_engine(1000 + static_cast<std::uint64_t>(pct), static_cast<std::uint64_t>(rep));
      const auto cal = gen::gaussian(500, 1.0, eng);
      const auto test = gen::gaussian(2000, 1.0, eng);
      total += coverage_of(test.truths, pi::pinterval_conformal(gen::prediction(test), gen::calibration(cal),
                                                                pi::ConfidenceLevel(alpha)));
    }
    const double mean = total / 200.0;
    const double lo = 1.0 - alpha - 0.01;
    const double hi = 1.0 - alpha + 1.0 / 501.0 + 0.01;
    c.note("alpha " + fmt(alpha, 2) + ": " + fmt(mean));
    c.expect(mean >= lo && mean <= hi, "alpha " + fmt(alpha, 2) + " mean " + fmt(mean) + " outside [" +
                                           fmt(lo) + ", " + fmt(hi) + "]");
  }
  return c.done();
}

// ---- AC2 ----
Outcome quantile_oracle() {
  Check c;
  auto eng = pi::make_engine(2, 0);
  std::size_t cases = 0;
  for (std::size_t n = 1; n <= 20; ++n) {
    std::vector<double> scores(n);
    // Integer-valued draws force ties on some instances.
    for (auto& s : scores) s = static_cast<double>(pi::uniform_index(eng, 8)) + (n % 2 ? pi::uniform01(eng) : 0.0);
    for (int pct = 1; pct <= 99; ++pct) {
      const double got = pi::conformal_quantile(scores, pi::ConfidenceLevel(pct / 100.0));
      const double want = pi::oracle::rank_quantile(scores, pct);
      ++cases;
      c.expect(got == want, "n=" + std::to_string(n) + " alpha=" + std::to_string(pct) + "%");
    }
  }
  c.note(std::to_string(cases) + " cases");
  return c.done();
}

// ---- AC3 ----
Outcome weighted_reduction() {
  Check c;
  auto eng = pi::make_engine(3, 0);
  for (int inst = 0; inst < 1000; ++inst) {
    const std::size_t n = 1 + pi::uniform_index(eng, 60);
    std::vector<double> scores(n);
    for (auto& s : scores) s = 10.0 * pi::uniform01(eng);
    const double w = 0.01 + 100.0 * pi::uniform01(eng);
    const std::vector<double> weights(n, w);
    // Half the instances use the percent grid, half a continuous alpha.
    const double alpha = inst % 2 ? (1.0 + static_cast<double>(pi::uniform_index(eng, 99))) / 100.0
                                  : 0.005 + 0.99 * pi::uniform01(eng);
    const pi::ConfidenceLevel a(alpha);
    for (auto mass : {pi::TestPointMass::max_weight, pi::TestPointMass::unit}) {
      // Unit test mass matches the unweighted rule only when every weight is 1.
      const auto& ws = mass == pi::TestPointMass::unit ? std::vector<double>(n, 1.0) : weights;
      const double got = pi::weighted_quantile(scores, ws, a, mass);
      const double want = pi::conformal_quantile(scores, a);
      c.expect(got == want, "instance " + std::to_string(inst));
    }
  }
  c.note("1000 instances");
  return c.done();
}

// ---- AC4 ----
Outcome mondrian_validity() {
  Check c;
  std::map<std::string, std::pair<std::size_t, std::size_t>> mcp, scp;  // covered, n
  for (int rep = 0; rep < 200; ++rep) {
    auto eng = pi::make_engine(4, static_cast<std::uint64_t>(rep));
    const auto cal = gen::two_group(1000, eng);
    const auto test = gen::two_group(1000, eng);
    const auto m = pi::pinterval_mondrian(gen::prediction(test, true),
                                          pi::GroupedCalibration(gen::calibration(cal, true)),
                                          pi::ConfidenceLevel(0.1));
    const auto s = pi::pinterval_conformal(gen::prediction(test), gen::calibration(cal),
                                           pi::ConfidenceLevel(0.1));
    for (std::size_t i = 0; i < test.truths.size(); ++i) {
      auto& hm = mcp[test.groups[i]];
      hm.first += m.rows[i].contains(test.truths[i]) ? 1 : 0;
      ++hm.second;
      auto& hs = scp[test.groups[i]];
      hs.first += s.rows[i].contains(test.truths[i]) ? 1 : 0;
      ++hs.second;
    }
  }
  auto rate = [](const std::pair<std::size_t, std::size_t>& h) {
    return static_cast<double>(h.first) / static_cast<double>(h.second);
  };
  for (const auto& [g, h] : mcp) {
    c.note("MCP " + g + " " + fmt(rate(h)));
    c.expect(std::abs(rate(h) - 0.9) <= 0.02, "MCP group " + g + " " + fmt(rate(h)));
  }
  const double scp_noisy = rate(scp["b"]);
  c.note("SCP sigma=5 " + fmt(scp_noisy));
  c.expect(scp_noisy < 0.88, "SCP sigma=5 coverage " + fmt(scp_noisy) + " not below 0.88");
  std::map<std::string, double> mc, sc;
  for (const auto& [g, h] : mcp) mc[g] = rate(h);
  for (const auto& [g, h] : scp) sc[g] = rate(h);
  c.note("group MAE MCP " + fmt(pi::mae_coverage(mc, pi::ConfidenceLevel(0.1))) + " vs SCP " +
         fmt(pi::mae_coverage(sc, pi::ConfidenceLevel(0.1))));
  return c.done();
}

// ---- AC5 ----
bool rows_equal(const pi::IntervalTable& a, const pi::IntervalTable& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.rows[i].pred != b.rows[i].pred || a.rows[i].bounds != b.rows[i].bounds) return false;
  }
  return true;
}

gen::Sample grouped_fixture(std::uint64_t seed, int k) {
  auto eng = pi::make_engine(seed, 0);
  gen::Sample s;
  for (int g = 0; g < k; ++g) {
    for (int i = 0; i < 25; ++i) {
      const double p = pi::standard_normal(eng);
      s.preds.push_back(p);
      s.truths.push_back(p + (1.0 + g) * pi::standard_normal(eng));
      s.groups.push_back("g" + std::to_string(g));
    }
  }
  return s;
}

// Visits every set partition of {0..n-1} as a restricted growth string.
void for_each_partition(int n, const std::function<void(const std::vector<int>&, int)>& visit) {
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int i, int m) {
    if (i == n) {
      visit(labels, m);
      return;
    }
    for (int l = 0; l <= m; ++l) {
      labels[static_cast<std::size_t>(i)] = l;
      rec(i + 1, std::max(m, l + 1));
    }
  };
  rec(1, 1);
}

Outcome ccp_reductions() {
  Check c;
  for (int k : {3, 5}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto s = grouped_fixture(50 + seed, k);
      const pi::GroupedCalibration gc(gen::calibration(s, true));
      const auto t = gen::prediction(s, true);
      pi::CcpOptions one;
      one.n_clusters = 1;
      c.expect(rows_equal(pi::pinterval_ccp(t, gc, pi::ConfidenceLevel(0.1), one),
                          pi::pinterval_conformal(t, gen::calibration(s), pi::ConfidenceLevel(0.1))),
               "M=1 vs SCP, K=" + std::to_string(k));
      pi::CcpOptions all;
      all.n_clusters = k;
      all.clustering_fraction = 1.0;
      c.expect(rows_equal(pi::pinterval_ccp(t, gc, pi::ConfidenceLevel(0.1), all),
                          pi::pinterval_mondrian(t, gc, pi::ConfidenceLevel(0.1))),
               "M=K vs MCP, K=" + std::to_string(k));
    }
  }
  auto eng = pi::make_engine(5, 0);
  std::size_t assignments = 0;
  double worst = 0.0;
  for (int n = 3; n <= 8; ++n) {
    pi::Matrix pts(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < 2; ++j) pts(i, j) = 10.0 * pi::uniform01(eng);
    }
    for_each_partition(n, [&](const std::vector<int>& labels, int m) {
      if (m < 2 || m >= n) return;  // index undefined
      ++assignments;
      const double got = pi::calinski_harabasz(pts, labels);
      const double want = pi::oracle::calinski_harabasz(pts, labels);
      const double rel = std::abs(got - want) / std::abs(want);
      worst = std::max(worst, rel);
      c.expect(rel <= 1e-12, "CH n=" + std::to_string(n));
    });
  }
  c.note("CH " + std::to_string(assignments) + " assignments, max rel diff " + [&] {
    char b[32];
    std::snprintf(b, sizeof b, "%.1e", worst);
    return std::string(b);
  }());
  return c.done();
}

// ---- AC6 ----
Outcome bccp_validity() {
  Check c;
  std::map<int, std::pair<std::size_t, std::size_t>> hits;
  std::map<int, std::pair<std::size_t, std::size_t>> scp_hits;
  int order_violations = 0;
  for (int rep = 0; rep < 200; ++rep) {
    auto eng = pi::make_engine(6, static_cast<std::uint64_t>(rep));
    const auto cal = gen::outcome_dependent(1000, eng);
    const auto test = gen::outcome_dependent(1000, eng);
    const pi::BinSpec spec(pintervals::cli::balanced_breaks(cal.truths, 4));
    pi::BccpOptions opt;
    const auto d = pi::pinterval_bccp(gen::prediction(test), gen::calibration(cal), spec,
                                      pi::ConfidenceLevel(0.1), opt);
    opt.contiguize = true;
    const auto k = pi::pinterval_bccp(gen::prediction(test), gen::calibration(cal), spec,
                                      pi::ConfidenceLevel(0.1), opt);
    const auto s = pi::pinterval_conformal(gen::prediction(test), gen::calibration(cal),
                                           pi::ConfidenceLevel(0.1));
    if (coverage_of(test.truths, k) < coverage_of(test.truths, d)) ++order_violations;
    const auto bins = pi::assign_bins(test.truths, spec);
    for (std::size_t i = 0; i < bins.size(); ++i) {
      auto& h = hits[bins[i]];
      h.first += d.rows[i].contains(test.truths[i]) ? 1 : 0;
      ++h.second;
      auto& hs = scp_hits[bins[i]];
      hs.first += s.rows[i].contains(test.truths[i]) ? 1 : 0;
      ++hs.second;
    }
  }
  std::map<std::string, double> bc, sc;
  for (const auto& [b, h] : hits) {
    const double r = static_cast<double>(h.first) / static_cast<double>(h.second);
    bc[std::to_string(b)] = r;
    c.note("bin " + std::to_string(b) + " " + fmt(r));
    c.expect(r >= 0.88, "bin " + std::to_string(b) + " coverage " + fmt(r));
  }
  for (const auto& [b, h] : scp_hits) {
    sc[std::to_string(b)] = static_cast<double>(h.first) / static_cast<double>(h.second);
  }
  c.expect(order_violations == 0, std::to_string(order_violations) + " reps with contiguized < discontiguous");
  c.note("bin MAE BCCP(d) " + fmt(pi::mae_coverage(bc, pi::ConfidenceLevel(0.1))) + " vs SCP " +
         fmt(pi::mae_coverage(sc, pi::ConfidenceLevel(0.1))));
  return c.done();
}

// ---- AC7 ----
Outcome bootstrap_coverage() {
  Check c;
  double total = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    auto eng = pi::make_engine(7, static_cast<std::uint64_t>(rep));
    const auto cal = gen::gaussian(1000, 1.0, eng);
    const auto test = gen::gaussian(200, 1.0, eng);
    pi::BootstrapConfig b;
    b.n_bootstrap = 2000;
    b.seed = static_cast<std::uint64_t>(rep);
    total += coverage_of(test.truths, pi::pinterval_bootstrap(gen::prediction(test), gen::calibration(cal),
                                                              pi::ConfidenceLevel(0.1), b));
  }
  const double mean = total / 100.0;
  c.note("mean coverage " + fmt(mean));
  c.expect(std::abs(mean - 0.9) <= 0.02, "mean coverage " + fmt(mean));

  auto eng = pi::make_engine(7, 999);
  const auto cal = gen::gaussian(300, 1.0, eng);
  const auto test = gen::gaussian(50, 1.0, eng);
  for (auto type : {pi::BootstrapErrorType::raw, pi::BootstrapErrorType::absolute}) {
    pi::BootstrapConfig b;
    b.n_bootstrap = 2000;
    b.seed = 42;
    b.error_type = type;
    std::ostringstream x, y;
    pintervals::cli::write_interval_table(
        x, pi::pinterval_bootstrap(gen::prediction(test), gen::calibration(cal), pi::ConfidenceLevel(0.1), b));
    pintervals::cli::write_interval_table(
        y, pi::pinterval_bootstrap(gen::prediction(test), gen::calibration(cal), pi::ConfidenceLevel(0.1), b));
    c.expect(x.str() == y.str(), "same seed gave different output");
  }
  c.note("repeat runs byte-identical");
  return c.done();
}

// ---- AC8 ----
Outcome parametric() {
  Check c;
  const std::vector<std::pair<pi::Distribution, pi::ParamMap>> fams{
      {pi::Distribution::normal, {{"mean", 0.3}, {"sd", 1.7}}},
      {pi::Distribution::logistic, {{"location", -0.2}, {"scale", 0.8}}},
      {pi::Distribution::lognormal, {{"meanlog", 0.1}, {"sdlog", 0.6}}},
  };
  double worst = 0.0;
  for (const auto& [dist, pars] : fams) {
    for (int k = 1; k <= 99; ++k) {
      const double p = k / 100.0;
      const double q = pi::dist_quantile(dist, p, pars, 2.5);
      const double err = std::abs(pi::dist_cdf(dist, q, pars, 2.5) - p);
      worst = std::max(worst, err);
      c.expect(err <= 1e-6, std::string(pi::to_string(dist)) + " p=" + fmt(p, 2));
    }
  }
  char b[32];
  std::snprintf(b, sizeof b, "%.1e", worst);
  c.note(std::string("max |CDF(Q(p)) - p| ") + b);

  pi::PredictionSet t;
  t.preds = {4.0};
  pi::DistSpec pois;
  pois.dist = pi::Distribution::poisson;
  const auto row = pi::pinterval_parametric(t, pois, std::nullopt, pi::ConfidenceLevel(0.1)).rows[0];
  const double lo_oracle = static_cast<double>(pi::oracle::poisson_quantile(0.05, 4.0));
  const double hi_oracle = static_cast<double>(pi::oracle::poisson_quantile(0.95, 4.0));
  c.note("Poisson(4) [" + fmt(row.bounds.lower, 0) + ", " + fmt(row.bounds.upper, 0) + "]");
  c.expect(row.bounds == pi::Interval{1.0, 8.0} && lo_oracle == 1.0 && hi_oracle == 8.0,
           "Poisson interval [" + fmt(row.bounds.lower, 1) + ", " + fmt(row.bounds.upper, 1) + "]");

  double total = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    auto eng = pi::make_engine(8, static_cast<std::uint64_t>(rep));
    const auto cal = gen::gaussian(1000, 1.0, eng);
    const auto test = gen::gaussian(1000, 1.0, eng);
    total += coverage_of(test.truths, pi::pinterval_parametric(gen::prediction(test), pi::DistSpec{},
                                                               gen::calibration(cal), pi::ConfidenceLevel(0.1)));
  }
  const double mean = total / 100.0;
  c.note("normal coverage " + fmt(mean));
  c.expect(std::abs(mean - 0.9) <= 0.015, "normal coverage " + fmt(mean));
  return c.done();
}

// ---- AC9 ----
Outcome mae_metric() {
  Check c;
  const std::map<std::string, double> cov{{"1", 0.909}, {"2", 0.927}, {"3", 0.921}, {"4", 0.904}};
  const double mae = pi::mae_coverage(cov, pi::ConfidenceLevel(0.1));
  c.note("MAE " + fmt(mae, 5) + " (reported 0.0155)");
  c.expect(std::abs(mae - 0.01525) <= 5e-4, "MAE " + fmt(mae, 6));
  return c.done();
}

// ---- AC10 ----
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome simulate_determinism() {
  Check c;
  const auto root = fs::temp_directory_path() / "pintervals_acceptance_simulate";
  fs::remove_all(root);
  pintervals::cli::RunConfig cfg;
  cfg.seed = 20240611;
  cfg.simulate.n_iterations = 12;
  cfg.simulate.json = true;
  cfg.synth.n = 400;
  cfg.synth.noise = "group-heteroskedastic";
  cfg.n_bootstrap = 300;
  std::map<std::string, std::map<std::string, std::string>> runs;
  for (const auto& [name, threads] : std::vector<std::pair<std::string, unsigned>>{{"t1a", 1}, {"t1b", 1}, {"t4", 4}}) {
    cfg.threads = threads;
    std::ostringstream out, err;
    const int code = pintervals::cli::cmd_simulate(cfg, (root / name).string(), out, err);
    c.expect(code == 0, name + " exited " + std::to_string(code) + ": " + err.str());
    for (const auto& e : fs::directory_iterator(root / name)) {
      runs[name][e.path().filename().string()] = slurp(e.path());
    }
  }
  c.expect(runs["t1a"].size() == 6, "expected 6 report files, got " + std::to_string(runs["t1a"].size()));
  c.expect(runs["t1a"] == runs["t1b"], "two single-thread runs differ");
  c.expect(runs["t1a"] == runs["t4"], "1-thread and 4-thread runs differ");
  c.note(std::to_string(runs["t1a"].size()) + " files x 3 runs identical");
  fs::remove_all(root);
  return c.done();
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC1 split-CP marginal coverage", split_cp_guarantee},
      {"AC2 conformal quantile vs rank oracle", quantile_oracle},
      {"AC3 uniform weights reduce to conformal", weighted_reduction},
      {"AC4 Mondrian per-group validity", mondrian_validity},
      {"AC5 CCP reductions and CH oracle", ccp_reductions},
      {"AC6 BCCP bin validity", bccp_validity},
      {"AC7 bootstrap coverage and determinism", bootstrap_coverage},
      {"AC8 parametric inverse CDF and coverage", parametric},
      {"AC9 MAE of coverage", mae_metric},
      {"AC10 simulate determinism across threads", simulate_determinism},
  };
  // Runtime limits where the criterion states one.
  const std::map<std::string, double> limits{{"AC1", 30.0}, {"AC2", 1.0}, {"AC4", 60.0}, {"AC6", 60.0}};
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const auto id = name.substr(0, name.find(' '));
    if (auto it = limits.find(id); it != limits.end() && secs >= it->second) {
      o.pass = false;
      o.detail += " | runtime " + fmt(secs, 2) + " s exceeds " + fmt(it->second, 0) + " s";
    }
    failed += o.pass ? 0 : 1;
    std::printf("[%s] %s (%.2f s): %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

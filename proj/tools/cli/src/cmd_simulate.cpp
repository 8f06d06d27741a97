#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <filesystem>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include "pintervals/evaluation.hpp"
#include "pintervals/rng.hpp"
#include "pintervals_cli/commands.hpp"
#include "pintervals_cli/dataset.hpp"
#include "pintervals_cli/methods.hpp"
#include "report_common.hpp"

namespace pintervals::cli {

namespace {

constexpr std::uint64_t kDataStream = 0xda7a;
constexpr std::uint64_t kSplitStream = 0;
constexpr std::uint64_t kBootstrapStream = 1;
constexpr std::uint64_t kClusterStream = 2;

struct Tally {
  std::size_t n = 0;
  std::size_t covered = 0;
};

struct MethodOutcome {
  bool ok = false;
  std::string error;
  double coverage = 0.0;
  double width = 0.0;
  std::map<std::string, Tally> groups;
  std::map<int, Tally> bins;
};

struct Iteration {
  std::vector<MethodOutcome> methods;
};

struct Aggregate {
  std::size_t ok = 0;
  std::size_t failed = 0;
  double coverage = 0.0;
  double width = 0.0;
  // Mean over successful iterations of the per-iteration group (bin) coverage.
  std::map<std::string, std::pair<double, std::size_t>> groups;
  std::map<int, std::pair<double, std::size_t>> bins;
  std::optional<double> group_mae;
  std::optional<double> bin_mae;
};

Dataset simulation_data(RunConfig& cfg) {
  const bool grouped =
      std::any_of(cfg.simulate.methods.begin(), cfg.simulate.methods.end(),
                  [](const std::string& m) { return m == "mcp" || m == "ccp"; });
  const bool weighted = std::find(cfg.simulate.methods.begin(), cfg.simulate.methods.end(),
                                  "dwcp") != cfg.simulate.methods.end();
  if (cfg.simulate.data) {
    return load_dataset(*cfg.simulate.data, cfg.columns, {true, grouped, weighted});
  }
  // Synthetic data uses the generator's own column names.
  cfg.columns = DataColumns{};
  cfg.columns.features = {"lat", "lon"};
  const auto t = synthesize(cfg.synth, derive_seed(cfg.seed, kDataStream));
  return dataset_from_table(t, cfg.columns, {true, grouped, weighted}, "synthetic data");
}

MethodOutcome run_one(const RunConfig& mcfg, const Dataset& calib, const Dataset& test,
                      const std::vector<int>& test_bins, std::uint64_t iter_seed) {
  MethodOutcome o;
  try {
    const std::uint64_t seed = mcfg.method == "ccp" ? derive_seed(iter_seed, kClusterStream)
                                                    : derive_seed(iter_seed, kBootstrapStream);
    const auto table = run_method(mcfg, calib, test, seed);
    const auto& truth = *test.truths;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      const bool hit = table.rows[i].contains(truth[i]);
      hits += hit ? 1 : 0;
      if (test.groups) {
        auto& g = o.groups[(*test.groups)[i]];
        ++g.n;
        g.covered += hit ? 1 : 0;
      }
      if (test_bins[i] > 0) {
        auto& b = o.bins[test_bins[i]];
        ++b.n;
        b.covered += hit ? 1 : 0;
      }
    }
    o.coverage = static_cast<double>(hits) / static_cast<double>(truth.size());
    o.width = mean_width(table).mean;
    o.ok = true;
  } catch (const std::exception& e) {
    o.error = e.what();
  }
  return o;
}

Iteration run_iteration(const RunConfig& cfg, const std::vector<RunConfig>& method_cfgs,
                        const Dataset& data, int index) {
  const std::uint64_t iter_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(index));
  const std::size_t n = data.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto eng = make_engine(iter_seed, kSplitStream);
  // Fisher-Yates with the unbiased index sampler; std::shuffle is not portable across libraries.
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[uniform_index(eng, i)]);
  const auto n_cal = static_cast<std::size_t>(std::clamp<double>(
      std::round(cfg.simulate.split_fraction * static_cast<double>(n)), 1.0,
      static_cast<double>(n - 1)));
  std::vector<std::size_t> cal_rows(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_cal));
  std::vector<std::size_t> test_rows(order.begin() + static_cast<std::ptrdiff_t>(n_cal), order.end());
  std::sort(cal_rows.begin(), cal_rows.end());
  std::sort(test_rows.begin(), test_rows.end());
  const auto calib = data.subset(cal_rows);
  const auto test = data.subset(test_rows);

  Iteration it;
  std::vector<double> breaks;
  try {
    breaks = cfg.breaks ? *cfg.breaks : balanced_breaks(*calib.truths, cfg.n_bins);
  } catch (const std::exception& e) {
    for (std::size_t m = 0; m < method_cfgs.size(); ++m) {
      it.methods.push_back(MethodOutcome{false, std::string("bin breaks: ") + e.what(), 0, 0, {}, {}});
    }
    return it;
  }
  // Bin 0 marks a test truth outside user-supplied finite breaks.
  std::vector<int> test_bins(test.size(), 0);
  if (breaks.size() >= 2) {
    const BinSpec spec(breaks);
    for (std::size_t i = 0; i < test.size(); ++i) {
      const double y = (*test.truths)[i];
      if (y >= breaks.front() && y <= breaks.back() && std::isfinite(y)) test_bins[i] = spec.assign(y);
    }
  }
  for (auto mcfg : method_cfgs) {
    if (mcfg.method == "bccp") mcfg.breaks = breaks;
    it.methods.push_back(run_one(mcfg, calib, test, test_bins, iter_seed));
  }
  return it;
}

template <class K>
std::optional<double> mae_of(const std::map<K, std::pair<double, std::size_t>>& m, double nominal) {
  if (m.empty()) return std::nullopt;
  double total = 0.0;
  for (const auto& [k, v] : m) total += std::abs(v.first - nominal);
  return total / static_cast<double>(m.size());
}

std::string opt_number(const std::optional<double>& v) { return v ? format_number(*v) : ""; }
std::string opt_short(const std::optional<double>& v) { return v ? format_short(*v) : "-"; }

}  // namespace

int cmd_simulate(const RunConfig& base, const std::string& out_dir, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&] {
    RunConfig cfg = base;
    cfg.validate();
    if (out_dir.empty()) throw ConfigError("simulate needs an output directory (--out)");
    const auto data = simulation_data(cfg);
    if (data.size() < 2) throw DataError("simulation needs at least two rows");

    std::vector<RunConfig> method_cfgs;
    for (const auto& name : cfg.simulate.methods) {
      method_cfgs.push_back(config_for_simulation_method(cfg, name));
    }

    const auto n_iter = static_cast<std::size_t>(cfg.simulate.n_iterations);
    std::vector<Iteration> results(n_iter);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < n_iter; i = next++) {
        results[i] = run_iteration(cfg, method_cfgs, data, static_cast<int>(i));
      }
    };
    const unsigned n_threads = std::min<unsigned>(cfg.threads, static_cast<unsigned>(n_iter));
    if (n_threads <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
    }

    // Accumulate in iteration order so floating-point sums do not depend on scheduling.
    const double nominal = 1.0 - cfg.alpha;
    std::vector<Aggregate> agg(method_cfgs.size());
    std::size_t failed_iterations = 0;
    for (const auto& it : results) {
      bool any_ok = false;
      for (std::size_t m = 0; m < it.methods.size(); ++m) {
        const auto& o = it.methods[m];
        auto& a = agg[m];
        if (!o.ok) {
          ++a.failed;
          continue;
        }
        any_ok = true;
        ++a.ok;
        a.coverage += o.coverage;
        a.width += o.width;
        for (const auto& [g, t] : o.groups) {
          auto& s = a.groups[g];
          s.first += static_cast<double>(t.covered) / static_cast<double>(t.n);
          ++s.second;
        }
        for (const auto& [b, t] : o.bins) {
          auto& s = a.bins[b];
          s.first += static_cast<double>(t.covered) / static_cast<double>(t.n);
          ++s.second;
        }
      }
      failed_iterations += any_ok ? 0 : 1;
    }
    for (auto& a : agg) {
      if (a.ok > 0) {
        a.coverage /= static_cast<double>(a.ok);
        a.width /= static_cast<double>(a.ok);
      } else {
        a.coverage = a.width = std::numeric_limits<double>::quiet_NaN();
      }
      for (auto& [g, s] : a.groups) s.first /= static_cast<double>(s.second);
      for (auto& [b, s] : a.bins) s.first /= static_cast<double>(s.second);
      a.group_mae = mae_of(a.groups, nominal);
      a.bin_mae = mae_of(a.bins, nominal);
    }

    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    const auto& names = cfg.simulate.methods;
    {
      auto f = open_output(dir / "aggregate.csv");
      write_csv_row(f, {"method", "iterations_ok", "iterations_failed", "coverage", "mean_width",
                        "group_mae", "bin_mae"});
      for (std::size_t m = 0; m < names.size(); ++m) {
        const auto& a = agg[m];
        write_csv_row(f, {names[m], std::to_string(a.ok), std::to_string(a.failed),
                          format_number(a.coverage), format_number(a.width), opt_number(a.group_mae),
                          opt_number(a.bin_mae)});
      }
    }
    {
      auto f = open_output(dir / "group.csv");
      write_csv_row(f, {"method", "group", "coverage", "iterations"});
      for (std::size_t m = 0; m < names.size(); ++m) {
        for (const auto& [g, s] : agg[m].groups) {
          write_csv_row(f, {names[m], g, format_number(s.first), std::to_string(s.second)});
        }
      }
    }
    {
      auto f = open_output(dir / "bin.csv");
      write_csv_row(f, {"method", "bin", "coverage", "iterations"});
      for (std::size_t m = 0; m < names.size(); ++m) {
        for (const auto& [b, s] : agg[m].bins) {
          write_csv_row(f, {names[m], std::to_string(b), format_number(s.first),
                            std::to_string(s.second)});
        }
      }
    }
    {
      auto f = open_output(dir / "failures.csv");
      write_csv_row(f, {"iteration", "method", "message"});
      for (std::size_t i = 0; i < results.size(); ++i) {
        for (std::size_t m = 0; m < results[i].methods.size(); ++m) {
          const auto& o = results[i].methods[m];
          if (!o.ok) write_csv_row(f, {std::to_string(i), names[m], o.error});
        }
      }
    }

    // Method x key matrices mirror the group-wise and bin-wise report layout.
    std::ostringstream text;
    text << "iterations " << n_iter << ", alpha " << format_short(cfg.alpha) << ", seed "
         << cfg.seed << "\n\naggregate\n";
    std::vector<std::vector<std::string>> rows{
        {"method", "ok", "failed", "coverage", "mean_width", "group_mae", "bin_mae"}};
    for (std::size_t m = 0; m < names.size(); ++m) {
      const auto& a = agg[m];
      rows.push_back({names[m], std::to_string(a.ok), std::to_string(a.failed),
                      format_short(a.coverage), format_short(a.width), opt_short(a.group_mae),
                      opt_short(a.bin_mae)});
    }
    write_text_table(text, rows);
    auto matrix = [&](const char* title, auto key_of, auto get, auto mae) {
      std::vector<std::string> keys;
      for (const auto& a : agg) {
        for (const auto& [k, s] : get(a)) {
          auto label = key_of(k);
          if (std::find(keys.begin(), keys.end(), label) == keys.end()) keys.push_back(label);
        }
      }
      if (keys.empty()) return;
      text << '\n' << title << '\n';
      std::vector<std::vector<std::string>> m_rows;
      m_rows.push_back({"method"});
      for (const auto& k : keys) m_rows.front().push_back(k);
      m_rows.front().push_back("mae");
      for (std::size_t m = 0; m < names.size(); ++m) {
        std::vector<std::string> r{names[m]};
        for (const auto& k : keys) {
          std::string cell = "-";
          for (const auto& [kk, s] : get(agg[m])) {
            if (key_of(kk) == k) cell = format_short(s.first);
          }
          r.push_back(cell);
        }
        r.push_back(opt_short(mae(agg[m])));
        m_rows.push_back(std::move(r));
      }
      write_text_table(text, m_rows);
    };
    matrix("coverage by group", [](const std::string& k) { return k; },
           [](const Aggregate& a) -> const auto& { return a.groups; },
           [](const Aggregate& a) { return a.group_mae; });
    matrix("coverage by bin", [](int k) { return std::to_string(k); },
           [](const Aggregate& a) -> const auto& { return a.bins; },
           [](const Aggregate& a) { return a.bin_mae; });
    {
      auto f = open_output(dir / "report.txt");
      f << text.str();
    }
    out << text.str();

    if (cfg.simulate.json) {
      nlohmann::json j;
      j["iterations"] = n_iter;
      j["alpha"] = cfg.alpha;
      j["seed"] = cfg.seed;
      for (std::size_t m = 0; m < names.size(); ++m) {
        const auto& a = agg[m];
        nlohmann::json e;
        e["method"] = names[m];
        e["iterations_ok"] = a.ok;
        e["iterations_failed"] = a.failed;
        e["coverage"] = number_json(a.coverage);
        e["mean_width"] = number_json(a.width);
        e["group_mae"] = a.group_mae ? number_json(*a.group_mae) : nlohmann::json();
        e["bin_mae"] = a.bin_mae ? number_json(*a.bin_mae) : nlohmann::json();
        for (const auto& [g, s] : a.groups) e["groups"][g] = number_json(s.first);
        for (const auto& [b, s] : a.bins) e["bins"][std::to_string(b)] = number_json(s.first);
        j["methods"].push_back(std::move(e));
      }
      auto f = open_output(dir / "report.json");
      f << j.dump(2) << '\n';
    }

    if (failed_iterations == n_iter) {
      err << "error: every iteration failed; see failures.csv\n";
      return kExitAllFailed;
    }
    return kExitOk;
  });
}

}  // namespace pintervals::cli

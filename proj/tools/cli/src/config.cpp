#include "pintervals_cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "pintervals/bccp.hpp"
#include "pintervals/error.hpp"
#include "pintervals_cli/csv.hpp"
#include "pintervals_cli/errors.hpp"

namespace pintervals::cli {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"run", {"method", "alpha", "score", "seed", "threads"}},
      {"data", {"pred_col", "truth_col", "group_col", "bin_col", "feature_cols"}},
      {"weighting", {"enabled", "distance_type", "normalize", "kernel", "ridge", "test_mass"}},
      {"ccp",
       {"n_clusters", "optimize", "max_n_clusters", "clustering_fraction", "ch_direction"}},
      {"bccp", {"breaks", "n_bins", "contiguize"}},
      {"bootstrap", {"n_bootstrap", "error_type"}},
      {"parametric", {"dist", "pars", "center_at_zero"}},
      {"simulate", {"n_iterations", "split_fraction", "methods", "data", "json"}},
      {"synth", {"n", "noise", "n_groups", "sd", "sds"}},
  };
  return s;
}

class Reader {
 public:
  Reader(const pt::ptree& tree, std::string source) : tree_(tree), source_(std::move(source)) {}

  std::optional<std::string> get(const std::string& section, const std::string& key) const {
    const auto sec = tree_.get_child_optional(section);
    if (!sec) return std::nullopt;
    const auto v = sec->get_optional<std::string>(key);
    if (!v) return std::nullopt;
    auto t = trim(*v);
    if (t.empty()) return std::nullopt;  // an empty value keeps the default
    return t;
  }

  [[noreturn]] void fail(const std::string& section, const std::string& key,
                         const std::string& why) const {
    throw ConfigError(source_ + ": [" + section + "] " + key + ": " + why);
  }

  void string(const std::string& s, const std::string& k, std::string& out) const {
    if (auto v = get(s, k)) out = *v;
  }

  void real(const std::string& s, const std::string& k, double& out) const {
    if (auto v = get(s, k)) {
      const auto d = parse_number(*v);
      if (!d) fail(s, k, "expected a number, got \"" + *v + "\"");
      out = *d;
    }
  }

  template <class Int>
  void integer(const std::string& s, const std::string& k, Int& out) const {
    if (auto v = get(s, k)) {
      try {
        std::size_t used = 0;
        const long long x = std::stoll(*v, &used);
        if (used != v->size()) throw std::invalid_argument("trailing");
        if (x < 0 && std::is_unsigned_v<Int>) throw std::invalid_argument("negative");
        out = static_cast<Int>(x);
      } catch (const std::exception&) {
        fail(s, k, "expected an integer, got \"" + *v + "\"");
      }
    }
  }

  void boolean(const std::string& s, const std::string& k, bool& out) const {
    if (auto v = get(s, k)) {
      if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") {
        out = true;
      } else if (*v == "false" || *v == "0" || *v == "no" || *v == "off") {
        out = false;
      } else {
        fail(s, k, "expected true or false, got \"" + *v + "\"");
      }
    }
  }

  template <class T, class Parse>
  void choice(const std::string& s, const std::string& k, T& out, Parse parse) const {
    if (auto v = get(s, k)) {
      try {
        out = parse(*v);
      } catch (const Error& e) {
        fail(s, k, e.what());
      }
    }
  }

 private:
  const pt::ptree& tree_;
  std::string source_;
};

std::vector<std::string> name_list(const std::string& text) {
  std::vector<std::string> out;
  for (auto& part : split(text, ',')) {
    auto t = trim(part);
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

void SynthSpec::validate() const {
  if (noise != "homoskedastic" && noise != "group-heteroskedastic" &&
      noise != "outcome-dependent") {
    throw ConfigError("[synth] noise must be homoskedastic, group-heteroskedastic or "
                      "outcome-dependent, got \"" + noise + "\"");
  }
  if (n_groups < 1) throw ConfigError("[synth] n_groups must be at least 1");
  if (!(sd >= 0.0) || !std::isfinite(sd)) throw ConfigError("[synth] sd must be non-negative");
  if (sds.empty()) throw ConfigError("[synth] sds must list at least one value");
  for (double s : sds) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw ConfigError("[synth] sds must be non-negative");
  }
}

void RunConfig::validate() const {
  if (std::find(kIntervalMethods.begin(), kIntervalMethods.end(), method) ==
      kIntervalMethods.end()) {
    throw ConfigError("[run] method: unknown method \"" + method + "\"");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("[run] alpha must lie in (0, 1)");
  (void)score_function();
  if (threads < 1) throw ConfigError("[run] threads must be at least 1");
  try {
    weighting.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("[weighting] ") + e.what());
  }
  if (weighting.enabled && columns.features.empty()) {
    throw ConfigError("[weighting] enabled needs [data] feature_cols");
  }
  if (n_clusters && *n_clusters < 1) throw ConfigError("[ccp] n_clusters must be at least 1");
  if (optimize_n_clusters && !n_clusters && max_n_clusters < 2) {
    throw ConfigError("[ccp] max_n_clusters must be at least 2 when optimizing");
  }
  if (!(clustering_fraction > 0.0 && clustering_fraction <= 1.0)) {
    throw ConfigError("[ccp] clustering_fraction must lie in (0, 1]");
  }
  if (breaks) {
    try {
      BinSpec spec(*breaks);
    } catch (const Error& e) {
      throw ConfigError(std::string("[bccp] breaks: ") + e.what());
    }
  }
  if (n_bins < 1) throw ConfigError("[bccp] n_bins must be at least 1");
  if (n_bootstrap < 1) throw ConfigError("[bootstrap] n_bootstrap must be at least 1");
  if (dist == Distribution::custom) {
    throw ConfigError("[parametric] dist: custom quantile functions are library-only");
  }
  if (simulate.n_iterations < 1) throw ConfigError("[simulate] n_iterations must be at least 1");
  if (!(simulate.split_fraction > 0.0 && simulate.split_fraction < 1.0)) {
    throw ConfigError("[simulate] split_fraction must lie in (0, 1)");
  }
  if (simulate.methods.empty()) throw ConfigError("[simulate] methods must not be empty");
  for (const auto& m : simulate.methods) {
    if (std::find(kSimulateMethods.begin(), kSimulateMethods.end(), m) == kSimulateMethods.end()) {
      throw ConfigError("[simulate] methods: unknown method \"" + m + "\"");
    }
  }
  synth.validate();
}

ScoreFunction RunConfig::score_function() const {
  try {
    const auto kind = parse_score_kind(score);
    if (kind == ScoreKind::custom) {
      throw ConfigError("[run] score: custom scores are library-only");
    }
    return ScoreFunction::of(kind);
  } catch (const Error& e) {
    throw ConfigError(std::string("[run] score: ") + e.what());
  }
}

ParamMap parse_pars(const std::string& text) {
  ParamMap out;
  for (const auto& item : name_list(text)) {
    const auto kv = split(item, ':');
    const auto v = kv.size() == 2 ? parse_number(kv[1]) : std::nullopt;
    if (!v) throw ConfigError("[parametric] pars: expected name:value, got \"" + item + "\"");
    out[trim(kv[0])] = *v;
  }
  return out;
}

std::vector<double> parse_number_list(const std::string& text, const std::string& key) {
  std::vector<double> out;
  for (const auto& item : name_list(text)) {
    const auto v = parse_number(item);
    if (!v) throw ConfigError(key + ": cannot parse \"" + item + "\" as a number");
    out.push_back(*v);
  }
  return out;
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  std::istringstream raw(text);
  std::ostringstream cleaned;
  std::string line;
  while (std::getline(raw, line)) {
    // Comments run from a '#' or ';' at line start or after whitespace.
    for (std::size_t i = 0; i < line.size(); ++i) {
      if ((line[i] == '#' || line[i] == ';') && (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t')) {
        line.erase(i);
        break;
      }
    }
    cleaned << line << '\n';
  }
  pt::ptree tree;
  try {
    std::istringstream in(cleaned.str());
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(source + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  for (const auto& [section, body] : tree) {
    const auto it = schema().find(section);
    if (it == schema().end()) {
      if (body.empty() && !body.data().empty()) throw ConfigError(source + ": key \"" + section + "\" outside a section");
      throw ConfigError(source + ": unknown section [" + section + "]");
    }
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) {
        throw ConfigError(source + ": unknown key \"" + key + "\" in [" + section + "]");
      }
    }
  }

  const Reader r(tree, source);
  RunConfig c;
  r.string("run", "method", c.method);
  r.real("run", "alpha", c.alpha);
  r.string("run", "score", c.score);
  r.integer("run", "seed", c.seed);
  r.integer("run", "threads", c.threads);

  r.string("data", "pred_col", c.columns.pred);
  r.string("data", "truth_col", c.columns.truth);
  r.string("data", "group_col", c.columns.group);
  r.string("data", "bin_col", c.columns.bin);
  if (auto v = r.get("data", "feature_cols")) c.columns.features = name_list(*v);

  r.boolean("weighting", "enabled", c.weighting.enabled);
  r.choice("weighting", "distance_type", c.weighting.distance_type, parse_distance_type);
  r.choice("weighting", "normalize", c.weighting.normalize, parse_normalization);
  r.choice("weighting", "kernel", c.weighting.kernel, parse_kernel);
  r.real("weighting", "ridge", c.weighting.ridge);
  if (auto v = r.get("weighting", "test_mass")) {
    if (*v == "max_weight") {
      c.weighting.test_mass = TestPointMass::max_weight;
    } else if (*v == "unit") {
      c.weighting.test_mass = TestPointMass::unit;
    } else {
      r.fail("weighting", "test_mass", "expected max_weight or unit");
    }
  }
  if (c.weighting.kernel == Kernel::custom) {
    r.fail("weighting", "kernel", "custom kernels are library-only");
  }

  if (auto v = r.get("ccp", "n_clusters")) {
    int n = 0;
    r.integer("ccp", "n_clusters", n);
    c.n_clusters = n;
  }
  r.boolean("ccp", "optimize", c.optimize_n_clusters);
  r.integer("ccp", "max_n_clusters", c.max_n_clusters);
  r.real("ccp", "clustering_fraction", c.clustering_fraction);
  if (auto v = r.get("ccp", "ch_direction")) {
    if (*v == "maximize") {
      c.ch_direction = ChDirection::maximize;
    } else if (*v == "minimize") {
      c.ch_direction = ChDirection::minimize;
    } else {
      r.fail("ccp", "ch_direction", "expected maximize or minimize");
    }
  }

  if (auto v = r.get("bccp", "breaks")) c.breaks = parse_number_list(*v, "[bccp] breaks");
  r.integer("bccp", "n_bins", c.n_bins);
  r.boolean("bccp", "contiguize", c.contiguize);

  r.integer("bootstrap", "n_bootstrap", c.n_bootstrap);
  r.choice("bootstrap", "error_type", c.error_type, parse_bootstrap_error_type);

  r.choice("parametric", "dist", c.dist, parse_distribution);
  if (auto v = r.get("parametric", "pars")) c.pars = parse_pars(*v);
  r.boolean("parametric", "center_at_zero", c.center_at_zero);

  r.integer("simulate", "n_iterations", c.simulate.n_iterations);
  r.real("simulate", "split_fraction", c.simulate.split_fraction);
  if (auto v = r.get("simulate", "methods")) c.simulate.methods = name_list(*v);
  if (auto v = r.get("simulate", "data")) c.simulate.data = *v;
  r.boolean("simulate", "json", c.simulate.json);

  r.integer("synth", "n", c.synth.n);
  r.string("synth", "noise", c.synth.noise);
  r.integer("synth", "n_groups", c.synth.n_groups);
  r.real("synth", "sd", c.synth.sd);
  if (auto v = r.get("synth", "sds")) c.synth.sds = parse_number_list(*v, "[synth] sds");
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config \"" + path + "\"");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path);
}

}  // namespace pintervals::cli

#include <cmath>
#include <sstream>
#include <filesystem>
#include <ostream>

#include <nlohmann/json.hpp>

#include "pintervals/evaluation.hpp"
#include "pintervals_cli/commands.hpp"
#include "pintervals_cli/interval_io.hpp"
#include "report_common.hpp"

namespace pintervals::cli {

int cmd_evaluate(const EvaluateOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!(opt.alpha > 0.0 && opt.alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
    if (opt.intervals_path.empty()) throw ConfigError("an intervals file is required (--intervals)");
    if (opt.truth_path.empty()) throw ConfigError("a truth file is required (--truth)");

    const auto icsv = read_csv(opt.intervals_path);
    const auto table = interval_table_from_csv(icsv, opt.intervals_path);
    const auto tcsv = read_csv(opt.truth_path);
    if (tcsv.rows.size() != table.size()) {
      throw DataError("row count mismatch: " + opt.intervals_path + " has " +
                      std::to_string(table.size()) + " rows, " + opt.truth_path + " has " +
                      std::to_string(tcsv.rows.size()));
    }
    const auto tcol = tcsv.require(opt.truth_col, opt.truth_path);
    std::vector<double> truth;
    truth.reserve(tcsv.rows.size());
    for (std::size_t r = 0; r < tcsv.rows.size(); ++r) {
      truth.push_back(number_cell(tcsv, r, tcol, opt.truth_path));
    }
    const ConfidenceLevel alpha(opt.alpha);

    std::vector<std::pair<std::string, CoverageReport>> scopes;
    scopes.emplace_back("overall", coverage_report(truth, table, alpha));
    for (const auto& col : opt.group_by) {
      const CsvTable* src = &icsv;
      auto idx = icsv.find(col);
      if (!idx) {
        src = &tcsv;
        idx = tcsv.find(col);
      }
      if (!idx) {
        throw DataError("group_by column \"" + col + "\" is in neither " + opt.intervals_path +
                        " nor " + opt.truth_path);
      }
      std::vector<std::string> keys;
      keys.reserve(src->rows.size());
      for (const auto& row : src->rows) keys.push_back(row[*idx]);
      scopes.emplace_back(col, coverage_report(truth, table, alpha, std::span<const std::string>(keys)));
    }

    // Text report.
    const auto& overall = scopes.front().second;
    std::ostringstream text;
    write_text_table(text, {{"rows", std::to_string(overall.n)},
                            {"covered", std::to_string(overall.covered)},
                            {"coverage", format_short(overall.coverage)},
                            {"mean_width", format_short(overall.width.mean)},
                            {"finite_mean_width", format_short(overall.width.finite_mean)},
                            {"unbounded_rows", std::to_string(overall.width.n_unbounded)}});
    for (std::size_t s = 1; s < scopes.size(); ++s) {
      const auto& [name, rep] = scopes[s];
      text << "\nby " << name << '\n';
      std::vector<std::vector<std::string>> rows{{name, "n", "covered", "coverage", "mean_width"}};
      for (const auto& [key, k] : rep.by_key) {
        rows.push_back({key, std::to_string(k.n), std::to_string(k.covered), format_short(k.coverage),
                        format_short(k.mean_width)});
      }
      write_text_table(text, rows);
      if (rep.mae) text << "mae_coverage  " << format_short(*rep.mae) << '\n';
    }
    out << text.str();

    if (opt.out_dir) {
      const std::filesystem::path dir(*opt.out_dir);
      std::filesystem::create_directories(dir);
      {
        auto csv = open_output(dir / "evaluation.csv");
        write_csv_row(csv, {"scope", "key", "n", "covered", "coverage", "mean_width", "mae"});
        write_csv_row(csv, {"overall", "", std::to_string(overall.n), std::to_string(overall.covered),
                            format_number(overall.coverage), format_number(overall.width.mean), ""});
        for (std::size_t s = 1; s < scopes.size(); ++s) {
          const auto& [name, rep] = scopes[s];
          for (const auto& [key, k] : rep.by_key) {
            write_csv_row(csv, {name, key, std::to_string(k.n), std::to_string(k.covered),
                                format_number(k.coverage), format_number(k.mean_width), ""});
          }
          write_csv_row(csv, {name, "*", std::to_string(rep.n), std::to_string(rep.covered),
                              format_number(rep.coverage), format_number(rep.width.mean),
                              rep.mae ? format_number(*rep.mae) : ""});
        }
      }
      auto txt = open_output(dir / "evaluation.txt");
      txt << text.str();
      if (opt.json) {
        nlohmann::json j;
        j["alpha"] = opt.alpha;
        j["n"] = overall.n;
        j["covered"] = overall.covered;
        j["coverage"] = number_json(overall.coverage);
        j["mean_width"] = number_json(overall.width.mean);
        j["finite_mean_width"] = number_json(overall.width.finite_mean);
        j["unbounded_rows"] = overall.width.n_unbounded;
        for (std::size_t s = 1; s < scopes.size(); ++s) {
          const auto& [name, rep] = scopes[s];
          auto& g = j["by"][name];
          for (const auto& [key, k] : rep.by_key) {
            g["groups"][key] = {{"n", k.n},
                                {"covered", k.covered},
                                {"coverage", number_json(k.coverage)},
                                {"mean_width", number_json(k.mean_width)}};
          }
          if (rep.mae) g["mae"] = *rep.mae;
        }
        auto js = open_output(dir / "evaluation.json");
        js << j.dump(2) << '\n';
      }
    }
    return kExitOk;
  });
}

}  // namespace pintervals::cli

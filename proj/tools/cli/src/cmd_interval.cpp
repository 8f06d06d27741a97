#include <fstream>
#include <ostream>

#include "pintervals/error.hpp"
#include "pintervals_cli/commands.hpp"
#include "pintervals_cli/dataset.hpp"
#include "pintervals_cli/errors.hpp"
#include "pintervals_cli/interval_io.hpp"
#include "pintervals_cli/methods.hpp"
#include "report_common.hpp"

namespace pintervals::cli {

int cmd_interval(const RunConfig& cfg, const std::string& calib_path, const std::string& test_path,
                 const std::string& out_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    cfg.validate();
    const bool grouped = cfg.method == "mondrian" || cfg.method == "ccp";
    const Requirements need_calib{true, grouped, cfg.weighting.enabled};
    const Requirements need_test{false, grouped, cfg.weighting.enabled};

    std::optional<Dataset> calib;
    if (!calib_path.empty()) {
      calib = load_dataset(calib_path, cfg.columns, need_calib);
    } else if (needs_calibration(cfg)) {
      throw ConfigError("method " + cfg.method + " needs a calibration file (--calib)");
    }
    if (test_path.empty()) throw ConfigError("a test file is required (--test)");
    const auto test = load_dataset(test_path, cfg.columns, need_test);

    const auto table = run_method(cfg, calib, test, cfg.seed);
    for (const auto& w : table.warnings) {
      err << "warning[" << w.code << "]: " << w.message << '\n';
    }
    if (out_path.empty() || out_path == "-") {
      write_interval_table(out, table);
    } else {
      write_interval_table(out_path, table);
    }
    return kExitOk;
  });
}

}  // namespace pintervals::cli

#include <cmath>
#include <numbers>
#include <ostream>

#include "pintervals/rng.hpp"
#include "pintervals_cli/commands.hpp"
#include "report_common.hpp"

namespace pintervals::cli {

namespace {

// Stream id for the synthetic generator, distinct from per-row seeds elsewhere.
constexpr std::uint64_t kSynthStream = 0x5e17;

}  // namespace

CsvTable synthesize(const SynthSpec& spec, std::uint64_t seed) {
  spec.validate();
  CsvTable t;
  t.header = {"pred", "truth", "group", "lat", "lon"};
  t.rows.reserve(spec.n);
  auto eng = make_engine(seed, kSynthStream);
  const auto k = static_cast<std::size_t>(spec.n_groups);
  for (std::size_t i = 0; i < spec.n; ++i) {
    // Fixed draw order per row keeps the stream layout independent of the noise model.
    const std::size_t g = uniform_index(eng, k);
    const double pred = 5.0 + 2.0 * standard_normal(eng);
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(g) / static_cast<double>(k);
    const double lat = 10.0 * std::cos(angle) + 0.5 * standard_normal(eng);
    const double lon = 10.0 * std::sin(angle) + 0.5 * standard_normal(eng);
    const double z = standard_normal(eng);
    double sd = spec.sd;
    if (spec.noise == "group-heteroskedastic") {
      sd = spec.sds[g % spec.sds.size()];
    } else if (spec.noise == "outcome-dependent") {
      sd = 0.5 + 0.5 * std::abs(pred - 5.0);
    }
    const double truth = sd == 0.0 ? pred : pred + sd * z;
    t.rows.push_back({format_number(pred), format_number(truth), "g" + std::to_string(g + 1),
                      format_number(lat), format_number(lon)});
  }
  return t;
}

int cmd_synth(const SynthSpec& spec, std::uint64_t seed, const std::string& out_path,
              std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto t = synthesize(spec, seed);
    auto emit = [&](std::ostream& o) {
      write_csv_row(o, t.header);
      for (const auto& r : t.rows) write_csv_row(o, r);
    };
    if (out_path.empty() || out_path == "-") {
      emit(out);
    } else {
      auto f = open_output(out_path);
      emit(f);
    }
    return kExitOk;
  });
}

}  // namespace pintervals::cli

#pragma once

// Internal helpers shared by the command implementations.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pintervals/error.hpp"
#include "pintervals_cli/csv.hpp"
#include "pintervals_cli/errors.hpp"

namespace pintervals::cli {

/// Runs `body`, translating exceptions into messages and exit codes.
template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "unexpected error: " << e.what() << '\n';
    return kExitUnexpected;
  }
}

inline std::ofstream open_output(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw DataError("cannot write \"" + p.string() + "\"");
  return out;
}

/// Left-aligned first column, right-aligned rest, two spaces between columns.
/// JSON has no infinity or NaN; non-finite values are written as strings.
inline nlohmann::json number_json(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

inline void write_text_table(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
  if (rows.empty()) return;
  std::vector<std::size_t> width(rows.front().size(), 0);
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size() && i < width.size(); ++i) {
      width[i] = std::max(width[i], r[i].size());
    }
  }
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t i = 0; i < r.size(); ++i) {
      const auto pad = std::string(width[i] - r[i].size(), ' ');
      if (i > 0) line += "  ";
      line += i == 0 ? r[i] + pad : pad + r[i];
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  }
}

}  // namespace pintervals::cli

#include "pintervals/evaluation.hpp"

#include <cmath>
#include <limits>

#include "pintervals/error.hpp"

namespace pintervals {

namespace {

void check_lengths(std::span<const double> truth, const IntervalTable& table) {
  if (truth.size() != table.size()) {
    throw Error(Errc::length_mismatch, "got " + std::to_string(truth.size()) + " truths for " +
                                           std::to_string(table.size()) + " interval rows");
  }
}

}  // namespace

double interval_coverage(std::span<const double> truth, const IntervalTable& table) {
  check_lengths(truth, table);
  if (table.size() == 0) return std::numeric_limits<double>::quiet_NaN();
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += table.rows[i].contains(truth[i]) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

WidthSummary mean_width(const IntervalTable& table) {
  WidthSummary out;
  double finite_total = 0.0;
  std::size_t finite_n = 0;
  for (const auto& row : table.rows) {
    const double w = row.width();
    if (std::isfinite(w)) {
      finite_total += w;
      ++finite_n;
    } else {
      ++out.n_unbounded;
    }
  }
  out.finite_mean = finite_n > 0 ? finite_total / static_cast<double>(finite_n)
                                 : std::numeric_limits<double>::quiet_NaN();
  if (out.n_unbounded > 0) {
    out.mean = kInf;
  } else {
    out.mean = table.size() > 0 ? out.finite_mean : std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

double mae_coverage(const std::map<std::string, double>& coverages, ConfidenceLevel alpha) {
  if (coverages.empty()) throw Error(Errc::invalid_argument, "no coverages to summarize");
  double total = 0.0;
  for (const auto& [key, c] : coverages) total += std::abs(c - alpha.coverage());
  return total / static_cast<double>(coverages.size());
}

CoverageReport coverage_report(std::span<const double> truth, const IntervalTable& table,
                               ConfidenceLevel alpha,
                               std::optional<std::span<const std::string>> keys) {
  check_lengths(truth, table);
  if (keys && keys->size() != truth.size()) {
    throw Error(Errc::length_mismatch, "coverage keys must have one entry per row");
  }
  CoverageReport report;
  report.n = truth.size();
  std::map<std::string, double> width_sum;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool hit = table.rows[i].contains(truth[i]);
    report.covered += hit ? 1 : 0;
    if (keys) {
      auto& k = report.by_key[(*keys)[i]];
      ++k.n;
      k.covered += hit ? 1 : 0;
      width_sum[(*keys)[i]] += table.rows[i].width();
    }
  }
  report.coverage = report.n > 0 ? static_cast<double>(report.covered) / static_cast<double>(report.n)
                                 : std::numeric_limits<double>::quiet_NaN();
  report.width = mean_width(table);
  if (keys) {
    std::map<std::string, double> cov;
    for (auto& [key, k] : report.by_key) {
      k.coverage = static_cast<double>(k.covered) / static_cast<double>(k.n);
      k.mean_width = width_sum[key] / static_cast<double>(k.n);
      cov[key] = k.coverage;
    }
    if (!cov.empty()) report.mae = mae_coverage(cov, alpha);
  }
  return report;
}

}  // namespace pintervals

#include "pintervals_cli/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pintervals/quantile.hpp"
#include "pintervals_cli/errors.hpp"

namespace pintervals::cli {

CalibrationSet Dataset::calibration() const {
  if (!truths) throw DataError("calibration data needs a truth column");
  CalibrationSet c;
  c.preds = preds;
  c.truths = *truths;
  c.groups = groups;
  c.bins = bins;
  c.features = features;
  return c;
}

PredictionSet Dataset::prediction() const {
  PredictionSet p;
  p.preds = preds;
  p.groups = groups;
  p.features = features;
  return p;
}

Dataset Dataset::subset(const std::vector<std::size_t>& rows) const {
  Dataset d;
  for (auto r : rows) d.preds.push_back(preds[r]);
  if (truths) {
    d.truths.emplace();
    for (auto r : rows) d.truths->push_back((*truths)[r]);
  }
  if (groups) {
    d.groups.emplace();
    for (auto r : rows) d.groups->push_back((*groups)[r]);
  }
  if (bins) {
    d.bins.emplace();
    for (auto r : rows) d.bins->push_back((*bins)[r]);
  }
  if (features) {
    Matrix m(static_cast<Eigen::Index>(rows.size()), features->cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      m.row(static_cast<Eigen::Index>(i)) = features->row(static_cast<Eigen::Index>(rows[i]));
    }
    d.features = std::move(m);
  }
  return d;
}

namespace {

std::vector<double> finite_column(const CsvTable& t, std::size_t col, const std::string& source) {
  std::vector<double> out;
  out.reserve(t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const double v = number_cell(t, r, col, source);
    if (!std::isfinite(v)) {
      throw DataError(source + ": row " + std::to_string(r + 1) + ", column \"" + t.header[col] +
                      "\": value must be finite");
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace

Dataset dataset_from_table(const CsvTable& t, const DataColumns& columns, Requirements need,
                           const std::string& source) {
  Dataset d;
  d.preds = finite_column(t, t.require(columns.pred, source), source);
  if (auto c = t.find(columns.truth)) {
    d.truths = finite_column(t, *c, source);
  } else if (need.truth) {
    (void)t.require(columns.truth, source);
  }
  if (auto c = t.find(columns.group)) {
    d.groups.emplace();
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      auto label = trim(t.rows[r][*c]);
      if (label.empty()) {
        throw DataError(source + ": row " + std::to_string(r + 1) + ", column \"" + columns.group +
                        "\": empty group label");
      }
      d.groups->push_back(std::move(label));
    }
  } else if (need.groups) {
    (void)t.require(columns.group, source);
  }
  if (!columns.bin.empty()) {
    if (auto c = t.find(columns.bin)) {
      d.bins.emplace();
      for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const double v = number_cell(t, r, *c, source);
        if (v != std::floor(v) || v < 1) {
          throw DataError(source + ": row " + std::to_string(r + 1) + ", column \"" + columns.bin +
                          "\": bin labels must be positive integers");
        }
        d.bins->push_back(static_cast<int>(v));
      }
    }
  }
  if (!columns.features.empty()) {
    Matrix m(static_cast<Eigen::Index>(t.rows.size()),
             static_cast<Eigen::Index>(columns.features.size()));
    for (std::size_t j = 0; j < columns.features.size(); ++j) {
      const auto col = t.require(columns.features[j], source);
      const auto v = finite_column(t, col, source);
      for (std::size_t r = 0; r < v.size(); ++r) {
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = v[r];
      }
    }
    d.features = std::move(m);
  } else if (need.features) {
    throw DataError(source + ": distance weighting needs feature columns ([data] feature_cols)");
  }
  return d;
}

Dataset load_dataset(const std::string& path, const DataColumns& columns, Requirements need) {
  return dataset_from_table(read_csv(path), columns, need, path);
}

std::vector<double> balanced_breaks(const std::vector<double>& values, int n_bins) {
  std::vector<double> breaks{-std::numeric_limits<double>::infinity()};
  for (int t = 1; t < n_bins; ++t) {
    const double q = empirical_quantile(values, static_cast<double>(t) / n_bins);
    // A break equal to the previous one (or to the minimum) would leave an empty bin.
    if (q > breaks.back() && q > *std::min_element(values.begin(), values.end())) {
      breaks.push_back(q);
    }
  }
  breaks.push_back(std::numeric_limits<double>::infinity());
  return breaks;
}

}  // namespace pintervals::cli

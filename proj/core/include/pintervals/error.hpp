#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pintervals {

enum class Errc {
  invalid_argument,
  length_mismatch,
  empty_calibration,
  invalid_score,
  unsupported_inversion,
  degenerate_weights,
  invalid_weights,
  singular_covariance,
  unknown_group,
  invalid_cluster_count,
  undefined_index,
  empty_bin,
  out_of_range,
  domain_error,
  degenerate_distribution,
  underdispersion,
  ambiguous_parameters,
  missing_parameters,
};

std::string_view to_string(Errc code) noexcept;

/// Exception type thrown by every operation in the library. The code is
/// stable and meant for programmatic dispatch; the message names the
/// offending value, index, group or bin.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  [[nodiscard]] Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace pintervals

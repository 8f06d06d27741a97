#include "pintervals/error.hpp"

namespace pintervals {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::length_mismatch: return "length-mismatch";
    case Errc::empty_calibration: return "empty-calibration";
    case Errc::invalid_score: return "invalid-score";
    case Errc::unsupported_inversion: return "unsupported-inversion";
    case Errc::degenerate_weights: return "degenerate-weights";
    case Errc::invalid_weights: return "invalid-weights";
    case Errc::singular_covariance: return "singular-covariance";
    case Errc::unknown_group: return "unknown-group";
    case Errc::invalid_cluster_count: return "invalid-cluster-count";
    case Errc::undefined_index: return "undefined-index";
    case Errc::empty_bin: return "empty-bin";
    case Errc::out_of_range: return "out-of-range";
    case Errc::domain_error: return "domain-error";
    case Errc::degenerate_distribution: return "degenerate-distribution";
    case Errc::underdispersion: return "underdispersion";
    case Errc::ambiguous_parameters: return "ambiguous-parameters";
    case Errc::missing_parameters: return "missing-parameters";
  }
  return "unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace pintervals

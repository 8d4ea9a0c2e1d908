#pragma once

#include <stdexcept>
#include <string>

namespace etrc {

/// Machine-readable failure categories. Every exception thrown by the
/// library carries exactly one of these, and the CLI maps them onto its
/// exit diagnostics, so scripted callers never have to parse prose.
enum class ErrorCategory {
  // linear algebra
  InvalidMatrix,        ///< non-finite entries or unusable shape
  NotSymmetric,         ///< asymmetry beyond tolerance where symmetry is required
  RankDeficient,        ///< matrix does not have the required full rank
  // uncertainty handling
  VerificationFailed,   ///< a supplied bound matrix is violated on the grid
  NotPositiveDefinite,  ///< a matrix that must be PD is not
  DegenerateThreshold,  ///< trigger threshold denominator is numerically zero
  // Riccati synthesis
  NotStabilizable,      ///< no stabilizing solution could be certified
  IndefiniteWeights,    ///< Q not PSD or R not PD
  RobustnessCheckFailed,///< grid decrease certification failed after synthesis
  HypothesisViolated,   ///< post-synthesis definiteness hypothesis fails
  // inter-event-time bounds
  InvalidConstants,     ///< nonpositive / inconsistent bound constants
  // simulation
  Diverged,             ///< state norm exceeded the divergence guard
  TooFewEvents,         ///< metrics need at least two events
  // scenario I/O
  ParseError,           ///< malformed scenario text
  ValidationError,      ///< well-formed but inconsistent configuration
  IoError,              ///< file could not be read or written
  // front end
  UnknownPreset,        ///< scenario name is neither a preset nor a file
  CertificateFailed,    ///< a run-level certificate (e.g. ISS decrease) failed
};

/// Stable identifier string for a category (used in CLI error output).
const char* to_string(ErrorCategory category);

/// Library-wide exception type: a category plus a human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& detail)
      : std::runtime_error(std::string(to_string(category)) + ": " + detail),
        category_(category),
        detail_(detail) {}

  ErrorCategory category() const noexcept { return category_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCategory category_;
  std::string detail_;
};

inline const char* to_string(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::InvalidMatrix: return "InvalidMatrix";
    case ErrorCategory::NotSymmetric: return "NotSymmetric";
    case ErrorCategory::RankDeficient: return "RankDeficient";
    case ErrorCategory::VerificationFailed: return "VerificationFailed";
    case ErrorCategory::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCategory::DegenerateThreshold: return "DegenerateThreshold";
    case ErrorCategory::NotStabilizable: return "NotStabilizable";
    case ErrorCategory::IndefiniteWeights: return "IndefiniteWeights";
    case ErrorCategory::RobustnessCheckFailed: return "RobustnessCheckFailed";
    case ErrorCategory::HypothesisViolated: return "HypothesisViolated";
    case ErrorCategory::InvalidConstants: return "InvalidConstants";
    case ErrorCategory::Diverged: return "Diverged";
    case ErrorCategory::TooFewEvents: return "TooFewEvents";
    case ErrorCategory::ParseError: return "ParseError";
    case ErrorCategory::ValidationError: return "ValidationError";
    case ErrorCategory::IoError: return "IoError";
    case ErrorCategory::UnknownPreset: return "UnknownPreset";
    case ErrorCategory::CertificateFailed: return "CertificateFailed";
  }
  return "UnknownError";
}

}  // namespace etrc

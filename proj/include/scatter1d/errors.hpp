#pragma once

#include <stdexcept>
#include <string>

namespace scatter1d {

enum class ErrorCode {
  InvalidArgument,
  MismatchedWavenumber,
  SingularMatrix,
  SpectralSingularityProximity,
  VanishingDeterminantS,
  NonReciprocal,
  NotUnimodular,
  NotASingularity,
  NotConverged,
  Validation,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when |M22| falls under the configured floor: r and t diverge there.
class SpectralSingularityProximity : public Error {
 public:
  SpectralSingularityProximity(double abs_m22, double floor);

  double abs_m22() const noexcept { return abs_m22_; }
  double floor() const noexcept { return floor_; }

 private:
  double abs_m22_;
  double floor_;
};

/// Iterative solver gave up; carries the last iterate so callers can report it.
class NotConverged : public Error {
 public:
  NotConverged(const std::string& what, double last_residual)
      : Error(ErrorCode::NotConverged, what), last_residual_(last_residual) {}

  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

}  // namespace scatter1d

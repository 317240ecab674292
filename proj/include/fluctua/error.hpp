#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fluctua {

enum class ErrorKind {
  domain,       // argument outside the mathematical domain
  divergence,   // integral or quantity diverges, needs a cutoff
  accuracy,     // quadrature did not reach the requested tolerance
  no_solution,  // no sign change in the root bracket
  convergence,  // iteration limit hit
  unphysical,   // parameters drive T*_c <= 0 and similar
  stability,    // renormalized quartic coefficient not positive
  calibration,
  fit,
  unsupported,
  validation,
  io,
};

constexpr std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::domain: return "domain_error";
    case ErrorKind::divergence: return "divergence_error";
    case ErrorKind::accuracy: return "accuracy_error";
    case ErrorKind::no_solution: return "no_solution_error";
    case ErrorKind::convergence: return "convergence_error";
    case ErrorKind::unphysical: return "unphysical_parameters_error";
    case ErrorKind::stability: return "stability_error";
    case ErrorKind::calibration: return "calibration_error";
    case ErrorKind::fit: return "fit_error";
    case ErrorKind::unsupported: return "unsupported_dimension_error";
    case ErrorKind::validation: return "validation_error";
    case ErrorKind::io: return "io_error";
  }
  return "unknown_error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Thrown by the quadrature engine; carries the best estimate reached.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double estimate, double error_estimate)
      : Error(ErrorKind::accuracy, what),
        estimate_(estimate),
        error_estimate_(error_estimate) {}

  double estimate() const noexcept { return estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double estimate_;
  double error_estimate_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace fluctua

#pragma once
#include <stdexcept>
#include <string>

namespace vacblow {

/// Parameter outside its admissible domain (gamma, mu, y < 0, ...).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct IndexError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

/// Root finder / integrator / extrapolation failed to converge.
struct NumericalError : std::runtime_error {
  double last_lo = 0.0, last_hi = 0.0;
  NumericalError(const std::string& what, double lo = 0.0, double hi = 0.0)
      : std::runtime_error(what), last_lo(lo), last_hi(hi) {}
};

/// Derivative requested where it is unbounded.
struct SingularityError : std::domain_error {
  using std::domain_error::domain_error;
};

struct SpectralDomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct FitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExtractionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Time step rejected by the CFL check; carries the largest admissible dt.
struct CflError : std::runtime_error {
  double required_dt;
  CflError(const std::string& what, double dt) : std::runtime_error(what), required_dt(dt) {}
};

}  // namespace vacblow

#pragma once

#include <stdexcept>
#include <string>

namespace geoflow {

/// Precondition violated by the caller (bad sizes, mismatched grids, ...).
class InvalidArgument : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not produce a trustworthy result.
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A map left the orientation-preserving diffeomorphism group at this resolution.
class DiffeoError : public NumericalError {
  public:
    DiffeoError(const std::string& what, double min_derivative)
        : NumericalError(what), min_derivative_(min_derivative) {}
    double min_derivative() const noexcept { return min_derivative_; }

  private:
    double min_derivative_;
};

/// Time stepping stopped: the Lagrangian map is about to fold, or the state blew up.
class ShockDetected : public NumericalError {
  public:
    ShockDetected(const std::string& what, double time, double min_derivative)
        : NumericalError(what), time_(time), min_derivative_(min_derivative) {}
    double time() const noexcept { return time_; }
    double min_derivative() const noexcept { return min_derivative_; }

  private:
    double time_;
    double min_derivative_;
};

} // namespace geoflow

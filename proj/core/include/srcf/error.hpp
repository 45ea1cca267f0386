#pragma once

#include <stdexcept>
#include <string>

namespace srcf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an integrand returns NaN or Inf at a sigma point.
class NonFiniteIntegrand : public Error {
 public:
  using Error::Error;
};

/// A covariance could not be conditioned into a factorizable matrix, or the
/// innovation covariance was singular. `step()` is the filter step index
/// (0-based) when known, -1 otherwise.
class DivergenceError : public Error {
 public:
  explicit DivergenceError(const std::string& what, long step = -1)
      : Error(what), step_(step) {}

  long step() const noexcept { return step_; }

 private:
  long step_;
};

}  // namespace srcf

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace gausskey {

enum class ErrorKind {
  Domain,                 // argument outside its mathematical domain
  Validity,               // covariance matrix is not a physical state
  Numeric,                // floating-point breakdown beyond the allowed clamps
  UnsupportedClass,       // tau = 1 (classes B1/B2)
  UnsupportedDilation,    // dilation requested for A1 or D
  DegenerateMeasurement,  // homodyne on a (near) zero-variance quadrature
  EmptyStatistics,        // simulation kept no rounds
};

/// Library-wide exception. `parameter()` names the offending input (e.g.
/// "tau", "mu") so front ends can map it back to a flag.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string parameter, const std::string& message)
      : std::runtime_error(message), kind_(kind), parameter_(std::move(parameter)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& parameter() const noexcept { return parameter_; }

 private:
  ErrorKind kind_;
  std::string parameter_;
};

}  // namespace gausskey

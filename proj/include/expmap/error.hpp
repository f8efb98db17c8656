#pragma once

#include <stdexcept>
#include <string>

namespace expmap {

/// Malformed input: arity or dimension mismatch, out-of-range order, bad config.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A point left the chart domain of a manifold model.
class ChartDomainError : public std::domain_error {
 public:
  explicit ChartDomainError(const std::string& what, double exit_time = 0.0)
      : std::domain_error(what), exit_time_(exit_time) {}

  /// Integration time at which the trajectory left the chart (0 for a bare point).
  double exit_time() const noexcept { return exit_time_; }

 private:
  double exit_time_;
};

}  // namespace expmap

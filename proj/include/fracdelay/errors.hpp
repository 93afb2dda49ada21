#pragma once

#include <stdexcept>
#include <string>

namespace fracdelay {

/// Parameter outside the domain an operation is defined on (bad alpha, tau < 1, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not deliver a result that meets its contract.
class ComputationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RefinementBudgetExceeded : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

/// Winding number requested for a point that sits on the sampled boundary.
class PointOnCurve : public ComputationError {
 public:
  PointOnCurve(double distance)
      : ComputationError("point lies on the boundary curve (distance " + std::to_string(distance) + ")"),
        distance_(distance) {}
  double distance() const noexcept { return distance_; }

 private:
  double distance_;
};

class BranchError : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

}  // namespace fracdelay

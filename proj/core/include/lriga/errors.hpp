#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace lriga {

/// Input violates a documented precondition (bad knots, bad shapes, bad files).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Evaluation point outside the parameter domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A dense materialization was refused because it exceeds the configured cap.
class SizeCapError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// The geometry Jacobian is singular at a parameter point.
class SingularJacobianError : public std::runtime_error {
 public:
  SingularJacobianError(const std::string& what, std::vector<double> point)
      : std::runtime_error(what), point_(std::move(point)) {}

  [[nodiscard]] const std::vector<double>& point() const noexcept { return point_; }

 private:
  std::vector<double> point_;
};

/// A linear system (collocation factor or projected KKT system) cannot be solved reliably.
class SingularSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lriga

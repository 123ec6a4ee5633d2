#pragma once

// Preconditioned MINRES for symmetric (possibly indefinite) systems.

#include <functional>

#include <Eigen/Dense>

namespace lriga {

struct MinresResult {
  Eigen::VectorXd x;
  int iterations = 0;
  /// Preconditioned residual norm relative to the initial one.
  double relative_residual = 0.0;
  bool converged = false;
};

using LinearMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Solves A x = b. `precond` applies the inverse of a symmetric positive definite preconditioner;
/// an empty function means no preconditioning.
[[nodiscard]] MinresResult minres(const LinearMap& a, const Eigen::VectorXd& b, const LinearMap& precond,
                                  const Eigen::VectorXd& x0, double tol, int maxit);

}  // namespace lriga

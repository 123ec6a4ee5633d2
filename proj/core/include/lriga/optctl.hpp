#pragma once

// Parabolic optimal control with implicit Euler in time: the all-at-once KKT system in
// Kronecker form over (time, x_1, ..., x_D).

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "lriga/assembly.hpp"
#include "lriga/block_tt.hpp"
#include "lriga/kronecker.hpp"
#include "lriga/tt.hpp"

namespace lriga {

struct TimeMatrices {
  Eigen::MatrixXd identity;
  /// Lower bidiagonal: 1 on the diagonal, -1 below.
  Eigen::MatrixXd c;
};

[[nodiscard]] TimeMatrices build_time_matrices(std::size_t steps);

/// Block operator over L components: block (row, col) = sum of scale * ops[op] over its entries.
struct BlockOperator {
  struct Entry {
    std::size_t row = 0;
    std::size_t col = 0;
    std::size_t op = 0;
    double scale = 1.0;
  };

  std::size_t components = 0;
  std::vector<KroneckerSum> ops;
  std::vector<Entry> entries;

  [[nodiscard]] std::vector<std::size_t> dims() const;
  /// Block (row, col) as one Kronecker sum.
  [[nodiscard]] KroneckerSum block(std::size_t row, std::size_t col) const;
  /// Stacked dense product, component blocks in order.
  [[nodiscard]] Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  /// Row blocks of A x in TT format, rounded to tol.
  [[nodiscard]] std::vector<TtTensor> apply(const std::vector<TtTensor>& x, double tol) const;
  [[nodiscard]] SparseRowMatrix to_sparse(std::size_t row_cap = kDefaultDenseRowCap) const;
};

struct ControlProblem {
  double horizon = 1.0;
  std::size_t steps = 10;
  double beta = 1e-2;
  /// Over the interior spatial dims (constant in time) or over (steps, interior dims).
  TtTensor desired_state;
  OperatorLR operators;

  [[nodiscard]] double tau() const { return horizon / static_cast<double>(steps); }
  /// Throws ValidationError on inconsistent fields.
  void validate() const;
  /// Desired state over (steps, interior dims); a spatial one is broadcast at rank 1 in time.
  [[nodiscard]] TtTensor desired_state_space_time() const;
};

/// KKT system with blocks [[tau M, 0, K^T], [0, tau beta M, -tau M], [K, -tau M, 0]],
/// M = I (x) M_h and K = I (x) tau K_h + C (x) M_h.
struct KktSystem {
  BlockOperator op;
  KroneckerSum mass_st;
  KroneckerSum stiff_st;
  /// Right-hand side components (tau M y_hat, 0, 0).
  std::vector<TtTensor> rhs;

  [[nodiscard]] BlockTt rhs_block() const;
};

[[nodiscard]] KktSystem build_kkt(const ControlProblem& problem);

/// |A x - b|_F / |b|_F over the stacked components, in TT arithmetic with rounding at round_tol.
[[nodiscard]] double kkt_residual(const BlockOperator& op, const BlockTt& x, const BlockTt& rhs, double round_tol);

/// Sum over time steps of tau/2 [(y - y_hat)^T M (y - y_hat) + beta u^T M u].
[[nodiscard]] double evaluate_objective(const ControlProblem& problem, const TtTensor& y, const TtTensor& u);

/// sqrt(tau u^T M u): the norm in which the control is regularized.
[[nodiscard]] double control_norm(const ControlProblem& problem, const TtTensor& u);
[[nodiscard]] double control_norm(const ControlProblem& problem, const Eigen::VectorXd& u);

struct DenseKktSolution {
  Eigen::VectorXd y;
  Eigen::VectorXd u;
  Eigen::VectorXd lambda;
};

inline constexpr std::size_t kDenseKktCap = 30000;

/// Materializes the KKT system and solves it by sparse LU. Throws SizeCapError above cap unknowns.
[[nodiscard]] DenseKktSolution dense_kkt_oracle(const ControlProblem& problem, std::size_t cap = kDenseKktCap);

/// Row-major dense vector of a tensor train.
[[nodiscard]] Eigen::VectorXd to_vector(const TtTensor& t);

}  // namespace lriga

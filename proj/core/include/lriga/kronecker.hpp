#pragma once

// Operators stored as sums of Kronecker products of small factor matrices.

#include <cstddef>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "lriga/tt.hpp"

namespace lriga {

using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

inline constexpr std::size_t kDefaultDenseRowCap = 200000;

/// A = sum_t A_{t,1} (x) A_{t,2} (x) ... (x) A_{t,D}, first factor slowest.
class KroneckerSum {
 public:
  KroneckerSum() = default;
  KroneckerSum(std::vector<std::size_t> row_dims, std::vector<std::size_t> col_dims);

  /// Appends a term; every factor must match the per-dimension shapes.
  void add_term(std::vector<Eigen::MatrixXd> factors);

  [[nodiscard]] std::size_t order() const noexcept { return row_dims_.size(); }
  [[nodiscard]] std::size_t term_count() const noexcept { return terms_.size(); }
  [[nodiscard]] const std::vector<std::vector<Eigen::MatrixXd>>& terms() const noexcept { return terms_; }
  [[nodiscard]] const std::vector<Eigen::MatrixXd>& term(std::size_t t) const { return terms_.at(t); }
  [[nodiscard]] const std::vector<std::size_t>& row_dims() const noexcept { return row_dims_; }
  [[nodiscard]] const std::vector<std::size_t>& col_dims() const noexcept { return col_dims_; }
  [[nodiscard]] std::size_t rows() const;
  [[nodiscard]] std::size_t cols() const;

  /// Sum over terms and factors of the number of nonzero factor entries.
  [[nodiscard]] std::size_t storage_nnz() const;

  [[nodiscard]] bool boundary_eliminated() const noexcept { return boundary_eliminated_; }
  void mark_boundary_eliminated() noexcept { boundary_eliminated_ = true; }

  [[nodiscard]] KroneckerSum transposed() const;
  /// Scales every term (through its first factor).
  [[nodiscard]] KroneckerSum scaled(double s) const;
  /// Puts `factor` in front of every term: (factor (x) A_{t,1} (x) ...).
  [[nodiscard]] KroneckerSum prepended(const Eigen::MatrixXd& factor) const;
  /// Drops terms with an all-zero factor.
  [[nodiscard]] KroneckerSum without_zero_terms() const;

  [[nodiscard]] SparseRowMatrix to_sparse(std::size_t row_cap = kDefaultDenseRowCap) const;
  [[nodiscard]] Eigen::MatrixXd to_dense(std::size_t row_cap = 4096) const;

 private:
  std::vector<std::size_t> row_dims_;
  std::vector<std::size_t> col_dims_;
  std::vector<std::vector<Eigen::MatrixXd>> terms_;
  bool boundary_eliminated_ = false;
};

/// Concatenation of the terms of two operators of equal shape.
[[nodiscard]] KroneckerSum operator+(const KroneckerSum& a, const KroneckerSum& b);

/// Matrix-free product on a row-major vector, one mode product per factor.
[[nodiscard]] Eigen::VectorXd kron_apply(const KroneckerSum& a, const Eigen::VectorXd& v);

/// Product in TT format: each term maps core d to A_{t,d} applied along its mode index,
/// the term results are summed and the sum is rounded to relative accuracy tol.
[[nodiscard]] TtTensor kron_apply(const KroneckerSum& a, const TtTensor& v, double tol,
                                  std::size_t max_rank = kNoRankCap);

/// Frobenius inner product of two operators through per-dimension factor inner products.
[[nodiscard]] double frobenius_inner(const KroneckerSum& a, const KroneckerSum& b);
[[nodiscard]] double frobenius_norm(const KroneckerSum& a);

/// Explicit Kronecker product of dense matrices, first factor slowest.
[[nodiscard]] Eigen::MatrixXd kron(const std::vector<Eigen::MatrixXd>& factors);

}  // namespace lriga

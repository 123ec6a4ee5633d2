#pragma once

// Tensor trains: W(i_1, ..., i_D) = W_1(i_1) W_2(i_2) ... W_D(i_D).

#include <cstddef>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "lriga/dense_tensor.hpp"

namespace lriga {

using RowMap = Eigen::Map<RowMatrix>;
using ConstRowMap = Eigen::Map<const RowMatrix>;

inline constexpr std::size_t kNoRankCap = std::numeric_limits<std::size_t>::max();
inline constexpr std::size_t kDefaultFullSizeCap = std::size_t{1} << 26;

/// One TT core of shape (r0, n, l, r1), row-major with r0 slowest.
/// Plain cores have l = 1; a block core carries l components.
struct TtCore {
  std::size_t r0 = 1;
  std::size_t n = 1;
  std::size_t l = 1;
  std::size_t r1 = 1;
  std::vector<double> data;

  TtCore() = default;
  TtCore(std::size_t r0_, std::size_t n_, std::size_t r1_) : TtCore(r0_, n_, 1, r1_) {}
  TtCore(std::size_t r0_, std::size_t n_, std::size_t l_, std::size_t r1_)
      : r0(r0_), n(n_), l(l_), r1(r1_), data(r0_ * n_ * l_ * r1_, 0.0) {}

  [[nodiscard]] std::size_t size() const noexcept { return data.size(); }
  [[nodiscard]] double& operator()(std::size_t a, std::size_t i, std::size_t b) {
    return data[(a * n + i) * r1 + b];
  }
  [[nodiscard]] double operator()(std::size_t a, std::size_t i, std::size_t b) const {
    return data[(a * n + i) * r1 + b];
  }
  [[nodiscard]] double& at(std::size_t a, std::size_t i, std::size_t c, std::size_t b) {
    return data[((a * n + i) * l + c) * r1 + b];
  }
  [[nodiscard]] double at(std::size_t a, std::size_t i, std::size_t c, std::size_t b) const {
    return data[((a * n + i) * l + c) * r1 + b];
  }

  /// Row-major reinterpretation of the data as rows x cols (rows * cols == size()).
  [[nodiscard]] RowMap matrix(std::size_t rows, std::size_t cols);
  [[nodiscard]] ConstRowMap matrix(std::size_t rows, std::size_t cols) const;
  /// (r0 n l) x r1
  [[nodiscard]] ConstRowMap left_unfolding() const { return matrix(r0 * n * l, r1); }
  /// r0 x (n l r1)
  [[nodiscard]] ConstRowMap right_unfolding() const { return matrix(r0, n * l * r1); }

  [[nodiscard]] double norm() const;
};

class TtTensor {
 public:
  TtTensor() = default;
  explicit TtTensor(std::vector<TtCore> cores);

  /// a_1 (x) a_2 (x) ... (x) a_D
  static TtTensor rank_one(const std::vector<Eigen::VectorXd>& factors);
  static TtTensor zeros(const std::vector<std::size_t>& dims);

  [[nodiscard]] std::size_t dimension() const noexcept { return cores_.size(); }
  [[nodiscard]] std::vector<std::size_t> dims() const;
  /// R_0, R_1, ..., R_D with R_0 = R_D = 1.
  [[nodiscard]] std::vector<std::size_t> ranks() const;
  [[nodiscard]] std::size_t max_rank() const;
  [[nodiscard]] std::size_t storage() const;
  [[nodiscard]] const std::vector<TtCore>& cores() const noexcept { return cores_; }
  [[nodiscard]] const TtCore& core(std::size_t d) const { return cores_.at(d); }
  [[nodiscard]] TtCore& core(std::size_t d) { return cores_.at(d); }

 private:
  std::vector<TtCore> cores_;
};

/// TT-SVD with the truncation budget tol * |full|_F / sqrt(D - 1) per unfolding.
[[nodiscard]] TtTensor tt_svd(const DenseTensor& full, double tol, std::size_t max_rank = kNoRankCap);

/// Orthogonalize right-to-left, then truncate left-to-right to relative accuracy tol.
[[nodiscard]] TtTensor tt_round(const TtTensor& t, double tol, std::size_t max_rank = kNoRankCap);

/// Densify; refuses (SizeCapError) when the tensor has more than size_cap entries.
[[nodiscard]] DenseTensor tt_to_full(const TtTensor& t, std::size_t size_cap = kDefaultFullSizeCap);

/// Canonical enumeration: one entry per (r_1, ..., r_{D-1}), each holding the D fiber vectors
/// W_d(r_{d-1}, :, r_d). The sum of their outer products equals the tensor.
[[nodiscard]] std::vector<std::vector<Eigen::VectorXd>> tt_to_canonical_slices(const TtTensor& t);

[[nodiscard]] TtTensor tt_add(const TtTensor& a, const TtTensor& b);
[[nodiscard]] TtTensor tt_scale(const TtTensor& a, double s);
[[nodiscard]] double tt_dot(const TtTensor& a, const TtTensor& b);
[[nodiscard]] double tt_norm(const TtTensor& a);

/// Phi'(b, b') = sum W(a,i,b) Phi(a,a') Op(i,i') V(a',i',b'); op == nullptr means identity.
[[nodiscard]] Eigen::MatrixXd contract_left(const Eigen::MatrixXd& phi, const TtCore& test,
                                            const Eigen::MatrixXd* op, const TtCore& trial);
/// Psi'(a, a') = sum W(a,i,b) Op(i,i') V(a',i',b') Psi(b,b'); op == nullptr means identity.
[[nodiscard]] Eigen::MatrixXd contract_right(const Eigen::MatrixXd& psi, const TtCore& test,
                                             const Eigen::MatrixXd* op, const TtCore& trial);

/// Thin SVD with a deterministic sign (largest-magnitude entry of each left vector positive).
struct ThinSvd {
  Eigen::MatrixXd u;
  Eigen::VectorXd s;
  Eigen::MatrixXd v;
};
[[nodiscard]] ThinSvd thin_svd(const Eigen::Ref<const Eigen::MatrixXd>& a);

/// Smallest rank r >= 1 with sqrt(sum_{i >= r} s_i^2) <= threshold, capped by max_rank.
[[nodiscard]] std::size_t truncation_rank(const Eigen::VectorXd& s, double threshold,
                                          std::size_t max_rank = kNoRankCap);

/// Thin QR: a = q r with q having orthonormal columns.
struct ThinQr {
  Eigen::MatrixXd q;
  Eigen::MatrixXd r;
};
[[nodiscard]] ThinQr thin_qr(const Eigen::Ref<const Eigen::MatrixXd>& a);

}  // namespace lriga

#pragma once

// Block tensor trains: one core carries an extra component index l, so a single train
// represents several vectors (state, control, adjoint) that share all other cores.

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "lriga/kronecker.hpp"
#include "lriga/tt.hpp"

namespace lriga {

enum class Direction { left, right };

class BlockTt {
 public:
  BlockTt() = default;
  BlockTt(std::vector<TtCore> cores, std::size_t block_position);

  /// Direct sum of the components followed by rounding at relative accuracy tol.
  static BlockTt from_components(const std::vector<TtTensor>& components, std::size_t block_position,
                                 double tol = 0.0);
  static BlockTt zeros(const std::vector<std::size_t>& dims, std::size_t components, std::size_t block_position);
  /// Rank-1 train with standard normal entries, scaled to unit norm.
  static BlockTt random_rank_one(const std::vector<std::size_t>& dims, std::size_t components,
                                 std::size_t block_position, std::uint64_t seed);

  [[nodiscard]] std::size_t dimension() const noexcept { return cores_.size(); }
  [[nodiscard]] std::vector<std::size_t> dims() const;
  [[nodiscard]] std::size_t components() const { return cores_.at(block_).l; }
  [[nodiscard]] std::size_t block_position() const noexcept { return block_; }
  [[nodiscard]] std::vector<std::size_t> ranks() const;
  [[nodiscard]] std::size_t max_rank() const;
  [[nodiscard]] std::size_t storage() const;
  [[nodiscard]] const std::vector<TtCore>& cores() const noexcept { return cores_; }
  [[nodiscard]] const TtCore& core(std::size_t d) const { return cores_.at(d); }

  /// Component l as a plain tensor train.
  [[nodiscard]] TtTensor component(std::size_t l) const;

  /// Moves cores into orthogonal form around the block core (QR, no truncation).
  [[nodiscard]] BlockTt orthogonalized() const;

 private:
  std::vector<TtCore> cores_;
  std::size_t block_ = 0;
};

/// Moves the component index one core to the right or left by a truncated SVD of the block core.
/// Singular values are truncated at tol times the block core norm. The vacated core becomes
/// left-orthogonal (moving right) or right-orthogonal (moving left).
[[nodiscard]] BlockTt block_core_move(const BlockTt& b, Direction direction, double tol,
                                      std::size_t max_rank = kNoRankCap);

/// In-place variant on two neighbouring cores; `cur` holds the block and `next` is the core it moves to.
/// Returns the retained rank.
std::size_t move_block(TtCore& cur, TtCore& next, Direction direction, double tol,
                       std::size_t max_rank = kNoRankCap);

/// Projection F^T A F of an operator onto the frame of core d, where F is built from every
/// core except d. The block index must sit at d and the other cores must be orthogonal
/// towards d. Local unknowns are ordered (r_{d-1}, i_d, r_d), first slowest.
[[nodiscard]] Eigen::MatrixXd frame_project(const BlockTt& b, std::size_t d, const KroneckerSum& a);

/// Explicit frame matrix F of core d, shape (prod n) x (r_{d-1} n_d r_d). Desk scale only.
[[nodiscard]] Eigen::MatrixXd frame_matrix_dense(const BlockTt& b, std::size_t d,
                                                 std::size_t size_cap = kDefaultFullSizeCap);

/// Left interface of term factors over cores [0, d): a product of contract_left steps.
[[nodiscard]] Eigen::MatrixXd left_interface(const std::vector<TtCore>& test, const std::vector<TtCore>& trial,
                                             const std::vector<Eigen::MatrixXd>* factors, std::size_t d);
/// Right interface over cores (d, D).
[[nodiscard]] Eigen::MatrixXd right_interface(const std::vector<TtCore>& test, const std::vector<TtCore>& trial,
                                              const std::vector<Eigen::MatrixXd>* factors, std::size_t d);

/// Local matrix sum_t Phi_t (x) A_{t,d} (x) Psi_t from per-term interfaces.
[[nodiscard]] Eigen::MatrixXd local_operator(const std::vector<Eigen::MatrixXd>& phi,
                                             const std::vector<Eigen::MatrixXd>& psi, const KroneckerSum& a,
                                             std::size_t d);

}  // namespace lriga

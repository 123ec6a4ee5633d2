#pragma once

// Tensor-product spline spaces and B-spline/NURBS geometry maps over [0,1]^D.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lriga/splines.hpp"

namespace lriga {

class TensorSpace {
 public:
  explicit TensorSpace(std::vector<UnivariateSpline> factors);

  [[nodiscard]] std::size_t dimension() const noexcept { return factors_.size(); }
  [[nodiscard]] const std::vector<UnivariateSpline>& factors() const noexcept { return factors_; }
  [[nodiscard]] const UnivariateSpline& factor(std::size_t d) const { return factors_.at(d); }
  [[nodiscard]] std::vector<std::size_t> dims() const;
  [[nodiscard]] std::size_t total_size() const;

  /// Row-major flat index, first dimension slowest.
  [[nodiscard]] std::size_t flat_index(std::span<const std::size_t> multi) const;

  friend bool operator==(const TensorSpace&, const TensorSpace&) = default;

 private:
  std::vector<UnivariateSpline> factors_;
};

/// Map value and Jacobian at one parameter point. jacobian(i, d) = dG_i / dx_d.
struct GeometryPoint {
  Eigen::VectorXd value;
  Eigen::MatrixXd jacobian;
};

/// G(x) = sum_i C_i beta_i(x), optionally rational with positive weights.
///
/// Control points are stored row-major with shape (n_1, ..., n_D, D).
class GeometryMap {
 public:
  GeometryMap(TensorSpace space, std::vector<double> control_points,
              std::optional<std::vector<double>> weights = std::nullopt);

  [[nodiscard]] std::size_t dimension() const noexcept { return space_.dimension(); }
  [[nodiscard]] const TensorSpace& space() const noexcept { return space_; }
  [[nodiscard]] const std::vector<double>& control_points() const noexcept { return control_points_; }
  [[nodiscard]] const std::optional<std::vector<double>>& weights() const noexcept { return weights_; }
  [[nodiscard]] bool is_rational() const noexcept { return weights_.has_value(); }

  [[nodiscard]] Eigen::VectorXd eval(std::span<const double> xhat) const;
  [[nodiscard]] Eigen::MatrixXd jacobian(std::span<const double> xhat) const;

  /// |det grad G|.
  [[nodiscard]] double omega(std::span<const double> xhat) const;
  /// (grad G^T grad G)^{-1} |det grad G|. Throws SingularJacobianError.
  [[nodiscard]] Eigen::MatrixXd q(std::span<const double> xhat) const;

  /// Value and Jacobian from per-dimension local bases (first derivatives required
  /// when with_jacobian is set). Used by the assembly loops to avoid re-evaluating bases.
  [[nodiscard]] GeometryPoint evaluate_local(std::span<const LocalBasis> per_dim,
                                             bool with_jacobian) const;

  /// Same map represented on the space refined by refine_knots(factor, k) in every dimension.
  [[nodiscard]] GeometryMap refined(int k) const;
  /// Same map represented on a finer tensor space (knot insertion per dimension).
  [[nodiscard]] GeometryMap refined_to(const TensorSpace& fine) const;

 private:
  [[nodiscard]] GeometryPoint evaluate(std::span<const double> xhat, bool with_jacobian) const;

  TensorSpace space_;
  std::vector<double> control_points_;
  std::optional<std::vector<double>> weights_;
};

/// Q from a Jacobian; throws SingularJacobianError carrying the point.
[[nodiscard]] Eigen::MatrixXd weight_q_from_jacobian(const Eigen::MatrixXd& jacobian,
                                                     std::span<const double> xhat);

}  // namespace lriga

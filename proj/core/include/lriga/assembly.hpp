#pragma once

// Low-rank isogeometric assembly: the geometry weights omega and Q are interpolated in a
// higher-degree spline space, compressed to tensor trains and turned into sums of Kronecker
// products of univariate weighted mass and stiffness matrices.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "lriga/geometry.hpp"
#include "lriga/kronecker.hpp"
#include "lriga/quadrature.hpp"
#include "lriga/tt.hpp"

namespace lriga {

enum class MatrixKind { mass, stiffness };

/// Spline space used to interpolate the weight functions.
struct InterpolationSpace {
  std::vector<UnivariateSpline> factors;

  [[nodiscard]] std::size_t dimension() const noexcept { return factors.size(); }
  [[nodiscard]] std::vector<std::size_t> dims() const;
  /// Greville abscissae per dimension (the interpolation points).
  [[nodiscard]] std::vector<std::vector<double>> points() const;
};

/// Degree D * p + 1 (p the largest geometry degree) unless overridden, on the breakpoints of the
/// solution space. Knots are simple, except at interior geometry breakpoints, where the
/// multiplicity is raised so that the space contains the weight's reduced smoothness there.
[[nodiscard]] InterpolationSpace build_interpolation_space(const GeometryMap& geo, const TensorSpace& solution,
                                                           std::optional<int> degree_override = std::nullopt);

/// Which weight function to sample: omega, or entry (k, l) of Q (zero-based).
struct WeightEntry {
  bool is_omega = true;
  std::size_t k = 0;
  std::size_t l = 0;

  static WeightEntry omega() { return {}; }
  static WeightEntry q(std::size_t k, std::size_t l) { return {false, k, l}; }
};

/// Weight values on the tensor grid of interpolation points.
[[nodiscard]] DenseTensor sample_weight_grid(const GeometryMap& geo, const InterpolationSpace& space,
                                             WeightEntry which);

struct WeightSamples {
  DenseTensor omega;
  /// Upper triangle is filled; q[l][k] aliases q[k][l].
  std::vector<std::vector<DenseTensor>> q;
};
/// All weights in one pass over the grid.
[[nodiscard]] WeightSamples sample_all_weights(const GeometryMap& geo, const InterpolationSpace& space);

/// TT-SVD of the samples followed by the per-dimension collocation solves on every core fiber.
/// The result holds spline coefficients. Throws SingularSystemError when a collocation
/// matrix has condition number above 1e12.
[[nodiscard]] TtTensor interpolate_weight_tt(const DenseTensor& samples, const InterpolationSpace& space, double tol);

struct WeightTT {
  TtTensor omega;
  /// D x D, symmetric: q[k][l] and q[l][k] hold the same train.
  std::vector<std::vector<TtTensor>> q;
};

/// Interpolates omega and the upper triangle of Q. Q entries whose sample norm is below
/// noise_floor times the largest Q sample norm are exactly zero up to roundoff and become
/// zero trains.
[[nodiscard]] WeightTT build_weight_tt(const GeometryMap& geo, const InterpolationSpace& space, double tol,
                                       double noise_floor = 1e-13);

/// Evaluates a spline given by TT coefficients over the interpolation space.
[[nodiscard]] double eval_weight(const TtTensor& coefficients, const InterpolationSpace& space,
                                 std::span<const double> xhat);

/// Gauss-Legendre rules on the spans of every solution factor; nodes_per_span <= 0 selects
/// the exact count for the interpolation degree.
[[nodiscard]] std::vector<QuadratureRule> make_rules(const TensorSpace& solution, const InterpolationSpace& space,
                                                     int nodes_per_span = 0);

/// One Kronecker term per canonical slice of the omega train.
[[nodiscard]] KroneckerSum assemble_mass_lr(const WeightTT& weights, const InterpolationSpace& space,
                                            const TensorSpace& solution, const std::vector<QuadratureRule>& rules);
/// Terms over (k, l) in row-major order, then over canonical slices of q[k][l].
[[nodiscard]] KroneckerSum assemble_stiffness_lr(const WeightTT& weights, const InterpolationSpace& space,
                                                 const TensorSpace& solution,
                                                 const std::vector<QuadratureRule>& rules);

/// Reference assembly: quadrature over the tensor grid of spans with omega and Q evaluated
/// exactly at every node. Throws SizeCapError above row_cap rows.
[[nodiscard]] SparseRowMatrix assemble_dense(const GeometryMap& geo, const TensorSpace& solution,
                                             const std::vector<QuadratureRule>& rules, MatrixKind kind,
                                             std::size_t row_cap = kDefaultDenseRowCap);

/// |A - B|_F / |B|_F, evaluated entrywise over the union of both sparsity patterns without
/// materializing A.
[[nodiscard]] double relative_frobenius_diff(const KroneckerSum& a, const SparseRowMatrix& b);

/// Removes the first and last basis index of every factor (rows and columns).
/// Throws ValidationError when applied twice.
[[nodiscard]] KroneckerSum eliminate_dirichlet(const KroneckerSum& op);

struct OperatorLR {
  KroneckerSum mass;
  KroneckerSum stiffness;
  /// Retained (interior) basis indices per dimension.
  std::vector<std::vector<std::size_t>> interior_maps;

  [[nodiscard]] std::vector<std::size_t> interior_dims() const;
};

[[nodiscard]] OperatorLR make_operator_lr(const KroneckerSum& mass, const KroneckerSum& stiffness);

/// Full low-rank pipeline for one geometry and solution space.
struct AssemblyConfig {
  double tol = 1e-7;
  int nodes_per_span = 0;
  std::optional<int> interp_degree;
  double noise_floor = 1e-13;
};

struct LowRankAssembly {
  InterpolationSpace space;
  WeightTT weights;
  std::vector<QuadratureRule> rules;
  KroneckerSum mass;
  KroneckerSum stiffness;
};

[[nodiscard]] LowRankAssembly assemble_low_rank(const GeometryMap& geo, const TensorSpace& solution,
                                                const AssemblyConfig& cfg);

}  // namespace lriga

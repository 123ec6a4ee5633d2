#pragma once

// Gauss-Legendre rules per knot span and weighted univariate Galerkin matrices.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lriga/splines.hpp"

namespace lriga {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  [[nodiscard]] std::size_t size() const noexcept { return nodes.size(); }
};

using WeightFunction = std::function<double(double)>;

/// m-point Gauss-Legendre rule on [0, 1].
[[nodiscard]] QuadratureRule gauss_legendre(int m);

/// The m-point rule mapped onto every nonempty knot span, concatenated.
[[nodiscard]] QuadratureRule gauss_legendre_per_span(const UnivariateSpline& spline, int nodes_per_span);

/// Smallest m integrating spline x spline x weight products exactly on every span,
/// i.e. ceil((2p + weight_degree + 1) / 2).
[[nodiscard]] int exact_nodes_per_span(int degree, int weight_degree);

/// Basis values (and first derivatives) of a spline at every node of a rule.
struct BasisTable {
  std::vector<LocalBasis> at_node;
  int degree = 0;
  std::size_t basis_count = 0;
};

[[nodiscard]] BasisTable tabulate(const UnivariateSpline& spline, const QuadratureRule& rule, int max_order);

/// M(i, j) = sum_q w_q beta_i(x_q) beta_j(x_q) weight(x_q); rows indexed by the test space.
[[nodiscard]] Eigen::MatrixXd univariate_mass(const UnivariateSpline& trial, const UnivariateSpline& test,
                                              const WeightFunction& weight, const QuadratureRule& rule);

/// Stiffness factor K^{(d)}_{k,l}: entry (i, j) integrates (delta(l,d) beta_i)(delta(k,d) beta_j) q,
/// where delta(k,d) differentiates iff k == d. Dimension indices are zero-based.
[[nodiscard]] Eigen::MatrixXd univariate_stiffness_factor(const UnivariateSpline& spline, std::size_t k,
                                                          std::size_t l, std::size_t d,
                                                          const WeightFunction& weight,
                                                          const QuadratureRule& rule);

/// Weighted product matrix from a tabulated basis and weight values at the nodes:
/// entry (i, j) = sum_q w_q D^row_order beta_i D^col_order beta_j weight_q.
[[nodiscard]] Eigen::MatrixXd weighted_product_matrix(const BasisTable& table, const QuadratureRule& rule,
                                                      std::span<const double> weight_at_nodes,
                                                      int row_order, int col_order);

}  // namespace lriga

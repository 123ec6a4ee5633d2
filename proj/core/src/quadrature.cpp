#include "lriga/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "lriga/errors.hpp"

namespace lriga {

QuadratureRule gauss_legendre(int m) {
  if (m < 1) throw ValidationError("gauss_legendre: need at least one node");
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(m));
  rule.weights.resize(static_cast<std::size_t>(m));
  // Newton iteration on P_m from the Chebyshev-like initial guesses; nodes on [-1, 1]
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= m; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(m - 1 - i);
    rule.nodes[lo] = 0.5 * (1.0 - x);
    rule.nodes[hi] = 0.5 * (1.0 + x);
    rule.weights[lo] = 0.5 * w;
    rule.weights[hi] = 0.5 * w;
  }
  if (m % 2 == 1) rule.nodes[static_cast<std::size_t>(m / 2)] = 0.5;
  return rule;
}

QuadratureRule gauss_legendre_per_span(const UnivariateSpline& spline, int nodes_per_span) {
  const QuadratureRule ref = gauss_legendre(nodes_per_span);
  const auto bp = spline.knots().breakpoints();
  QuadratureRule rule;
  rule.nodes.reserve(ref.size() * (bp.size() - 1));
  rule.weights.reserve(ref.size() * (bp.size() - 1));
  for (std::size_t s = 0; s + 1 < bp.size(); ++s) {
    const double a = bp[s];
    const double h = bp[s + 1] - a;
    for (std::size_t q = 0; q < ref.size(); ++q) {
      rule.nodes.push_back(a + h * ref.nodes[q]);
      rule.weights.push_back(h * ref.weights[q]);
    }
  }
  return rule;
}

int exact_nodes_per_span(int degree, int weight_degree) {
  return (2 * degree + weight_degree + 2) / 2;
}

BasisTable tabulate(const UnivariateSpline& spline, const QuadratureRule& rule, int max_order) {
  BasisTable table;
  table.degree = spline.degree();
  table.basis_count = spline.size();
  table.at_node.reserve(rule.size());
  for (double x : rule.nodes) {
    LocalBasis lb = spline.eval_local(x, max_order);
    if (lb.ders.rows() < max_order + 1) {
      Eigen::MatrixXd padded = Eigen::MatrixXd::Zero(max_order + 1, lb.ders.cols());
      padded.topRows(lb.ders.rows()) = lb.ders;
      lb.ders = std::move(padded);
    }
    table.at_node.push_back(std::move(lb));
  }
  return table;
}

Eigen::MatrixXd weighted_product_matrix(const BasisTable& table, const QuadratureRule& rule,
                                        std::span<const double> weight_at_nodes, int row_order,
                                        int col_order) {
  const auto n = static_cast<Eigen::Index>(table.basis_count);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  const int np = table.degree + 1;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double wq = rule.weights[q] * weight_at_nodes[q];
    if (wq == 0.0) continue;
    const LocalBasis& lb = table.at_node[q];
    const auto f = static_cast<Eigen::Index>(lb.first);
    for (int i = 0; i < np; ++i) {
      const double bi = wq * lb.ders(row_order, i);
      for (int j = 0; j < np; ++j) out(f + i, f + j) += bi * lb.ders(col_order, j);
    }
  }
  return out;
}

Eigen::MatrixXd univariate_mass(const UnivariateSpline& trial, const UnivariateSpline& test,
                                const WeightFunction& weight, const QuadratureRule& rule) {
  if (!(trial == test)) throw ValidationError("univariate_mass: trial and test spaces must agree");
  const BasisTable table = tabulate(trial, rule, 0);
  std::vector<double> wv(rule.size());
  for (std::size_t q = 0; q < rule.size(); ++q) wv[q] = weight(rule.nodes[q]);
  return weighted_product_matrix(table, rule, wv, 0, 0);
}

Eigen::MatrixXd univariate_stiffness_factor(const UnivariateSpline& spline, std::size_t k, std::size_t l,
                                            std::size_t d, const WeightFunction& weight,
                                            const QuadratureRule& rule) {
  const BasisTable table = tabulate(spline, rule, 1);
  std::vector<double> wv(rule.size());
  for (std::size_t q = 0; q < rule.size(); ++q) wv[q] = weight(rule.nodes[q]);
  return weighted_product_matrix(table, rule, wv, l == d ? 1 : 0, k == d ? 1 : 0);
}

}  // namespace lriga

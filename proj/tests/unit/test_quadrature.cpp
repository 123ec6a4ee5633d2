#include <gtest/gtest.h>

#include <cmath>

#include "lriga/quadrature.hpp"
#include "oracles.hpp"

using lriga::UnivariateSpline;

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
  for (int m = 1; m <= 12; ++m) {
    const auto rule = lriga::gauss_legendre(m);
    ASSERT_EQ(rule.size(), static_cast<std::size_t>(m));
    for (int k = 0; k <= 2 * m - 1; ++k) {
      double s = 0.0;
      for (std::size_t q = 0; q < rule.size(); ++q) s += rule.weights[q] * std::pow(rule.nodes[q], k);
      EXPECT_NEAR(s, 1.0 / (k + 1), 1e-14) << "m=" << m << " k=" << k;
    }
  }
}

TEST(GaussLegendre, PerSpanRuleCoversEverySpan) {
  const UnivariateSpline s({0, 0, 0, 0.25, 0.25, 0.7, 1, 1, 1}, 2);
  const auto rule = lriga::gauss_legendre_per_span(s, 3);
  EXPECT_EQ(rule.size(), 9u);
  double total = 0.0;
  double moment = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    total += rule.weights[q];
    moment += rule.weights[q] * std::pow(rule.nodes[q], 5);
  }
  EXPECT_NEAR(total, 1.0, 1e-15);
  EXPECT_NEAR(moment, 1.0 / 6.0, 1e-15);
}

TEST(GaussLegendre, ExactNodeCount) {
  EXPECT_EQ(lriga::exact_nodes_per_span(2, 7), 6);
  EXPECT_EQ(lriga::exact_nodes_per_span(2, 0), 3);
  EXPECT_EQ(lriga::exact_nodes_per_span(1, 1), 2);
  EXPECT_EQ(lriga::exact_nodes_per_span(3, 10), 9);
}

TEST(UnivariateMass, BernsteinClosedForm) {
  // int B_i B_j = C(p,i) C(p,j) / (C(2p,i+j) (2p+1))
  const int p = 3;
  const auto s = UnivariateSpline::bernstein(p);
  const auto rule = lriga::gauss_legendre_per_span(s, 4);
  const Eigen::MatrixXd m = lriga::univariate_mass(s, s, [](double) { return 1.0; }, rule);
  for (int i = 0; i <= p; ++i)
    for (int j = 0; j <= p; ++j) {
      const double ref = oracle::binomial(p, i) * oracle::binomial(p, j) / (oracle::binomial(2 * p, i + j) * (2 * p + 1));
      EXPECT_NEAR(m(i, j), ref, 1e-15);
    }
}

TEST(UnivariateMass, WeightedAgainstSimpson) {
  const auto s = lriga::refine_knots(UnivariateSpline::bernstein(2), 3);
  auto w = [](double x) { return 1.0 + x * x * x; };
  const auto rule = lriga::gauss_legendre_per_span(s, 4);
  const Eigen::MatrixXd m = lriga::univariate_mass(s, s, w, rule);
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j) {
      const double ref = oracle::simpson(
          [&](double x) {
            const auto v = s.eval_basis_all(x);
            return v[i] * v[j] * w(x);
          },
          0.0, 1.0, 3000);
      EXPECT_NEAR(m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), ref, 1e-12);
    }
}

TEST(UnivariateStiffness, FactorSelectsDerivatives) {
  const auto s = lriga::refine_knots(UnivariateSpline::bernstein(2), 2);
  auto w = [](double x) { return 2.0 + x; };
  const auto rule = lriga::gauss_legendre_per_span(s, 4);
  // k == l == d: derivative on both sides; k == d only: derivative on the trial (column) function
  const Eigen::MatrixXd both = lriga::univariate_stiffness_factor(s, 0, 0, 0, w, rule);
  const Eigen::MatrixXd col = lriga::univariate_stiffness_factor(s, 0, 1, 0, w, rule);
  const Eigen::MatrixXd row = lriga::univariate_stiffness_factor(s, 1, 0, 0, w, rule);
  const Eigen::MatrixXd none = lriga::univariate_stiffness_factor(s, 1, 1, 0, w, rule);
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j) {
      auto integral = [&](int di, int dj) {
        return oracle::simpson(
            [&](double x) {
              const auto vi = di ? s.eval_basis_deriv(x, 1) : s.eval_basis_all(x);
              const auto vj = dj ? s.eval_basis_deriv(x, 1) : s.eval_basis_all(x);
              return vi[i] * vj[j] * w(x);
            },
            0.0, 1.0, 3000);
      };
      const auto ii = static_cast<Eigen::Index>(i);
      const auto jj = static_cast<Eigen::Index>(j);
      EXPECT_NEAR(both(ii, jj), integral(1, 1), 1e-9);
      EXPECT_NEAR(col(ii, jj), integral(0, 1), 1e-9);
      EXPECT_NEAR(row(ii, jj), integral(1, 0), 1e-9);
      EXPECT_NEAR(none(ii, jj), integral(0, 0), 1e-9);
    }
  EXPECT_NEAR((col - row.transpose()).norm(), 0.0, 1e-14);
}

TEST(WeightedProduct, MatchesUnivariateMass) {
  const auto s = lriga::refine_knots(UnivariateSpline::bernstein(3), 2);
  const auto rule = lriga::gauss_legendre_per_span(s, 5);
  const auto table = lriga::tabulate(s, rule, 1);
  std::vector<double> w(rule.size());
  for (std::size_t q = 0; q < rule.size(); ++q) w[q] = std::exp(rule.nodes[q]);
  const Eigen::MatrixXd a = lriga::weighted_product_matrix(table, rule, w, 0, 0);
  const Eigen::MatrixXd b = lriga::univariate_mass(s, s, [](double x) { return std::exp(x); }, rule);
  EXPECT_NEAR((a - b).norm(), 0.0, 1e-14);
}

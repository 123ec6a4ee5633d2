#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lriga/errors.hpp"
#include "lriga/geometry_io.hpp"
#include "lriga/optctl.hpp"
#include "oracles.hpp"

namespace {

lriga::ControlProblem desk_problem(const lriga::GeometryMap& g, int k, std::size_t steps, double beta) {
  std::vector<lriga::UnivariateSpline> f;
  for (const auto& s : g.space().factors()) f.push_back(lriga::refine_knots(s, k));
  const lriga::TensorSpace sol(std::move(f));
  lriga::AssemblyConfig cfg;
  cfg.tol = 1e-10;
  const auto a = lriga::assemble_low_rank(g, sol, cfg);
  lriga::ControlProblem p;
  p.steps = steps;
  p.beta = beta;
  p.operators = lriga::make_operator_lr(a.mass, a.stiffness);
  std::vector<Eigen::VectorXd> fac;
  for (std::size_t n : p.operators.interior_dims()) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = std::sin(std::numbers::pi * (i + 1) / (v.size() + 1));
    fac.push_back(v);
  }
  p.desired_state = lriga::TtTensor::rank_one(fac);
  return p;
}

}  // namespace

TEST(TimeMatrices, LowerBidiagonal) {
  const auto t = lriga::build_time_matrices(4);
  Eigen::MatrixXd c = Eigen::MatrixXd::Identity(4, 4);
  for (int i = 1; i < 4; ++i) c(i, i - 1) = -1.0;
  EXPECT_EQ(t.c, c);
  EXPECT_EQ(t.identity, Eigen::MatrixXd::Identity(4, 4));
  EXPECT_THROW((void)lriga::build_time_matrices(0), lriga::ValidationError);
}

TEST(ControlProblem, Validation) {
  auto p = desk_problem(lriga::unit_cube(2), 1, 2, 1e-2);
  EXPECT_NO_THROW(p.validate());
  auto bad = p;
  bad.beta = 0.0;
  EXPECT_THROW(bad.validate(), lriga::ValidationError);
  bad = p;
  bad.horizon = -1.0;
  EXPECT_THROW(bad.validate(), lriga::ValidationError);
  bad = p;
  bad.desired_state = lriga::TtTensor::zeros({5, 5});
  EXPECT_THROW(bad.validate(), lriga::ValidationError);
  bad = p;
  bad.operators.mass = bad.operators.mass.transposed();
  bad.operators.mass = lriga::KroneckerSum(bad.operators.mass.row_dims(), bad.operators.mass.col_dims());
  EXPECT_THROW(bad.validate(), lriga::ValidationError);
}

TEST(Kkt, BlocksMatchTheExplicitSystem) {
  const auto p = desk_problem(lriga::quarter_annulus_3d(2), 1, 3, 1e-2);
  const auto sys = lriga::build_kkt(p);
  const Eigen::MatrixXd mh = p.operators.mass.to_dense();
  const Eigen::MatrixXd kh = p.operators.stiffness.to_dense();
  const auto tm = lriga::build_time_matrices(3);
  const double tau = p.tau();
  const Eigen::MatrixXd m = oracle::kron2(tm.identity, mh);
  const Eigen::MatrixXd k = oracle::kron2(tm.identity, tau * kh) + oracle::kron2(tm.c, mh);
  const auto n = m.rows();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3 * n, 3 * n);
  a.block(0, 0, n, n) = tau * m;
  a.block(0, 2 * n, n, n) = k.transpose();
  a.block(n, n, n, n) = tau * p.beta * m;
  a.block(n, 2 * n, n, n) = -tau * m;
  a.block(2 * n, 0, n, n) = k;
  a.block(2 * n, n, n, n) = -tau * m;
  EXPECT_NEAR((Eigen::MatrixXd(sys.op.to_sparse()) - a).norm(), 0.0, 1e-12 * a.norm());
}

TEST(DenseOracle, SolvesTheSystem) {
  const auto p = desk_problem(lriga::quarter_annulus_3d(2), 1, 4, 1e-2);
  const auto sys = lriga::build_kkt(p);
  const auto sol = lriga::dense_kkt_oracle(p);
  const auto n = sol.y.size();
  Eigen::VectorXd x(3 * n);
  x << sol.y, sol.u, sol.lambda;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(3 * n);
  b.head(n) = lriga::to_vector(sys.rhs[0]);
  EXPECT_LE((sys.op.apply(x) - b).norm(), 1e-10 * b.norm());
  EXPECT_LE((sol.u - sol.lambda / p.beta).norm(), 1e-9 * sol.u.norm());
}

TEST(DenseOracle, SingleTimeStep) {
  const auto p = desk_problem(lriga::unit_cube(2), 2, 1, 1.0);
  const auto sol = lriga::dense_kkt_oracle(p);
  EXPECT_GT(sol.y.norm(), 0.0);
  EXPECT_THROW((void)lriga::dense_kkt_oracle(p, 10), lriga::SizeCapError);
}

TEST(KktResidual, ZeroForTheDenseSolution) {
  const auto p = desk_problem(lriga::unit_cube(2), 1, 2, 1e-1);
  const auto sys = lriga::build_kkt(p);
  const auto sol = lriga::dense_kkt_oracle(p);
  const auto dims = sys.op.dims();
  auto as_tt = [&](const Eigen::VectorXd& v) {
    return lriga::tt_svd(lriga::DenseTensor(dims, std::vector<double>(v.data(), v.data() + v.size())), 0.0);
  };
  const auto x = lriga::BlockTt::from_components({as_tt(sol.y), as_tt(sol.u), as_tt(sol.lambda)}, 0);
  EXPECT_LE(lriga::kkt_residual(sys.op, x, sys.rhs_block(), 1e-14), 1e-10);
  const auto zero = lriga::BlockTt::zeros(dims, 3, 0);
  EXPECT_NEAR(lriga::kkt_residual(sys.op, zero, sys.rhs_block(), 1e-14), 1.0, 1e-12);
}

TEST(Objective, MatchesDirectFormula) {
  const auto p = desk_problem(lriga::unit_cube(2), 1, 3, 0.5);
  const auto sol = lriga::dense_kkt_oracle(p);
  const auto sys = lriga::build_kkt(p);
  const Eigen::MatrixXd m = sys.mass_st.to_dense();
  const Eigen::VectorXd yhat = lriga::to_vector(p.desired_state_space_time());
  const Eigen::VectorXd d = sol.y - yhat;
  const double ref = 0.5 * p.tau() * (d.dot(m * d) + p.beta * sol.u.dot(m * sol.u));
  const auto dims = sys.op.dims();
  auto as_tt = [&](const Eigen::VectorXd& v) {
    return lriga::tt_svd(lriga::DenseTensor(dims, std::vector<double>(v.data(), v.data() + v.size())), 0.0);
  };
  EXPECT_NEAR(lriga::evaluate_objective(p, as_tt(sol.y), as_tt(sol.u)), ref, 1e-12 * ref);
  EXPECT_NEAR(lriga::control_norm(p, sol.u), std::sqrt(p.tau() * sol.u.dot(m * sol.u)), 1e-13);
  EXPECT_NEAR(lriga::control_norm(p, as_tt(sol.u)), lriga::control_norm(p, sol.u), 1e-12);
}

TEST(Objective, ControlNormDecreasesWithBeta) {
  double prev = std::numeric_limits<double>::infinity();
  for (double beta : {1e-4, 1e-2, 1.0}) {
    const auto p = desk_problem(lriga::quarter_annulus_3d(2), 1, 2, beta);
    const double c = lriga::control_norm(p, lriga::dense_kkt_oracle(p).u);
    EXPECT_LE(c, prev);
    prev = c;
  }
}

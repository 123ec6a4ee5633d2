#include "lriga/optctl.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SparseLU>

#include "lriga/errors.hpp"

namespace lriga {

TimeMatrices build_time_matrices(std::size_t steps) {
  if (steps < 1) throw ValidationError("build_time_matrices: at least one time step required");
  const auto n = static_cast<Eigen::Index>(steps);
  TimeMatrices t;
  t.identity = Eigen::MatrixXd::Identity(n, n);
  t.c = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index i = 1; i < n; ++i) t.c(i, i - 1) = -1.0;
  return t;
}

std::vector<std::size_t> BlockOperator::dims() const {
  if (ops.empty()) throw ValidationError("BlockOperator: no operators");
  return ops.front().col_dims();
}

KroneckerSum BlockOperator::block(std::size_t row, std::size_t col) const {
  KroneckerSum out(dims(), dims());
  for (const auto& e : entries)
    if (e.row == row && e.col == col) out = out + ops.at(e.op).scaled(e.scale);
  return out;
}

Eigen::VectorXd BlockOperator::apply(const Eigen::VectorXd& x) const {
  const auto n = static_cast<Eigen::Index>(product(dims()));
  if (x.size() != n * static_cast<Eigen::Index>(components)) throw ValidationError("BlockOperator: vector size mismatch");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(x.size());
  for (const auto& e : entries) {
    const Eigen::VectorXd xc = x.segment(static_cast<Eigen::Index>(e.col) * n, n);
    y.segment(static_cast<Eigen::Index>(e.row) * n, n) += e.scale * kron_apply(ops.at(e.op), xc);
  }
  return y;
}

std::vector<TtTensor> BlockOperator::apply(const std::vector<TtTensor>& x, double tol) const {
  if (x.size() != components) throw ValidationError("BlockOperator: component count mismatch");
  std::vector<TtTensor> out;
  for (std::size_t r = 0; r < components; ++r) {
    TtTensor acc = TtTensor::zeros(dims());
    bool any = false;
    for (const auto& e : entries) {
      if (e.row != r) continue;
      const TtTensor term = tt_scale(kron_apply(ops.at(e.op), x.at(e.col), tol), e.scale);
      acc = any ? tt_round(tt_add(acc, term), tol) : term;
      any = true;
    }
    out.push_back(std::move(acc));
  }
  return out;
}

SparseRowMatrix BlockOperator::to_sparse(std::size_t row_cap) const {
  const std::size_t n = product(dims());
  if (n * components > row_cap) throw SizeCapError("BlockOperator::to_sparse: system too large");
  std::vector<Eigen::Triplet<double>> trip;
  for (const auto& e : entries) {
    const SparseRowMatrix b = ops.at(e.op).to_sparse(row_cap);
    for (Eigen::Index i = 0; i < b.outerSize(); ++i)
      for (SparseRowMatrix::InnerIterator it(b, i); it; ++it)
        trip.emplace_back(static_cast<Eigen::Index>(e.row * n) + it.row(), static_cast<Eigen::Index>(e.col * n) + it.col(),
                          e.scale * it.value());
  }
  const auto N = static_cast<Eigen::Index>(n * components);
  SparseRowMatrix out(N, N);
  out.setFromTriplets(trip.begin(), trip.end());
  out.makeCompressed();
  return out;
}

void ControlProblem::validate() const {
  if (!(horizon > 0.0)) throw ValidationError("control problem: horizon must be positive");
  if (steps < 1) throw ValidationError("control problem: at least one time step required");
  if (!(beta > 0.0)) throw ValidationError("control problem: beta must be positive");
  if (!operators.mass.boundary_eliminated() || !operators.stiffness.boundary_eliminated()) {
    throw ValidationError("control problem: operators must be boundary-eliminated");
  }
  if (operators.mass.row_dims() != operators.stiffness.row_dims()) {
    throw ValidationError("control problem: mass and stiffness shapes differ");
  }
  const auto sd = operators.mass.row_dims();
  const auto yd = desired_state.dims();
  std::vector<std::size_t> st{steps};
  st.insert(st.end(), sd.begin(), sd.end());
  if (yd != sd && yd != st) throw ValidationError("control problem: desired state shape does not match the operators");
}

TtTensor ControlProblem::desired_state_space_time() const {
  if (desired_state.dimension() == operators.mass.order() + 1) return desired_state;
  std::vector<TtCore> cores;
  TtCore time(1, steps, 1);
  std::fill(time.data.begin(), time.data.end(), 1.0);
  cores.push_back(std::move(time));
  for (const auto& c : desired_state.cores()) cores.push_back(c);
  return TtTensor(std::move(cores));
}

BlockTt KktSystem::rhs_block() const { return BlockTt::from_components(rhs, 0, 0.0); }

KktSystem build_kkt(const ControlProblem& problem) {
  problem.validate();
  const double tau = problem.tau();
  const TimeMatrices tm = build_time_matrices(problem.steps);
  KktSystem sys;
  sys.mass_st = problem.operators.mass.prepended(tm.identity).without_zero_terms();
  sys.stiff_st = (problem.operators.stiffness.scaled(tau).prepended(tm.identity) +
                  problem.operators.mass.prepended(tm.c))
                     .without_zero_terms();
  sys.op.components = 3;
  sys.op.ops = {sys.mass_st, sys.stiff_st, sys.stiff_st.transposed()};
  const double beta = problem.beta;
  sys.op.entries = {
      {0, 0, 0, tau}, {0, 2, 2, 1.0}, {1, 1, 0, tau * beta}, {1, 2, 0, -tau}, {2, 0, 1, 1.0}, {2, 1, 0, -tau},
  };
  const TtTensor yhat = problem.desired_state_space_time();
  const auto dims = sys.mass_st.row_dims();
  sys.rhs = {tt_scale(kron_apply(sys.mass_st, yhat, 0.0), tau), TtTensor::zeros(dims), TtTensor::zeros(dims)};
  return sys;
}

double kkt_residual(const BlockOperator& op, const BlockTt& x, const BlockTt& rhs, double round_tol) {
  std::vector<TtTensor> xs;
  for (std::size_t l = 0; l < x.components(); ++l) xs.push_back(x.component(l));
  const std::vector<TtTensor> ax = op.apply(xs, round_tol);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t l = 0; l < op.components; ++l) {
    const TtTensor b = rhs.component(l);
    const TtTensor r = tt_round(tt_add(ax[l], tt_scale(b, -1.0)), round_tol);
    const double rn = tt_norm(r);
    const double bn = tt_norm(b);
    num += rn * rn;
    den += bn * bn;
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

namespace {

double mass_energy(const ControlProblem& problem, const TtTensor& v) {
  const TimeMatrices tm = build_time_matrices(problem.steps);
  const KroneckerSum m = problem.operators.mass.prepended(tm.identity);
  return std::max(0.0, tt_dot(v, kron_apply(m, v, 0.0)));
}

}  // namespace

double evaluate_objective(const ControlProblem& problem, const TtTensor& y, const TtTensor& u) {
  const TtTensor d = tt_add(y, tt_scale(problem.desired_state_space_time(), -1.0));
  return 0.5 * problem.tau() * (mass_energy(problem, d) + problem.beta * mass_energy(problem, u));
}

double control_norm(const ControlProblem& problem, const TtTensor& u) {
  return std::sqrt(problem.tau() * mass_energy(problem, u));
}

double control_norm(const ControlProblem& problem, const Eigen::VectorXd& u) {
  const TimeMatrices tm = build_time_matrices(problem.steps);
  const KroneckerSum m = problem.operators.mass.prepended(tm.identity);
  return std::sqrt(std::max(0.0, problem.tau() * u.dot(kron_apply(m, u))));
}

Eigen::VectorXd to_vector(const TtTensor& t) {
  const DenseTensor full = tt_to_full(t);
  return Eigen::Map<const Eigen::VectorXd>(full.data.data(), static_cast<Eigen::Index>(full.size()));
}

DenseKktSolution dense_kkt_oracle(const ControlProblem& problem, std::size_t cap) {
  const KktSystem sys = build_kkt(problem);
  const std::size_t n = product(sys.op.dims());
  if (3 * n > cap) {
    std::ostringstream os;
    os << "dense_kkt_oracle: " << 3 * n << " unknowns exceed the cap of " << cap;
    throw SizeCapError(os.str());
  }
  const Eigen::SparseMatrix<double> A = sys.op.to_sparse(cap);
  Eigen::VectorXd b(static_cast<Eigen::Index>(3 * n));
  for (std::size_t l = 0; l < 3; ++l) b.segment(static_cast<Eigen::Index>(l * n), static_cast<Eigen::Index>(n)) = to_vector(sys.rhs[l]);
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw SingularSystemError("dense_kkt_oracle: factorization failed");
  const Eigen::VectorXd x = lu.solve(b);
  if (lu.info() != Eigen::Success) throw SingularSystemError("dense_kkt_oracle: solve failed");
  const auto ni = static_cast<Eigen::Index>(n);
  return {x.segment(0, ni), x.segment(ni, ni), x.segment(2 * ni, ni)};
}

}  // namespace lriga

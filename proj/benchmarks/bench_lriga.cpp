#include <benchmark/benchmark.h>

#include <random>

#include "lriga/amen.hpp"
#include "lriga/assembly.hpp"
#include "lriga/geometry_io.hpp"
#include "lriga/optctl.hpp"

namespace {

lriga::TensorSpace level_space(const lriga::GeometryMap& g, int level) {
  std::vector<lriga::UnivariateSpline> f;
  for (const auto& s : g.space().factors()) f.push_back(lriga::refine_knots(s, 4 * level));
  return lriga::TensorSpace(std::move(f));
}

void BM_LowRankAssemblyAnnulus(benchmark::State& state) {
  const auto g = lriga::quarter_annulus_3d(2);
  const auto sol = level_space(g, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(lriga::assemble_low_rank(g, sol, {}));
  state.counters["dofs_per_dim"] = static_cast<double>(sol.factor(0).size());
}
BENCHMARK(BM_LowRankAssemblyAnnulus)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

void BM_DenseAssemblyAnnulus(benchmark::State& state) {
  const auto g = lriga::quarter_annulus_3d(2);
  const auto sol = level_space(g, static_cast<int>(state.range(0)));
  const auto rules = lriga::make_rules(sol, lriga::build_interpolation_space(g, sol));
  for (auto _ : state) benchmark::DoNotOptimize(lriga::assemble_dense(g, sol, rules, lriga::MatrixKind::stiffness));
}
BENCHMARK(BM_DenseAssemblyAnnulus)->DenseRange(1, 2)->Unit(benchmark::kMillisecond);

void BM_TtSvd(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  lriga::DenseTensor t({n, n, n});
  for (double& x : t.data) x = normal(rng);
  for (auto _ : state) benchmark::DoNotOptimize(lriga::tt_svd(t, 1e-6));
}
BENCHMARK(BM_TtSvd)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_BlockAmenDesk(benchmark::State& state) {
  const auto g = lriga::quarter_annulus_3d(2);
  std::vector<lriga::UnivariateSpline> f;
  for (const auto& s : g.space().factors()) f.push_back(lriga::refine_knots(s, static_cast<int>(state.range(0))));
  const lriga::TensorSpace sol(std::move(f));
  const auto lr = lriga::assemble_low_rank(g, sol, {});
  lriga::ControlProblem p;
  p.steps = 4;
  p.beta = 1e-2;
  p.operators = lriga::make_operator_lr(lr.mass, lr.stiffness);
  std::vector<Eigen::VectorXd> ones;
  for (std::size_t n : p.operators.interior_dims()) ones.push_back(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n)));
  p.desired_state = lriga::TtTensor::rank_one(ones);
  const auto sys = lriga::build_kkt(p);
  lriga::AmenConfig cfg;
  cfg.tol = 1e-6;
  for (auto _ : state) benchmark::DoNotOptimize(lriga::block_amen_solve(sys.op, sys.rhs_block(), cfg));
}
BENCHMARK(BM_BlockAmenDesk)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();

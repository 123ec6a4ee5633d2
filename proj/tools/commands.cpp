#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lriga/assembly.hpp"
#include "lriga/errors.hpp"
#include "lriga/geometry_io.hpp"
#include "lriga/optctl.hpp"
#include "lriga/ttb_io.hpp"

namespace lriga::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string rank_cell(const std::vector<std::size_t>& r) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
  os << ')';
  return os.str();
}

std::vector<std::size_t> interior_ranks(const TtTensor& t) {
  const auto r = t.ranks();
  return {r.begin() + 1, r.end() - 1};
}

std::size_t max_interior(const TtTensor& t) {
  std::size_t m = 0;
  for (auto r : interior_ranks(t)) m = std::max(m, r);
  return m;
}

void put_ranks(ReportRow& row, const WeightTT& w) {
  row.set("rank_omega", static_cast<long long>(max_interior(w.omega)));
  const std::size_t D = w.q.size();
  for (std::size_t k = 0; k < D && k < 3; ++k)
    for (std::size_t l = k; l < D && l < 3; ++l) {
      row.set("rank_q" + std::to_string(k + 1) + std::to_string(l + 1),
              static_cast<long long>(max_interior(w.q[k][l])));
    }
}

void check_level(int level) {
  if (level < 0) throw ValidationError("refinement level must be nonnegative");
}

void check_tol(double tol) {
  if (!(tol > 0.0) || !(tol < 1.0)) throw ValidationError("tolerance must lie in (0, 1)");
}

}  // namespace

GeometryMap GeometrySource::load() const {
  if (file && !builtin.empty()) throw ValidationError("give either a geometry file or a built-in name, not both");
  if (file) return parse_geometry(*file);
  if (builtin.empty()) throw ValidationError("no geometry given");
  return builtin_geometry(builtin, degree);
}

std::string GeometrySource::label() const { return file ? file->string() : builtin; }

TensorSpace solution_space(const GeometryMap& geo, int level) {
  check_level(level);
  std::vector<UnivariateSpline> f;
  for (const auto& s : geo.space().factors()) f.push_back(refine_knots(s, 4 * level));
  return TensorSpace(std::move(f));
}

RunReport cmd_assemble(const AssembleOptions& opt) {
  if (opt.max_level < 0) throw ValidationError("refine: level count must be nonnegative");
  if (opt.tols.empty()) throw ValidationError("tol: at least one tolerance required");
  for (double t : opt.tols) check_tol(t);
  const GeometryMap geo = opt.geometry.load();
  RunReport report;
  const int first = opt.max_level == 0 ? 0 : 1;
  if (opt.compare_dense) {
    const std::size_t total = solution_space(geo, opt.max_level).total_size();
    if (total > opt.dense_row_cap) {
      std::ostringstream os;
      os << "dense comparison refused at level " << opt.max_level << ": " << total << " rows exceed the cap of "
         << opt.dense_row_cap;
      throw SizeCapError(os.str());
    }
  }
  for (int level = first; level <= opt.max_level; ++level) {
    const TensorSpace sol = solution_space(geo, level);
    const std::size_t total = sol.total_size();
    std::optional<SparseRowMatrix> dense_mass;
    std::optional<SparseRowMatrix> dense_stiff;
    for (double tol : opt.tols) {
      AssemblyConfig cfg;
      cfg.tol = tol;
      cfg.nodes_per_span = opt.nodes_per_span;
      const auto t0 = Clock::now();
      const LowRankAssembly lr = assemble_low_rank(geo, sol, cfg);
      const double secs = seconds_since(t0);

      ReportRow row;
      row.set("command", std::string("assemble"));
      row.set("geometry", opt.geometry.label());
      row.set("level", static_cast<long long>(level));
      row.set("dofs_per_dim", static_cast<long long>(sol.factor(0).size()));
      row.set("total_dofs", static_cast<long long>(total));
      row.set("tol", tol);
      row.set("assembly_seconds", secs);
      put_ranks(row, lr.weights);
      std::size_t storage = 0;
      const bool want_mass = opt.matrix != MatrixChoice::stiffness;
      const bool want_stiff = opt.matrix != MatrixChoice::mass;
      if (want_mass) {
        row.set("mass_terms", static_cast<long long>(lr.mass.term_count()));
        storage += lr.mass.storage_nnz();
      }
      if (want_stiff) {
        row.set("stiffness_terms", static_cast<long long>(lr.stiffness.term_count()));
        storage += lr.stiffness.storage_nnz();
      }
      row.set("lowrank_storage", static_cast<long long>(storage));
      if (opt.compare_dense) {
        if (want_mass) {
          if (!dense_mass) dense_mass = assemble_dense(geo, sol, lr.rules, MatrixKind::mass, opt.dense_row_cap);
          row.set("diff_mass", relative_frobenius_diff(lr.mass, *dense_mass));
        }
        if (want_stiff) {
          if (!dense_stiff) dense_stiff = assemble_dense(geo, sol, lr.rules, MatrixKind::stiffness, opt.dense_row_cap);
          row.set("diff_stiffness", relative_frobenius_diff(lr.stiffness, *dense_stiff));
          row.set("dense_nnz", static_cast<long long>(dense_stiff->nonZeros()));
        } else {
          row.set("dense_nnz", static_cast<long long>(dense_mass->nonZeros()));
        }
      }
      row.set("status", std::string("ok"));
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

RankTable cmd_ranks(const RankOptions& opt) {
  if (opt.tols.empty()) throw ValidationError("tols: at least one tolerance required");
  for (double t : opt.tols) check_tol(t);
  const GeometryMap geo = opt.geometry.load();
  const TensorSpace sol = solution_space(geo, opt.level);
  const InterpolationSpace space = build_interpolation_space(geo, sol);
  const std::size_t D = geo.dimension();
  RankTable table;
  for (std::size_t k = 0; k < D; ++k)
    for (std::size_t l = k; l < D; ++l) table.headers.push_back("q" + std::to_string(k + 1) + std::to_string(l + 1));
  table.headers.emplace_back("omega");
  const std::vector<QuadratureRule> rules = make_rules(sol, space);
  for (double tol : opt.tols) {
    const auto t0 = Clock::now();
    const WeightTT w = build_weight_tt(geo, space, tol);
    const KroneckerSum mass = assemble_mass_lr(w, space, sol, rules);
    const KroneckerSum stiff = assemble_stiffness_lr(w, space, sol, rules);
    RankRow row;
    row.tol = tol;
    row.seconds = seconds_since(t0);
    for (std::size_t k = 0; k < D; ++k)
      for (std::size_t l = k; l < D; ++l) row.ranks.push_back(interior_ranks(w.q[k][l]));
    row.ranks.push_back(interior_ranks(w.omega));
    row.mass_terms = mass.term_count();
    row.stiffness_terms = stiff.term_count();
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string RankTable::format() const {
  std::ostringstream os;
  os << "tol";
  for (const auto& h : headers) os << '\t' << h;
  os << "\tmass_terms\tstiffness_terms\n";
  for (const auto& row : rows) {
    os << row.tol;
    for (const auto& r : row.ranks) os << '\t' << rank_cell(r);
    os << '\t' << row.mass_terms << '\t' << row.stiffness_terms << '\n';
  }
  return os.str();
}

RunReport RankTable::report(const std::string& geometry, int level, std::size_t dofs_per_dim,
                            std::size_t total_dofs) const {
  RunReport out;
  for (const auto& r : rows) {
    ReportRow row;
    row.set("command", std::string("ranks"));
    row.set("geometry", geometry);
    row.set("level", static_cast<long long>(level));
    row.set("dofs_per_dim", static_cast<long long>(dofs_per_dim));
    row.set("total_dofs", static_cast<long long>(total_dofs));
    row.set("tol", r.tol);
    row.set("assembly_seconds", r.seconds);
    for (std::size_t i = 0; i < headers.size(); ++i) {
      const std::string col = "rank_" + headers[i];
      const auto& cols = report_columns();
      if (std::find(cols.begin(), cols.end(), col) != cols.end()) row.set(col, rank_cell(r.ranks[i]));
    }
    row.set("mass_terms", static_cast<long long>(r.mass_terms));
    row.set("stiffness_terms", static_cast<long long>(r.stiffness_terms));
    row.set("status", std::string("ok"));
    out.rows.push_back(std::move(row));
  }
  return out;
}

namespace {

TtTensor bump(const std::vector<std::size_t>& dims) {
  std::vector<Eigen::VectorXd> f;
  for (std::size_t n : dims) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      v(static_cast<Eigen::Index>(i)) = std::sin(std::numbers::pi * (static_cast<double>(i) + 1.0) / (static_cast<double>(n) + 1.0));
    }
    f.push_back(std::move(v));
  }
  return TtTensor::rank_one(f);
}

}  // namespace

SolveOutcome cmd_solve_control(const SolveOptions& opt) {
  check_tol(opt.tol);
  if (opt.max_sweeps == 0) throw ValidationError("max-sweeps must be positive");
  const GeometryMap geo = opt.geometry.load();
  const TensorSpace sol = solution_space(geo, opt.level);
  for (const auto& f : sol.factors())
    if (f.size() < 3) throw ValidationError("solution space needs at least 3 basis functions per dimension");

  AssemblyConfig cfg;
  cfg.tol = opt.tol;
  const auto t0 = Clock::now();
  const LowRankAssembly lr = assemble_low_rank(geo, sol, cfg);
  const double assembly_secs = seconds_since(t0);

  ControlProblem problem;
  problem.horizon = opt.horizon;
  problem.steps = opt.steps;
  problem.beta = opt.beta;
  problem.operators = make_operator_lr(lr.mass, lr.stiffness);
  const auto idims = problem.operators.interior_dims();
  if (opt.yhat == "bump") {
    problem.desired_state = bump(idims);
  } else if (opt.yhat == "zero") {
    problem.desired_state = TtTensor::zeros(idims);
  } else {
    problem.desired_state = read_ttb_tensor(opt.yhat);
  }
  const KktSystem sys = build_kkt(problem);

  AmenConfig ac;
  ac.tol = opt.tol;
  ac.seed = opt.seed;
  ac.max_sweeps = opt.max_sweeps;
  ac.enrichment_rank = opt.enrichment_rank;
  const auto t1 = Clock::now();
  SolveOutcome out;
  out.result = block_amen_solve(sys.op, sys.rhs_block(), ac);
  const double solve_secs = seconds_since(t1);

  const TtTensor y = out.result.solution.component(0);
  const TtTensor u = out.result.solution.component(1);
  ReportRow row;
  row.set("command", std::string("solve-control"));
  row.set("geometry", opt.geometry.label());
  row.set("level", static_cast<long long>(opt.level));
  row.set("dofs_per_dim", static_cast<long long>(sol.factor(0).size()));
  row.set("total_dofs", static_cast<long long>(3 * product(sys.op.dims())));
  row.set("tol", opt.tol);
  row.set("assembly_seconds", assembly_secs);
  put_ranks(row, lr.weights);
  row.set("mass_terms", static_cast<long long>(lr.mass.term_count()));
  row.set("stiffness_terms", static_cast<long long>(lr.stiffness.term_count()));
  row.set("lowrank_storage", static_cast<long long>(lr.mass.storage_nnz() + lr.stiffness.storage_nnz()));
  row.set("beta", opt.beta);
  row.set("time_steps", static_cast<long long>(opt.steps));
  row.set("solve_seconds", solve_secs);
  row.set("sweeps", static_cast<long long>(out.result.sweeps));
  row.set("solution_max_rank", static_cast<long long>(out.result.solution.max_rank()));
  row.set("objective", evaluate_objective(problem, y, u));
  row.set("control_norm", control_norm(problem, u));
  row.set("residual", out.result.residual);
  row.set("status", std::string(out.result.converged ? "ok" : "not_converged"));
  out.report.rows.push_back(std::move(row));

  if (opt.solution_out) write_ttb(*opt.solution_out, out.result.solution);
  return out;
}

void cmd_generate(const std::string& name, int degree, const std::filesystem::path& out) {
  write_geometry(out, builtin_geometry(name, degree));
}

}  // namespace lriga::cli

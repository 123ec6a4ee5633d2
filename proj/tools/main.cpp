#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "lriga/errors.hpp"
#include "lriga/geometry_io.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNotConverged = 3;
constexpr int kExitSizeCap = 4;

void add_geometry(CLI::App& cmd, lriga::cli::GeometrySource& g) {
  cmd.add_option("--geometry", g.file, "geometry JSON file");
  cmd.add_option("--builtin", g.builtin, "built-in geometry")
      ->check(CLI::IsMember(lriga::builtin_geometry_names()));
  cmd.add_option("--degree", g.degree, "spline degree of a built-in geometry")->check(CLI::PositiveNumber);
}

std::vector<double> parse_tols(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw lriga::ValidationError("tol: cannot parse '" + item + "'");
    }
  }
  return out;
}

void emit(const lriga::cli::RunReport& r, const std::string& out) {
  if (out.empty())
    r.write_csv(std::cout);
  else
    r.write_csv(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-rank isogeometric assembly and space-time optimal control"};
  app.require_subcommand(1);

  lriga::cli::AssembleOptions asm_opt;
  std::string asm_tols = "1e-7";
  std::string asm_matrix = "both";
  std::string asm_out;
  auto* assemble = app.add_subcommand("assemble", "low-rank assembly, optionally against the dense reference");
  add_geometry(*assemble, asm_opt.geometry);
  assemble->add_option("--refine", asm_opt.max_level, "levels 1..K, 4K knots inserted per span")->check(CLI::NonNegativeNumber);
  assemble->add_option("--tol", asm_tols, "tolerance or comma separated list");
  assemble->add_option("--matrix", asm_matrix, "mass|stiffness|both")->check(CLI::IsMember({"mass", "stiffness", "both"}));
  assemble->add_flag("--compare-dense", asm_opt.compare_dense, "assemble the dense reference and report the difference");
  assemble->add_option("--nodes-per-span", asm_opt.nodes_per_span, "Gauss nodes per span (0: exact)")->check(CLI::NonNegativeNumber);
  assemble->add_option("--out", asm_out, "CSV report path (default stdout)");

  lriga::cli::RankOptions rank_opt;
  std::string rank_tols = "1e-10,1e-7,1e-4";
  std::string rank_out;
  auto* ranks = app.add_subcommand("ranks", "TT ranks of the interpolated weights per tolerance");
  add_geometry(*ranks, rank_opt.geometry);
  ranks->add_option("--refine", rank_opt.level, "refinement level")->check(CLI::NonNegativeNumber);
  ranks->add_option("--tols", rank_tols, "comma separated tolerances");
  ranks->add_option("--out", rank_out, "CSV report path");

  lriga::cli::SolveOptions solve_opt;
  std::string solve_out;
  std::string solution_path;
  auto* solve = app.add_subcommand("solve-control", "space-time optimal control by block AMEn");
  add_geometry(*solve, solve_opt.geometry);
  solve->add_option("--refine", solve_opt.level, "refinement level")->check(CLI::NonNegativeNumber);
  solve->add_option("--beta", solve_opt.beta, "control cost")->check(CLI::PositiveNumber);
  solve->add_option("--nt", solve_opt.steps, "time steps")->check(CLI::PositiveNumber);
  solve->add_option("--horizon", solve_opt.horizon, "final time")->check(CLI::PositiveNumber);
  solve->add_option("--tol", solve_opt.tol, "interpolation and solver accuracy");
  solve->add_option("--seed", solve_opt.seed, "initial guess seed");
  solve->add_option("--yhat", solve_opt.yhat, "desired state: bump, zero or a TTB1 file");
  solve->add_option("--max-sweeps", solve_opt.max_sweeps, "sweep limit")->check(CLI::PositiveNumber);
  solve->add_option("--enrichment-rank", solve_opt.enrichment_rank, "residual directions per core move");
  solve->add_option("--out", solve_out, "CSV report path (default stdout)");
  solve->add_option("--solution", solution_path, "TTB1 solution file");

  std::string gen_name;
  int gen_degree = 2;
  std::string gen_out;
  auto* generate = app.add_subcommand("generate", "write a built-in geometry as JSON");
  generate->add_option("name", gen_name, "built-in name")->required()->check(CLI::IsMember(lriga::builtin_geometry_names()));
  generate->add_option("--degree", gen_degree, "spline degree")->check(CLI::PositiveNumber);
  generate->add_option("--out", gen_out, "output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*assemble) {
      asm_opt.tols = parse_tols(asm_tols);
      asm_opt.matrix = asm_matrix == "mass"        ? lriga::cli::MatrixChoice::mass
                       : asm_matrix == "stiffness" ? lriga::cli::MatrixChoice::stiffness
                                                   : lriga::cli::MatrixChoice::both;
      emit(lriga::cli::cmd_assemble(asm_opt), asm_out);
    } else if (*ranks) {
      rank_opt.tols = parse_tols(rank_tols);
      const auto table = lriga::cli::cmd_ranks(rank_opt);
      std::cout << table.format();
      if (!rank_out.empty()) {
        const auto geo = rank_opt.geometry.load();
        const auto sol = lriga::cli::solution_space(geo, rank_opt.level);
        table.report(rank_opt.geometry.label(), rank_opt.level, sol.factor(0).size(), sol.total_size())
            .write_csv(rank_out);
      }
    } else if (*solve) {
      if (!solution_path.empty()) solve_opt.solution_out = solution_path;
      const auto outcome = lriga::cli::cmd_solve_control(solve_opt);
      emit(outcome.report, solve_out);
      if (!outcome.result.converged) {
        std::cerr << "solve-control: no convergence after " << outcome.result.sweeps << " sweeps (residual "
                  << outcome.result.residual << ")\n";
        return kExitNotConverged;
      }
    } else if (*generate) {
      lriga::cli::cmd_generate(gen_name, gen_degree, gen_out);
    }
  } catch (const lriga::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const lriga::SizeCapError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSizeCap;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return EXIT_FAILURE;
  }
  return EXIT_SUCCESS;
}

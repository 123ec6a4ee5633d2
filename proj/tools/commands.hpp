#pragma once

// Experiment commands behind the lriga executable. Each returns a report and leaves
// flag parsing and exit codes to main.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lriga/amen.hpp"
#include "lriga/geometry.hpp"
#include "report.hpp"

namespace lriga::cli {

struct GeometrySource {
  std::optional<std::filesystem::path> file;
  std::string builtin;
  /// Degree of a built-in geometry; ignored for files.
  int degree = 2;

  [[nodiscard]] GeometryMap load() const;
  [[nodiscard]] std::string label() const;
};

/// Solution space of refinement level L: 4L knots inserted into every span of the geometry knots.
[[nodiscard]] TensorSpace solution_space(const GeometryMap& geo, int level);

enum class MatrixChoice { mass, stiffness, both };

struct AssembleOptions {
  GeometrySource geometry;
  /// Levels 1..max_level; 0 assembles the unrefined space only.
  int max_level = 1;
  std::vector<double> tols{1e-7};
  MatrixChoice matrix = MatrixChoice::both;
  bool compare_dense = false;
  int nodes_per_span = 0;
  std::size_t dense_row_cap = 200000;
};

/// One row per (level, tol).
[[nodiscard]] RunReport cmd_assemble(const AssembleOptions& opt);

struct RankOptions {
  GeometrySource geometry;
  int level = 1;
  std::vector<double> tols{1e-10, 1e-7, 1e-4};
};

struct RankRow {
  double tol = 0.0;
  /// Interior TT ranks (R_1, ..., R_{D-1}) of q_kl for k <= l in row-major order, then omega.
  std::vector<std::vector<std::size_t>> ranks;
  std::size_t mass_terms = 0;
  std::size_t stiffness_terms = 0;
  double seconds = 0.0;
};

struct RankTable {
  std::vector<std::string> headers;
  std::vector<RankRow> rows;

  /// Text table: one row per tolerance, one "(R1,R2)" cell per weight entry.
  [[nodiscard]] std::string format() const;
  [[nodiscard]] RunReport report(const std::string& geometry, int level, std::size_t dofs_per_dim,
                                 std::size_t total_dofs) const;
};

[[nodiscard]] RankTable cmd_ranks(const RankOptions& opt);

struct SolveOptions {
  GeometrySource geometry;
  int level = 1;
  double beta = 1e-2;
  std::size_t steps = 10;
  double horizon = 1.0;
  /// Accuracy of both the weight interpolation and the solver.
  double tol = 1e-5;
  std::uint64_t seed = 42;
  /// "bump", "zero", or a TTB1 file holding the desired state.
  std::string yhat = "bump";
  std::optional<std::filesystem::path> solution_out;
  std::size_t max_sweeps = 30;
  std::size_t enrichment_rank = 3;
};

struct SolveOutcome {
  RunReport report;
  AmenResult result;
};

[[nodiscard]] SolveOutcome cmd_solve_control(const SolveOptions& opt);

/// Writes a built-in geometry as JSON.
void cmd_generate(const std::string& name, int degree, const std::filesystem::path& out);

}  // namespace lriga::cli

#pragma once

// Block AMEn: alternating solves on the block core of a block tensor train, with the
// component index carried along by core moves and ranks enriched by residual directions.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lriga/block_tt.hpp"
#include "lriga/optctl.hpp"

namespace lriga {

enum class LocalSolver { automatic, direct, minres };

struct AmenConfig {
  /// Target relative residual of the full system.
  double tol = 1e-6;
  std::size_t max_sweeps = 30;
  /// Residual directions added per core move.
  std::size_t enrichment_rank = 3;
  LocalSolver local_solver = LocalSolver::automatic;
  /// Local systems up to this size are factorized directly in automatic mode.
  std::size_t direct_limit = 2000;
  /// MINRES tolerance; 0 selects 0.1 * tol.
  double local_tol = 0.0;
  int local_maxit = 2000;
  std::size_t rank_cap = kNoRankCap;
  /// Relative SVD truncation in core moves; 0 selects 0.01 * tol.
  double truncation_tol = 0.0;
  std::uint64_t seed = 42;
  /// Called with the current iterate (block at the core) before every local solve.
  std::function<void(const BlockTt&, std::size_t core)> before_local_solve;
};

struct AmenResult {
  BlockTt solution;
  bool converged = false;
  std::size_t sweeps = 0;
  double residual = 0.0;
  std::vector<double> residual_history;
  std::size_t minres_failures = 0;
};

/// Solves A x = b for a block operator and a block right-hand side. The solution has its block
/// index at core 0. Returns the last iterate with converged == false when max_sweeps is reached.
/// Throws SingularSystemError when a projected system cannot be factorized.
[[nodiscard]] AmenResult block_amen_solve(const BlockOperator& op, const BlockTt& rhs, const AmenConfig& cfg);

}  // namespace lriga

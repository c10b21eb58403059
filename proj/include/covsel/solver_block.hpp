#pragma once

#include <optional>

#include "covsel/linalg.hpp"
#include "covsel/model.hpp"
#include "covsel/solver_box.hpp"

namespace covsel {

struct ArmijoStep {
  double t = 0.0;
  std::size_t reductions = 0;
  bool stalled = false;
  // Populated only when accepted.
  Matrix w_next;
  Matrix direction;  // D = Π_S(W + tG) - W
  double directional_gain = 0.0;  // tr(DG)
  std::optional<CholeskyFactor> factor;
  double objective = 0.0;
};

/// Backtracking search over t_init·β^k for the first t with
/// f(Π_S(W+tG)) ≥ f0 + α·tr(DG). Infeasible candidates are rejected.
ArmijoStep armijo_step(const EmpiricalCovariance& cov, const Matrix& w, const Matrix& grad,
                       const BlockPenalty& penalty, double t_init, double f0,
                       const SolveOptions& opts);

/// Projected gradient ascent with Armijo steps on the block-constrained dual.
SolveResult solve_block(const EmpiricalCovariance& cov, const BlockPenalty& penalty,
                        const SolveOptions& opts = {}, const IterateObserver& observer = {});

}  // namespace covsel

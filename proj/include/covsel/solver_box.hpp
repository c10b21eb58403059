#pragma once

#include <functional>
#include <optional>

#include "covsel/linalg.hpp"
#include "covsel/model.hpp"

namespace covsel {

/// Called with (iteration, W) after every accepted update.
using IterateObserver = std::function<void(std::size_t, const Matrix&)>;

/// (Σ̂+W)^{-1} with the diagonal zeroed and every component that would push
/// an active box constraint outward zeroed.
Matrix masked_gradient(const EmpiricalCovariance& cov, const DualPoint& w,
                       const ElementwisePenalty& penalty);

/// Masks `grad` (holding (Σ̂+W)^{-1}) in place.
void mask_gradient(Matrix& grad, const Matrix& w, const ElementwisePenalty& penalty);

struct LineSearchStep {
  double t = 0.0;
  double initial_t = 0.0;
  std::size_t halvings = 0;
  bool stalled = false;
  // Populated only when a step was accepted.
  Matrix w_next;
  std::optional<CholeskyFactor> factor;
  double objective = 0.0;
};

/// Step from the second-order model of log det, halved until
/// log det(Σ̂ + Π(W + tG)) > f0. `inverse` is (Σ̂+W)^{-1}, `f0` its objective.
LineSearchStep quadratic_line_search(const EmpiricalCovariance& cov, const Matrix& w,
                                     const Matrix& grad, const Matrix& inverse,
                                     const ElementwisePenalty& penalty, double f0,
                                     const SolveOptions& opts);

/// Convenience form that factorizes Σ̂ + W itself.
LineSearchStep quadratic_line_search(const EmpiricalCovariance& cov, const DualPoint& w,
                                     const Matrix& grad, const ElementwisePenalty& penalty,
                                     const SolveOptions& opts);

/// Projected gradient ascent on the box-constrained dual.
SolveResult solve_box(const EmpiricalCovariance& cov, const ElementwisePenalty& penalty,
                      const SolveOptions& opts = {}, const IterateObserver& observer = {});

}  // namespace covsel

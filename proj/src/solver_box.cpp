#include "covsel/solver_box.hpp"

#include <chrono>
#include <cmath>

#include "covsel/duality.hpp"
#include "covsel/error.hpp"
#include "covsel/kernels.hpp"
#include "covsel/projections.hpp"

namespace covsel {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Relative tolerance for treating W_ij as sitting on ±λ_ij.
constexpr double kActivityTol = 1e-12;

}  // namespace

void mask_gradient(Matrix& grad, const Matrix& w, const ElementwisePenalty& penalty) {
  const std::size_t n = grad.rows();
  if (w.rows() != n || penalty.n() != n) throw Error(Errc::DimensionMismatch, "mask_gradient shape mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) {
        grad(i, i) = 0.0;
        continue;
      }
      const double lambda = penalty(i, j);
      const double wij = w(i, j);
      if (std::abs(lambda - std::abs(wij)) > kActivityTol * std::max(1.0, lambda)) continue;
      const double g = grad(i, j);
      if ((wij > 0.0 && g > 0.0) || (wij < 0.0 && g < 0.0)) grad(i, j) = 0.0;
    }
  }
}

Matrix masked_gradient(const EmpiricalCovariance& cov, const DualPoint& w, const ElementwisePenalty& penalty) {
  Matrix grad = spd_inverse(cholesky(cov.entries() + w.w()));
  mask_gradient(grad, w.w(), penalty);
  return grad;
}

LineSearchStep quadratic_line_search(const EmpiricalCovariance& cov, const Matrix& w, const Matrix& grad,
                                     const Matrix& inverse, const ElementwisePenalty& penalty, double f0,
                                     const SolveOptions& opts) {
  const auto& kern = active_kernels();
  LineSearchStep step;

  double t = 1.0;
  if (kern.max_abs(grad.data(), grad.size()) == 0.0) {
    step.initial_t = t;
    step.stalled = true;
    return step;
  }
  // Maximizer of the second-order model f0 + t·tr(AG) - t²/2·tr(AGAG).
  const Matrix ag = multiply(inverse, grad);
  const double t0 = trace_product(inverse, grad) / trace_product(ag, ag);
  if (std::isfinite(t0) && t0 > 0.0) t = t0;
  step.initial_t = t;

  Matrix candidate(w.rows(), w.cols());
  while (true) {
    std::copy(w.data(), w.data() + w.size(), candidate.data());
    kern.axpy(t, grad.data(), candidate.data(), candidate.size());
    kern.clamp(candidate.data(), penalty.lambda().data(), candidate.data(), candidate.size());
    if (auto factor = try_cholesky(cov.entries() + candidate)) {
      const double f = log_det(*factor);
      if (f > f0) {
        step.t = t;
        step.objective = f;
        step.factor = std::move(factor);
        step.w_next = std::move(candidate);
        return step;
      }
    }
    t *= 0.5;
    ++step.halvings;
    if (t < opts.halving_min_t) {
      step.t = t;
      step.stalled = true;
      return step;
    }
  }
}

LineSearchStep quadratic_line_search(const EmpiricalCovariance& cov, const DualPoint& w, const Matrix& grad,
                                     const ElementwisePenalty& penalty, const SolveOptions& opts) {
  const CholeskyFactor factor = cholesky(cov.entries() + w.w());
  return quadratic_line_search(cov, w.w(), grad, spd_inverse(factor), penalty, log_det(factor), opts);
}

SolveResult solve_box(const EmpiricalCovariance& cov, const ElementwisePenalty& penalty, const SolveOptions& opts,
                      const IterateObserver& observer) {
  const auto start = Clock::now();
  opts.validate();
  require_valid(penalty);

  Matrix w = feasible_init(cov, penalty).w();
  const CholeskyFactor factor0 = cholesky(cov.entries() + w);
  double f = log_det(factor0);
  Matrix k = spd_inverse(factor0);
  double gap = duality_gap_box(cov, k, penalty);

  SolveReport report;
  report.initial_objective = f;
  report.initial_gap = gap;
  if (observer) observer(0, w);

  report.termination = Termination::MaxIter;
  if (gap < opts.gap_tol) {
    report.termination = Termination::GapReached;
  } else {
    for (std::size_t iter = 1; iter <= opts.max_iter; ++iter) {
      const auto iter_start = Clock::now();
      Matrix grad = k;
      mask_gradient(grad, w, penalty);
      LineSearchStep step = quadratic_line_search(cov, w, grad, k, penalty, f, opts);
      if (step.stalled) {
        report.termination = Termination::LineSearchStalled;
        break;
      }
      w = std::move(step.w_next);
      f = step.objective;
      k = spd_inverse(*step.factor);
      gap = duality_gap_box(cov, k, penalty);

      report.iterations = iter;
      report.gaps.push_back(gap);
      report.objectives.push_back(f);
      report.step_sizes.push_back(step.t);
      report.iteration_seconds.push_back(seconds_since(iter_start));
      if (observer) observer(iter, w);
      if (gap < opts.gap_tol) {
        report.termination = Termination::GapReached;
        break;
      }
    }
  }

  DualPoint dual(std::move(w));
  PrecisionEstimate estimate = extract_structure(dual, k, penalty, opts);
  report.wall_seconds = seconds_since(start);
  return {std::move(estimate), std::move(dual), std::move(report)};
}

}  // namespace covsel

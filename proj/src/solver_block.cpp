#include "covsel/solver_block.hpp"

#include <algorithm>
#include <chrono>

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

constexpr double kMaxStep = 1e6;

}  // namespace

ArmijoStep armijo_step(const EmpiricalCovariance& cov, const Matrix& w, const Matrix& grad,
                       const BlockPenalty& penalty, double t_init, double f0, const SolveOptions& opts) {
  if (!(t_init > 0.0)) throw Error(Errc::InvalidArgument, "armijo_step needs t_init > 0");
  const auto& kern = active_kernels();
  ArmijoStep step;
  double t = t_init;
  Matrix candidate(w.rows(), w.cols());
  while (true) {
    std::copy(w.data(), w.data() + w.size(), candidate.data());
    kern.axpy(t, grad.data(), candidate.data(), candidate.size());
    candidate = project_block_constraints(candidate, penalty);
    Matrix direction = candidate - w;
    if (kern.max_abs(direction.data(), direction.size()) == 0.0) {
      // Π_S(W + tG) = W: no feasible ascent along G at all.
      step.t = t;
      step.w_next = w;
      step.direction = std::move(direction);
      step.objective = f0;
      return step;
    }
    const double gain = trace_product(direction, grad);
    if (auto factor = try_cholesky(cov.entries() + candidate)) {
      const double f = log_det(*factor);
      if (f >= f0 + opts.armijo_alpha * gain && f > f0) {
        step.t = t;
        step.objective = f;
        step.directional_gain = gain;
        step.factor = std::move(factor);
        step.w_next = std::move(candidate);
        step.direction = std::move(direction);
        return step;
      }
    }
    t *= opts.armijo_beta;
    ++step.reductions;
    if (t < opts.halving_min_t) {
      step.t = t;
      step.stalled = true;
      return step;
    }
  }
}

SolveResult solve_block(const EmpiricalCovariance& cov, const BlockPenalty& penalty, const SolveOptions& opts,
                        const IterateObserver& observer) {
  const auto start = Clock::now();
  opts.validate();
  require_valid(penalty);

  Matrix w = feasible_init(cov, penalty).w();
  const CholeskyFactor factor0 = cholesky(cov.entries() + w);
  double f = log_det(factor0);
  Matrix k = spd_inverse(factor0);
  double gap = duality_gap_block(cov, k, penalty);

  SolveReport report;
  report.initial_objective = f;
  report.initial_gap = gap;
  if (observer) observer(0, w);

  report.termination = Termination::MaxIter;
  double t = 1.0;
  if (gap < opts.gap_tol) {
    report.termination = Termination::GapReached;
  } else {
    for (std::size_t iter = 1; iter <= opts.max_iter; ++iter) {
      const auto iter_start = Clock::now();
      Matrix grad = k;
      for (std::size_t i = 0; i < grad.rows(); ++i) grad(i, i) = 0.0;
      ArmijoStep step = armijo_step(cov, w, grad, penalty, t, f, opts);
      if (step.stalled || !step.factor) {
        report.termination = Termination::LineSearchStalled;
        break;
      }
      w = std::move(step.w_next);
      f = step.objective;
      k = spd_inverse(*step.factor);
      gap = duality_gap_block(cov, k, penalty);
      t = std::min(step.t / opts.armijo_beta, kMaxStep);

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

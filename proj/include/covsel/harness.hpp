#pragma once

#include <cstddef>
#include <vector>

#include "covsel/model.hpp"

namespace covsel {

/// `count` log-spaced values from hi down to lo (both included).
std::vector<double> log_grid(double hi, double lo, std::size_t count);

/// max_{i≠j} |Σ̂_ij|: the smallest uniform λ at which the box solution has no
/// edges.
double max_off_diagonal(const EmpiricalCovariance& cov);

struct SweepRow {
  double lambda = 0.0;
  std::size_t edges = 0;
  double train_objective = 0.0;
  double test_loglik = 0.0;
  double gap = 0.0;
  std::size_t iterations = 0;
  Termination termination = Termination::MaxIter;
};

/// Solves the box problem with λ_ij = λ (i≠j), λ_ii = diag_lambda for each λ
/// and scores the estimate on the test covariance. Rows follow grid order.
std::vector<SweepRow> sweep_box(const EmpiricalCovariance& train, const Matrix& test_cov,
                                const std::vector<double>& lambdas, double diag_lambda,
                                const SolveOptions& opts);

/// Same for group-derived block penalties, one row per scale value.
std::vector<SweepRow> sweep_groups(const EmpiricalCovariance& train, const Matrix& test_cov,
                                   const std::vector<std::vector<std::size_t>>& groups,
                                   const std::vector<double>& scales, double diag_lambda,
                                   const SolveOptions& opts);

struct TikhonovRow {
  double nu = 0.0;
  double test_loglik = 0.0;
};

std::vector<TikhonovRow> sweep_tikhonov(const Matrix& train_cov, const Matrix& test_cov,
                                        const std::vector<double>& nus);

struct LambdaSearch {
  double lambda = 0.0;
  std::size_t edges = 0;
  std::size_t solves = 0;
};

/// Bisects log λ in [lo, hi] for a uniform penalty whose solution has about
/// `target_edges` edges. Stops after `max_solves` solves or on an exact hit.
LambdaSearch bisect_lambda_for_edges(const EmpiricalCovariance& cov, std::size_t target_edges,
                                     double lo, double hi, const SolveOptions& opts,
                                     std::size_t max_solves = 20);

}  // namespace covsel

#include "covsel/harness.hpp"

#include <cmath>
#include <cstdlib>

#include "covsel/error.hpp"
#include "covsel/eval.hpp"
#include "covsel/solver_block.hpp"
#include "covsel/solver_box.hpp"
#include "covsel/synth.hpp"

namespace covsel {

std::vector<double> log_grid(double hi, double lo, std::size_t count) {
  if (!(hi > 0.0) || !(lo > 0.0)) throw Error(Errc::InvalidArgument, "grid bounds must be > 0");
  if (count == 0) return {};
  if (count == 1) return {hi};
  std::vector<double> grid(count);
  const double a = std::log(hi);
  const double b = std::log(lo);
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  grid.front() = hi;
  grid.back() = lo;
  return grid;
}

double max_off_diagonal(const EmpiricalCovariance& cov) {
  double m = 0.0;
  for (std::size_t i = 0; i < cov.n(); ++i) {
    for (std::size_t j = i + 1; j < cov.n(); ++j) m = std::max(m, std::abs(cov(i, j)));
  }
  return m;
}

namespace {

SweepRow row_from(double lambda, const SolveResult& r, const Matrix& test_cov) {
  SweepRow row;
  row.lambda = lambda;
  row.edges = r.estimate.edges.size();
  row.train_objective = r.report.final_objective();
  // estimate.k stays PD: extract_structure undoes a truncation that breaks it.
  row.test_loglik = avg_loglik(test_cov, r.estimate.k);
  row.gap = r.report.final_gap();
  row.iterations = r.report.iterations;
  row.termination = r.report.termination;
  return row;
}

}  // namespace

std::vector<SweepRow> sweep_box(const EmpiricalCovariance& train, const Matrix& test_cov,
                                const std::vector<double>& lambdas, double diag_lambda, const SolveOptions& opts) {
  std::vector<SweepRow> rows;
  rows.reserve(lambdas.size());
  for (double lambda : lambdas) {
    const auto penalty = ElementwisePenalty::uniform(train.n(), lambda, diag_lambda);
    rows.push_back(row_from(lambda, solve_box(train, penalty, opts), test_cov));
  }
  return rows;
}

std::vector<SweepRow> sweep_groups(const EmpiricalCovariance& train, const Matrix& test_cov,
                                   const std::vector<std::vector<std::size_t>>& groups,
                                   const std::vector<double>& scales, double diag_lambda, const SolveOptions& opts) {
  std::vector<SweepRow> rows;
  rows.reserve(scales.size());
  for (double scale : scales) {
    const auto penalty = blocks_from_groups(groups, scale, std::vector<double>(train.n(), diag_lambda));
    rows.push_back(row_from(scale, solve_block(train, penalty, opts), test_cov));
  }
  return rows;
}

std::vector<TikhonovRow> sweep_tikhonov(const Matrix& train_cov, const Matrix& test_cov,
                                        const std::vector<double>& nus) {
  std::vector<TikhonovRow> rows;
  rows.reserve(nus.size());
  for (double nu : nus) {
    const GaussianModel model = tikhonov(train_cov, nu);
    rows.push_back({nu, avg_loglik(test_cov, model.precision.k)});
  }
  return rows;
}

LambdaSearch bisect_lambda_for_edges(const EmpiricalCovariance& cov, std::size_t target_edges, double lo,
                                     double hi, const SolveOptions& opts, std::size_t max_solves) {
  if (!(lo > 0.0) || !(hi > lo)) throw Error(Errc::InvalidArgument, "need 0 < lo < hi");
  LambdaSearch best;
  std::size_t best_miss = static_cast<std::size_t>(-1);
  double log_lo = std::log(lo);
  double log_hi = std::log(hi);
  for (std::size_t s = 0; s < max_solves; ++s) {
    const double lambda = std::exp(0.5 * (log_lo + log_hi));
    const auto result = solve_box(cov, ElementwisePenalty::uniform(cov.n(), lambda), opts);
    const std::size_t edges = result.estimate.edges.size();
    const std::size_t miss = edges > target_edges ? edges - target_edges : target_edges - edges;
    if (miss < best_miss) {
      best_miss = miss;
      best.lambda = lambda;
      best.edges = edges;
    }
    best.solves = s + 1;
    if (miss == 0) break;
    // Larger λ gives sparser solutions.
    if (edges > target_edges) {
      log_lo = std::log(lambda);
    } else {
      log_hi = std::log(lambda);
    }
  }
  return best;
}

}  // namespace covsel

#include "covsel/duality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "covsel/error.hpp"
#include "covsel/kernels.hpp"
#include "covsel/linalg.hpp"

namespace covsel {
namespace {

// Fraction of each constraint's radius the starting point may use.
constexpr double kInitMarginUse = 0.9;

void check_dims(const EmpiricalCovariance& cov, std::size_t n) {
  if (cov.n() != n) throw Error(Errc::DimensionMismatch, "penalty and covariance differ in size");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(cov(i, i) > 0.0)) {
      throw Error(Errc::DegenerateCovariance, "diagonal entry " + std::to_string(i) + " is not positive");
    }
  }
}

double alpha_from_ratio(double min_ratio) {
  if (!std::isfinite(min_ratio)) return 0.0;
  return std::max(0.0, 1.0 - kInitMarginUse * min_ratio);
}

DualPoint shrunk_start(const EmpiricalCovariance& cov, double alpha, const std::vector<double>& diag) {
  const std::size_t n = cov.n();
  Matrix w(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) w(i, j) = (i == j) ? diag[i] : -(1.0 - alpha) * cov(i, j);
  }
  DualPoint start(std::move(w));
  if (!try_cholesky(cov.entries() + start.w())) {
    throw Error(Errc::NotPositiveDefinite, "shrunk starting point is not positive definite");
  }
  return start;
}

PrecisionEstimate truncate(const Matrix& k, std::vector<Edge> edges, const std::vector<char>& keep) {
  const std::size_t n = k.rows();
  PrecisionEstimate out;
  out.edges = std::move(edges);
  out.k = k;
  bool changed = false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!keep[i * n + j] && out.k(i, j) != 0.0) {
        out.k(i, j) = 0.0;
        out.k(j, i) = 0.0;
        changed = true;
      }
    }
  }
  if (changed && !try_cholesky(out.k)) {
    out.k = k;
    out.truncation_broke_pd = true;
  }
  return out;
}

}  // namespace

double feasible_init_alpha(const EmpiricalCovariance& cov, const ElementwisePenalty& penalty) {
  check_dims(cov, penalty.n());
  double min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cov.n(); ++i) {
    for (std::size_t j = i + 1; j < cov.n(); ++j) {
      const double s = std::abs(cov(i, j));
      if (s > 0.0) min_ratio = std::min(min_ratio, penalty(i, j) / s);
    }
  }
  return alpha_from_ratio(min_ratio);
}

double feasible_init_alpha(const EmpiricalCovariance& cov, const BlockPenalty& penalty) {
  check_dims(cov, penalty.n());
  double min_ratio = std::numeric_limits<double>::infinity();
  for (const auto& block : penalty.blocks()) {
    double s = 0.0;
    for (const auto& e : block.pairs) s += std::abs(cov(e.first, e.second));
    if (s > 0.0) min_ratio = std::min(min_ratio, block.radius / s);
  }
  return alpha_from_ratio(min_ratio);
}

DualPoint feasible_init(const EmpiricalCovariance& cov, const ElementwisePenalty& penalty) {
  require_valid(penalty);
  const double alpha = feasible_init_alpha(cov, penalty);
  return shrunk_start(cov, alpha, penalty.lambda().diag());
}

DualPoint feasible_init(const EmpiricalCovariance& cov, const BlockPenalty& penalty) {
  require_valid(penalty);
  const double alpha = feasible_init_alpha(cov, penalty);
  return shrunk_start(cov, alpha, penalty.diag_lambda());
}

double duality_gap_box(const EmpiricalCovariance& cov, const Matrix& k, const ElementwisePenalty& penalty) {
  if (k.rows() != cov.n() || penalty.n() != cov.n() || !k.is_square()) {
    throw Error(Errc::DimensionMismatch, "duality_gap_box shape mismatch");
  }
  const double penalty_term = active_kernels().weighted_abs_sum(penalty.lambda().data(), k.data(), k.size());
  return trace_product(cov.entries(), k) + penalty_term - static_cast<double>(cov.n());
}

double duality_gap_block(const EmpiricalCovariance& cov, const Matrix& k, const BlockPenalty& penalty) {
  if (k.rows() != cov.n() || penalty.n() != cov.n() || !k.is_square() ||
      penalty.diag_lambda().size() != cov.n()) {
    throw Error(Errc::DimensionMismatch, "duality_gap_block shape mismatch");
  }
  double penalty_term = 0.0;
  for (std::size_t i = 0; i < cov.n(); ++i) penalty_term += penalty.diag_lambda()[i] * std::abs(k(i, i));
  for (const auto& block : penalty.blocks()) {
    double m = 0.0;
    for (const auto& e : block.pairs) m = std::max(m, std::abs(k(e.first, e.second)));
    // The block covers both mirrored entries of each pair.
    penalty_term += 2.0 * block.radius * m;
  }
  return trace_product(cov.entries(), k) + penalty_term - static_cast<double>(cov.n());
}

PrecisionEstimate extract_structure(const DualPoint& w, const Matrix& k, const ElementwisePenalty& penalty,
                                    const SolveOptions& opts) {
  const std::size_t n = k.rows();
  if (w.n() != n || penalty.n() != n) throw Error(Errc::DimensionMismatch, "extract_structure shape mismatch");
  std::vector<char> keep(n * n, 0);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool active = penalty(i, j) - std::abs(w.w()(i, j)) <= opts.complementarity_margin;
      if (active && std::abs(k(i, j)) > opts.sparsity_tol) {
        keep[i * n + j] = 1;
        edges.emplace_back(i, j);
      }
    }
  }
  return truncate(k, std::move(edges), keep);
}

PrecisionEstimate extract_structure(const DualPoint& w, const Matrix& k, const BlockPenalty& penalty,
                                    const SolveOptions& opts) {
  const std::size_t n = k.rows();
  if (w.n() != n || penalty.n() != n) throw Error(Errc::DimensionMismatch, "extract_structure shape mismatch");
  std::vector<char> keep(n * n, 0);
  std::vector<Edge> edges;
  for (const auto& block : penalty.blocks()) {
    double used = 0.0;
    for (const auto& e : block.pairs) used += std::abs(w.w()(e.first, e.second));
    if (block.radius - used > opts.complementarity_margin) continue;
    for (const auto& e : block.pairs) {
      if (std::abs(k(e.first, e.second)) > opts.sparsity_tol) {
        keep[e.first * n + e.second] = 1;
        edges.push_back(e);
      }
    }
  }
  std::sort(edges.begin(), edges.end());
  return truncate(k, std::move(edges), keep);
}

}  // namespace covsel

#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "covsel/error.hpp"
#include "covsel/matrix.hpp"

namespace covsel {

/// Unordered off-diagonal index pair, stored with first < second.
struct Edge {
  std::size_t first = 0;
  std::size_t second = 0;

  Edge() = default;
  Edge(std::size_t i, std::size_t j) : first(i < j ? i : j), second(i < j ? j : i) {}

  auto operator<=>(const Edge&) const = default;
};

/// Sample second-moment matrix Σ̂. Always exactly symmetric, PSD within
/// -1e-8·‖Σ̂‖_F, with a strictly positive diagonal.
class EmpiricalCovariance {
 public:
  /// Symmetrizes `entries`, then checks the invariants. Throws
  /// DegenerateCovariance (diagonal ≤ 0), NotPositiveSemidefinite or
  /// DimensionMismatch.
  explicit EmpiricalCovariance(Matrix entries);

  std::size_t n() const noexcept { return entries_.rows(); }
  const Matrix& entries() const noexcept { return entries_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return entries_(i, j); }

 private:
  Matrix entries_;
};

/// Elementwise penalty λ (the box |W_ij| ≤ λ_ij). Holds raw data; use
/// validate_penalty before solving.
class ElementwisePenalty {
 public:
  explicit ElementwisePenalty(Matrix lambda) : lambda_(std::move(lambda)) {}

  /// λ_ij = off_diagonal for i ≠ j, λ_ii = diagonal.
  static ElementwisePenalty uniform(std::size_t n, double off_diagonal, double diagonal = 0.0);

  std::size_t n() const noexcept { return lambda_.rows(); }
  const Matrix& lambda() const noexcept { return lambda_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return lambda_(i, j); }

 private:
  Matrix lambda_;
};

/// One block S_k of unordered off-diagonal pairs sharing the radius λ_k. The
/// radius bounds Σ |W_ij| over the block's pairs counted once each (upper
/// triangle); the matching primal penalty is 2·λ_k·max |K_ij|.
struct PairBlock {
  std::vector<Edge> pairs;
  double radius = 0.0;
};

class BlockPenalty {
 public:
  /// Raw constructor: no coverage fill-in, no checks.
  BlockPenalty(std::size_t n, std::vector<PairBlock> blocks, std::vector<double> diag_lambda);

  /// Appends a singleton block with `default_radius` for every off-diagonal
  /// pair not mentioned in `blocks`.
  static BlockPenalty with_default(std::size_t n, std::vector<PairBlock> blocks,
                                   std::vector<double> diag_lambda, double default_radius);

  /// One singleton block per pair, radius λ_ij, diagonal λ_ii. Same feasible
  /// set as the box penalty.
  static BlockPenalty singletons(const ElementwisePenalty& penalty);

  std::size_t n() const noexcept { return n_; }
  const std::vector<PairBlock>& blocks() const noexcept { return blocks_; }
  const std::vector<double>& diag_lambda() const noexcept { return diag_lambda_; }

 private:
  std::size_t n_;
  std::vector<PairBlock> blocks_;
  std::vector<double> diag_lambda_;
};

struct Violation {
  Errc code;
  std::string detail;
};

/// Empty when every invariant holds, otherwise the first violated one.
std::optional<Violation> validate_penalty(const ElementwisePenalty& penalty);
std::optional<Violation> validate_penalty(const BlockPenalty& penalty);

/// Throws Error when validate_penalty reports a violation.
void require_valid(const ElementwisePenalty& penalty);
void require_valid(const BlockPenalty& penalty);

/// Builds S_qr = B_q × B_r for every unordered group pair {q, r} (q = r
/// included, diagonal pairs excluded), with λ_k = scale·|S_k|. Groups must
/// partition {0, …, n-1}; n is the total number of indices.
BlockPenalty blocks_from_groups(const std::vector<std::vector<std::size_t>>& groups, double scale,
                                std::vector<double> diag_lambda = {});

/// Dual iterate W. Symmetric by construction.
class DualPoint {
 public:
  DualPoint() = default;
  explicit DualPoint(Matrix w);

  /// Also requires Σ̂ + W to be positive definite (throws NotPositiveDefinite).
  static DualPoint checked(const EmpiricalCovariance& cov, Matrix w);

  std::size_t n() const noexcept { return w_.rows(); }
  const Matrix& w() const noexcept { return w_; }

 private:
  Matrix w_;
};

/// Recovered primal K = (Σ̂ + W)^{-1} with the edges read off by
/// complementary slackness.
struct PrecisionEstimate {
  Matrix k;
  std::vector<Edge> edges;
  /// Set when zeroing the non-edge entries would have made K indefinite; k is
  /// then left untruncated.
  bool truncation_broke_pd = false;

  std::size_t n() const noexcept { return k.rows(); }
};

struct SolveOptions {
  double gap_tol = 0.1;
  std::size_t max_iter = 1000;
  double armijo_alpha = 0.3;
  double armijo_beta = 0.5;
  double halving_min_t = 1e-12;
  double sparsity_tol = 1e-6;
  double complementarity_margin = 1e-8;

  /// Throws InvalidArgument on out-of-range fields.
  void validate() const;
};

enum class Termination { GapReached, MaxIter, LineSearchStalled };

std::string_view to_string(Termination t) noexcept;

struct SolveReport {
  std::size_t iterations = 0;
  double initial_objective = 0.0;
  double initial_gap = 0.0;
  /// One entry per completed iteration.
  std::vector<double> gaps;
  std::vector<double> objectives;
  std::vector<double> step_sizes;
  std::vector<double> iteration_seconds;
  Termination termination = Termination::MaxIter;
  double wall_seconds = 0.0;

  double final_gap() const noexcept { return gaps.empty() ? initial_gap : gaps.back(); }
  double final_objective() const noexcept {
    return objectives.empty() ? initial_objective : objectives.back();
  }
};

struct SolveResult {
  PrecisionEstimate estimate;
  DualPoint dual;
  SolveReport report;
};

}  // namespace covsel

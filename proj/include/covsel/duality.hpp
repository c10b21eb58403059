#pragma once

#include "covsel/matrix.hpp"
#include "covsel/model.hpp"

namespace covsel {

/// Strictly interior dual point W = αΣ̂ + (1-α)·diag(Σ̂) - Σ̂ on the
/// off-diagonal, W_ii = λ_ii. α is the smallest value that keeps every
/// constraint at no more than 90% of its radius.
DualPoint feasible_init(const EmpiricalCovariance& cov, const ElementwisePenalty& penalty);
DualPoint feasible_init(const EmpiricalCovariance& cov, const BlockPenalty& penalty);

/// The α chosen by feasible_init, exposed for tests.
double feasible_init_alpha(const EmpiricalCovariance& cov, const ElementwisePenalty& penalty);
double feasible_init_alpha(const EmpiricalCovariance& cov, const BlockPenalty& penalty);

/// η = tr(Σ̂K) + Σ_ij λ_ij |K_ij| - n, summing over ordered pairs.
double duality_gap_box(const EmpiricalCovariance& cov, const Matrix& k,
                       const ElementwisePenalty& penalty);

/// η = tr(Σ̂K) + Σ_i λ_ii |K_ii| + Σ_k 2·λ_k·max_{S_k} |K_ij| - n.
double duality_gap_block(const EmpiricalCovariance& cov, const Matrix& k,
                         const BlockPenalty& penalty);

/// Keeps edge {i,j} iff its constraint is active (within
/// complementarity_margin) and |K_ij| > sparsity_tol. Other off-diagonal
/// entries of K are set to zero, unless that breaks positive definiteness.
PrecisionEstimate extract_structure(const DualPoint& w, const Matrix& k,
                                    const ElementwisePenalty& penalty, const SolveOptions& opts);

/// Block analogue: a pair survives only if its whole block is active.
PrecisionEstimate extract_structure(const DualPoint& w, const Matrix& k,
                                    const BlockPenalty& penalty, const SolveOptions& opts);

}  // namespace covsel

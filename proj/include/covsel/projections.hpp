#pragma once

#include <span>
#include <vector>

#include "covsel/matrix.hpp"
#include "covsel/model.hpp"

namespace covsel {

/// Clamps every entry into [-λ_ij, λ_ij].
Matrix project_box(const Matrix& m, const ElementwisePenalty& penalty);

/// Euclidean projection onto {x : ‖x‖₁ ≤ radius}. Sort-and-threshold, so
/// O(d log d); surviving entries keep their sign, entries with |v_i| ≤ θ go
/// to zero.
std::vector<double> project_l1_ball(std::span<const double> v, double radius);

/// The soft-threshold level θ used by project_l1_ball (0 when v is already
/// inside the ball).
double l1_ball_threshold(std::span<const double> v, double radius);

/// Projects each block's upper-triangle entries onto its ℓ1 ball and mirrors
/// the result into the lower triangle. Diagonal untouched.
Matrix project_block_constraints(const Matrix& m, const BlockPenalty& penalty);

}  // namespace covsel

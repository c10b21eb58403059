#pragma once

#include <optional>
#include <span>
#include <vector>

#include "covsel/matrix.hpp"

namespace covsel {

/// Lower-triangular L with A = L·Lᵀ and a strictly positive diagonal.
class CholeskyFactor {
 public:
  std::size_t n() const noexcept { return lower_.rows(); }
  const Matrix& lower() const noexcept { return lower_; }

 private:
  explicit CholeskyFactor(Matrix lower) : lower_(std::move(lower)) {}
  Matrix lower_;

  friend std::optional<CholeskyFactor> try_cholesky(const Matrix& a);
};

/// Factorizes the symmetric part (A + Aᵀ)/2 without pivoting or shifts.
/// Empty when that matrix is not positive definite.
std::optional<CholeskyFactor> try_cholesky(const Matrix& a);

/// Same as try_cholesky but throws Error(NotPositiveDefinite).
CholeskyFactor cholesky(const Matrix& a);

/// 2·Σ log L_ii
double log_det(const CholeskyFactor& factor) noexcept;

/// A^{-1} formed as L^{-T}·L^{-1}; exactly symmetric.
Matrix spd_inverse(const CholeskyFactor& factor);

/// Solves Lᵀ·x = z in place.
void solve_upper_transposed(const CholeskyFactor& factor, std::span<double> z);

/// tr(A·B) = Σ_ij A_ij·B_ji without forming the product.
double trace_product(const Matrix& a, const Matrix& b);

/// xᵀ·A·x
double quadratic_form(const Matrix& a, std::span<const double> x);

}  // namespace covsel

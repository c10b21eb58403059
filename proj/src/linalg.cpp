#include "covsel/linalg.hpp"

#include <cmath>

#include "covsel/error.hpp"
#include "covsel/kernels.hpp"

namespace covsel {

std::optional<CholeskyFactor> try_cholesky(const Matrix& a) {
  if (!a.is_square()) throw Error(Errc::DimensionMismatch, "cholesky needs a square matrix");
  const auto& k = active_kernels();
  const std::size_t n = a.rows();
  Matrix l(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* li = l.row(i).data();
    for (std::size_t j = 0; j < i; ++j) {
      const double aij = 0.5 * (a(i, j) + a(j, i));
      l(i, j) = (aij - k.dot(li, l.row(j).data(), j)) / l(j, j);
    }
    const double d = a(i, i) - k.dot(li, li, i);
    // !(d > 0) also rejects NaN.
    if (!(d > 0.0)) return std::nullopt;
    l(i, i) = std::sqrt(d);
  }
  return CholeskyFactor(std::move(l));
}

CholeskyFactor cholesky(const Matrix& a) {
  auto f = try_cholesky(a);
  if (!f) throw Error(Errc::NotPositiveDefinite, "matrix is not positive definite");
  return std::move(*f);
}

double log_det(const CholeskyFactor& factor) noexcept {
  double s = 0.0;
  const Matrix& l = factor.lower();
  for (std::size_t i = 0; i < l.rows(); ++i) s += std::log(l(i, i));
  return 2.0 * s;
}

Matrix spd_inverse(const CholeskyFactor& factor) {
  const auto& k = active_kernels();
  const Matrix& l = factor.lower();
  const std::size_t n = l.rows();

  // Rows of L^{-1}: row_i = (e_i - Σ_{k<i} L_ik · row_k) / L_ii.
  Matrix linv(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double* ri = linv.row(i).data();
    ri[i] = 1.0;
    for (std::size_t p = 0; p < i; ++p) {
      const double lip = l(i, p);
      if (lip != 0.0) k.axpy(-lip, linv.row(p).data(), ri, p + 1);
    }
    const double inv_d = 1.0 / l(i, i);
    for (std::size_t j = 0; j <= i; ++j) ri[j] *= inv_d;
  }

  // A^{-1} = L^{-T} L^{-1} = Σ_p (row_p)ᵀ(row_p), row_p supported on [0, p].
  Matrix inv(n, n);
  for (std::size_t p = 0; p < n; ++p) {
    const double* rp = linv.row(p).data();
    for (std::size_t i = 0; i <= p; ++i) {
      if (rp[i] != 0.0) k.axpy(rp[i], rp, inv.row(i).data(), p + 1);
    }
  }
  symmetrize(inv);
  return inv;
}

void solve_upper_transposed(const CholeskyFactor& factor, std::span<double> z) {
  const Matrix& l = factor.lower();
  const std::size_t n = l.rows();
  if (z.size() != n) throw Error(Errc::DimensionMismatch, "solve_upper_transposed size mismatch");
  const auto& k = active_kernels();
  for (std::size_t ii = n; ii-- > 0;) {
    z[ii] /= l(ii, ii);
    if (ii > 0) k.axpy(-z[ii], l.row(ii).data(), z.data(), ii);
  }
}

double trace_product(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.cols() || a.cols() != b.rows()) {
    throw Error(Errc::DimensionMismatch, "trace_product shape mismatch");
  }
  const Matrix bt = transpose(b);
  return active_kernels().dot(a.data(), bt.data(), a.size());
}

double quadratic_form(const Matrix& a, std::span<const double> x) {
  if (!a.is_square() || a.rows() != x.size()) {
    throw Error(Errc::DimensionMismatch, "quadratic_form shape mismatch");
  }
  const auto& k = active_kernels();
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * k.dot(a.row(i).data(), x.data(), x.size());
  return s;
}

}  // namespace covsel

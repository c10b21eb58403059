#include "covsel/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "covsel/error.hpp"
#include "covsel/kernels.hpp"

namespace covsel {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
  Matrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols()) {
      throw Error(Errc::DimensionMismatch, "ragged rows in Matrix::from_rows");
    }
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  }
  return m;
}

std::vector<double> Matrix::diag() const {
  const std::size_t n = std::min(rows_, cols_);
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = (*this)(i, i);
  return d;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  }
  return t;
}

void symmetrize(Matrix& a) {
  if (!a.is_square()) throw Error(Errc::DimensionMismatch, "symmetrize needs a square matrix");
  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = v;
      a(j, i) = v;
    }
  }
}

bool is_symmetric(const Matrix& a) noexcept {
  if (!a.is_square()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = i + 1; j < a.cols(); ++j) {
      if (a(i, j) != a(j, i)) return false;
    }
  }
  return true;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(Errc::DimensionMismatch, "max_abs_diff shape mismatch");
  }
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

double max_abs(const Matrix& a) noexcept { return active_kernels().max_abs(a.data(), a.size()); }

double frobenius_norm(const Matrix& a) noexcept {
  return std::sqrt(active_kernels().dot(a.data(), a.data(), a.size()));
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw Error(Errc::DimensionMismatch, "multiply shape mismatch");
  const auto& k = active_kernels();
  Matrix c(a.rows(), b.cols());
  // Row i of C accumulates a_ik · (row k of B): every inner loop is a
  // contiguous axpy.
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* ci = c.row(i).data();
    for (std::size_t kk = 0; kk < a.cols(); ++kk) {
      const double aik = a(i, kk);
      if (aik != 0.0) k.axpy(aik, b.row(kk).data(), ci, b.cols());
    }
  }
  return c;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(Errc::DimensionMismatch, "operator+ shape mismatch");
  }
  Matrix c = a;
  active_kernels().axpy(1.0, b.data(), c.data(), c.size());
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(Errc::DimensionMismatch, "operator- shape mismatch");
  }
  Matrix c = a;
  active_kernels().axpy(-1.0, b.data(), c.data(), c.size());
  return c;
}

}  // namespace covsel

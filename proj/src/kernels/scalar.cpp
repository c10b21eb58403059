#include "covsel/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace covsel {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void clamp_scalar(const double* m, const double* bound, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::min(std::max(m[i], -bound[i]), bound[i]);
}

double weighted_abs_sum_scalar(const double* w, const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += w[i] * std::abs(x[i]);
  return acc;
}

double abs_sum_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::abs(x[i]);
  return acc;
}

double max_abs_scalar(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(x[i]));
  return m;
}

void soft_threshold_scalar(const double* x, double theta, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::copysign(std::max(std::abs(x[i]) - theta, 0.0), x[i]);
  }
}

constexpr KernelTable kScalar{
    KernelIsa::Scalar,       "scalar",       dot_scalar,           axpy_scalar,
    clamp_scalar,            weighted_abs_sum_scalar, abs_sum_scalar, max_abs_scalar,
    soft_threshold_scalar,
};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace covsel

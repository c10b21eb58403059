#pragma once

// Data-parallel inner loops used by the dense linear algebra, the projections
// and the duality-gap evaluation. Every kernel has a scalar reference version;
// wider variants are compiled separately and picked once at startup from the
// CPU feature bits. All variants must agree with the scalar reference up to
// floating-point reassociation in the reductions (see tests/unit/kernels_test).

#include <cstddef>
#include <string_view>
#include <vector>

namespace covsel {

enum class KernelIsa { Scalar, Avx2 };

struct KernelTable {
  KernelIsa isa;
  std::string_view name;

  // Σ a[i]·b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y[i] += alpha·x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // out[i] = min(max(m[i], -bound[i]), bound[i]); out may alias m
  void (*clamp)(const double* m, const double* bound, double* out, std::size_t n);
  // Σ w[i]·|x[i]|
  double (*weighted_abs_sum)(const double* w, const double* x, std::size_t n);
  // Σ |x[i]|
  double (*abs_sum)(const double* x, std::size_t n);
  // max |x[i]|, 0 for n == 0
  double (*max_abs)(const double* x, std::size_t n);
  // out[i] = sign(x[i])·max(|x[i]| - theta, 0); out may alias x
  void (*soft_threshold)(const double* x, double theta, double* out, std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;

/// nullptr when the variant was not compiled in or the CPU lacks the feature.
const KernelTable* avx2_kernels() noexcept;

/// Every variant usable on this machine, scalar first.
std::vector<const KernelTable*> available_kernels();

/// The table used by the library. Chosen on first use: the widest supported
/// variant unless an override is installed.
const KernelTable& active_kernels() noexcept;

/// Forces a specific table (nullptr restores automatic selection). Intended
/// for equivalence tests and benchmarks; not meant to be flipped while solves
/// are running on other threads.
void override_kernels(const KernelTable* table) noexcept;

class ScopedKernelOverride {
 public:
  explicit ScopedKernelOverride(const KernelTable& table) noexcept { override_kernels(&table); }
  ~ScopedKernelOverride() { override_kernels(nullptr); }
  ScopedKernelOverride(const ScopedKernelOverride&) = delete;
  ScopedKernelOverride& operator=(const ScopedKernelOverride&) = delete;
};

namespace detail {
const KernelTable* avx2_table_if_compiled() noexcept;
}

}  // namespace covsel

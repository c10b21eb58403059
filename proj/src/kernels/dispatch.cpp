#include "covsel/kernels.hpp"

#include <atomic>

namespace covsel {
namespace {

bool cpu_has_avx2_fma() noexcept {
#if defined(COVSEL_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__)) && \
    (defined(__x86_64__) || defined(__i386__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& detect() noexcept {
  if (const KernelTable* t = avx2_kernels()) return *t;
  return scalar_kernels();
}

std::atomic<const KernelTable*> g_override{nullptr};

}  // namespace

#ifndef COVSEL_HAVE_AVX2
namespace detail {
const KernelTable* avx2_table_if_compiled() noexcept { return nullptr; }
}  // namespace detail
#endif

const KernelTable* avx2_kernels() noexcept {
  static const bool supported = cpu_has_avx2_fma();
  return supported ? detail::avx2_table_if_compiled() : nullptr;
}

std::vector<const KernelTable*> available_kernels() {
  std::vector<const KernelTable*> out{&scalar_kernels()};
  if (const KernelTable* t = avx2_kernels()) out.push_back(t);
  return out;
}

const KernelTable& active_kernels() noexcept {
  if (const KernelTable* t = g_override.load(std::memory_order_acquire)) return *t;
  static const KernelTable& chosen = detect();
  return chosen;
}

void override_kernels(const KernelTable* table) noexcept {
  g_override.store(table, std::memory_order_release);
}

}  // namespace covsel

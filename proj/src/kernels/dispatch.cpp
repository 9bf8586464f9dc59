#include <atomic>
#include <cstdlib>
#include <string_view>

#include "levylab/kernels.hpp"

namespace levylab::kernels {

#if defined(LEVYLAB_HAVE_AVX2)
const KernelTable& avx2_table_unchecked() noexcept;
#endif

const KernelTable* avx2_table() noexcept {
#if defined(LEVYLAB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &avx2_table_unchecked() : nullptr;
#else
  return nullptr;
#endif
}

namespace {

const KernelTable* initial_choice() noexcept {
  if (const char* env = std::getenv("LEVYLAB_SIMD")) {
    if (std::string_view(env) == "scalar") return &scalar_table();
  }
  if (const KernelTable* t = avx2_table()) return t;
  return &scalar_table();
}

std::atomic<const KernelTable*>& current() noexcept {
  static std::atomic<const KernelTable*> table{initial_choice()};
  return table;
}

}  // namespace

const KernelTable& active() noexcept { return *current().load(std::memory_order_relaxed); }

bool select(std::string_view name) noexcept {
  if (name == "scalar") {
    current().store(&scalar_table());
    return true;
  }
  if (name == "avx2" || name == "auto") {
    const KernelTable* t = avx2_table();
    if (t == nullptr) {
      if (name == "auto") current().store(&scalar_table());
      return name == "auto";
    }
    current().store(t);
    return true;
  }
  return false;
}

}  // namespace levylab::kernels

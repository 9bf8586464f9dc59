#pragma once

// Data-parallel inner loops of the Monte Carlo core. Each kernel has a
// scalar reference implementation and, where the target supports it, an
// AVX2 variant chosen at runtime. The variants produce bit-identical
// results: reductions use the same four-lane accumulation order in both.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "levylab/rng.hpp"

namespace levylab::kernels {

struct PowerSums {
  double s1 = 0.0;  // sum of d^2 (or x)
  double s2 = 0.0;  // sum of d^4 (or x^2)
};

/// Ciesielski series parameters: out = sum_{n=first}^{last} weight[n-first] * d(2^n x, Z).
struct CiesielskiTerms {
  int first = 0;
  int last = 0;
  const double* weights = nullptr;  // last - first + 1 entries
};

struct KernelTable {
  std::string_view name;

  void (*uniform_pairs)(PhiloxKey key, std::uint32_t substream, std::uint32_t block,
                        std::uint64_t first, std::size_t n, double* u0, double* u1);

  void (*ciesielski)(CiesielskiTerms terms, const double* x, double* out, std::size_t n);

  /// out[i] = x[i] >= threshold ? 1 : 0
  void (*indicator)(double threshold, const double* x, double* out, std::size_t n);

  /// {sum (a-b)^2, sum (a-b)^4}
  PowerSums (*sq_diff_sums)(const double* a, const double* b, std::size_t n);

  /// {sum x, sum x^2}
  PowerSums (*moment_sums)(const double* x, std::size_t n);
};

const KernelTable& scalar_table() noexcept;

/// nullptr when the AVX2 variants were not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table() noexcept;

/// The table in use. Defaults to the best available; the environment
/// variable LEVYLAB_SIMD=scalar forces the reference kernels.
const KernelTable& active() noexcept;

/// Overrides the selection ("scalar", "avx2", "auto"). Returns false if the
/// requested variant is unavailable.
bool select(std::string_view name) noexcept;

}  // namespace levylab::kernels

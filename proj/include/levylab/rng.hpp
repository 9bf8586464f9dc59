#pragma once

// Counter-based random numbers. Every draw is addressed by
// (seed, substream, draw index, block); nothing depends on call order or
// on how work is split across threads.

#include <array>
#include <cstddef>
#include <cstdint>

namespace levylab {

using PhiloxBlock = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds.
PhiloxBlock philox4x32(PhiloxBlock counter, PhiloxKey key) noexcept;

inline PhiloxKey key_from_seed(std::uint64_t seed) noexcept {
  return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

/// Maps the top 52 bits of a 64-bit word to the open interval (0, 1).
inline double to_open_unit(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1p-52;
}

/// Counter layout shared by the scalar stream and the batch kernels:
/// word 0/1 = draw index, word 2 = block within the draw, word 3 = substream.
inline PhiloxBlock draw_counter(std::uint64_t index, std::uint32_t block,
                                std::uint32_t substream) noexcept {
  return {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), block,
          substream};
}

/// Sequential uniforms for a single draw. Draw `i` of substream `s` always
/// sees the same sequence, so samplers that need a variable number of
/// uniforms per draw (Poisson inversion) stay reproducible.
class DrawStream {
 public:
  DrawStream(std::uint64_t seed, std::uint32_t substream, std::uint64_t index) noexcept
      : key_(key_from_seed(seed)), substream_(substream), index_(index) {}

  double uniform() noexcept;

 private:
  PhiloxKey key_;
  std::uint32_t substream_;
  std::uint64_t index_;
  std::uint32_t block_ = 0;
  PhiloxBlock cache_{};
  int cached_ = 0;  // remaining doubles in cache_ (0, 1 or 2)
};

/// Fills u0/u1 with the two uniforms of block `block` for draws
/// [first, first + n). Dispatches to the fastest available kernel.
void uniform_pairs(std::uint64_t seed, std::uint32_t substream, std::uint32_t block,
                   std::uint64_t first, std::size_t n, double* u0, double* u1);

}  // namespace levylab

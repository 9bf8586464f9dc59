#include "levylab/rng.hpp"

#include "levylab/kernels.hpp"

namespace levylab {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

PhiloxBlock philox4x32(PhiloxBlock x, PhiloxKey k) noexcept {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, x[0], hi0, lo0);
    mulhilo(kMul1, x[2], hi1, lo1);
    x = {hi1 ^ x[1] ^ k[0], lo1, hi0 ^ x[3] ^ k[1], lo0};
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  return x;
}

double DrawStream::uniform() noexcept {
  if (cached_ == 0) {
    cache_ = philox4x32(draw_counter(index_, block_++, substream_), key_);
    cached_ = 2;
  }
  const int slot = 2 - cached_--;
  const std::uint64_t bits =
      (static_cast<std::uint64_t>(cache_[2 * slot + 1]) << 32) | cache_[2 * slot];
  return to_open_unit(bits);
}

void uniform_pairs(std::uint64_t seed, std::uint32_t substream, std::uint32_t block,
                   std::uint64_t first, std::size_t n, double* u0, double* u1) {
  kernels::active().uniform_pairs(key_from_seed(seed), substream, block, first, n, u0, u1);
}

}  // namespace levylab

// Reference kernels. The AVX2 variants in avx2.cpp must match these bit for bit.

#include <cmath>

#include "levylab/kernels.hpp"

namespace levylab::kernels {

namespace {

void uniform_pairs_scalar(PhiloxKey key, std::uint32_t substream, std::uint32_t block,
                          std::uint64_t first, std::size_t n, double* u0, double* u1) {
  for (std::size_t i = 0; i < n; ++i) {
    const PhiloxBlock r = philox4x32(draw_counter(first + i, block, substream), key);
    u0[i] = to_open_unit((static_cast<std::uint64_t>(r[1]) << 32) | r[0]);
    u1[i] = to_open_unit((static_cast<std::uint64_t>(r[3]) << 32) | r[2]);
  }
}

void ciesielski_scalar(CiesielskiTerms terms, const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double y = std::ldexp(x[i], terms.first);
    double acc = 0.0;
    for (int k = terms.first; k <= terms.last; ++k) {
      // Beyond 2^52 every double is an integer, so all later terms vanish.
      if (!(std::fabs(y) < 0x1p52)) break;
      const double d = std::fabs(y - std::nearbyint(y));
      acc += terms.weights[k - terms.first] * d;
      y *= 2.0;
    }
    out[i] = acc;
  }
}

void indicator_scalar(double threshold, const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] >= threshold ? 1.0 : 0.0;
}

PowerSums sq_diff_sums_scalar(const double* a, const double* b, std::size_t n) {
  double s1[4] = {0, 0, 0, 0};
  double s2[4] = {0, 0, 0, 0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (int l = 0; l < 4; ++l) {
      const double d = a[i + l] - b[i + l];
      const double d2 = d * d;
      s1[l] += d2;
      s2[l] += d2 * d2;
    }
  }
  PowerSums r{(s1[0] + s1[1]) + (s1[2] + s1[3]), (s2[0] + s2[1]) + (s2[2] + s2[3])};
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    const double d2 = d * d;
    r.s1 += d2;
    r.s2 += d2 * d2;
  }
  return r;
}

PowerSums moment_sums_scalar(const double* x, std::size_t n) {
  double s1[4] = {0, 0, 0, 0};
  double s2[4] = {0, 0, 0, 0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (int l = 0; l < 4; ++l) {
      s1[l] += x[i + l];
      s2[l] += x[i + l] * x[i + l];
    }
  }
  PowerSums r{(s1[0] + s1[1]) + (s1[2] + s1[3]), (s2[0] + s2[1]) + (s2[2] + s2[3])};
  for (; i < n; ++i) {
    r.s1 += x[i];
    r.s2 += x[i] * x[i];
  }
  return r;
}

}  // namespace

const KernelTable& scalar_table() noexcept {
  static const KernelTable table{"scalar",          uniform_pairs_scalar, ciesielski_scalar,
                                 indicator_scalar,  sq_diff_sums_scalar,  moment_sums_scalar};
  return table;
}

}  // namespace levylab::kernels

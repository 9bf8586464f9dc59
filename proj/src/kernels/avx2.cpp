// AVX2 variants of the reference kernels in scalar.cpp. Compiled with
// -mavx2 -mfma -ffp-contract=off and only called after a runtime CPU check.

#include <immintrin.h>

#include <cmath>

#include "levylab/kernels.hpp"

namespace levylab::kernels {

namespace {

inline void mulhilo8(__m256i a, __m256i m, __m256i& hi, __m256i& lo) {
  const __m256i even = _mm256_mul_epu32(a, m);
  const __m256i odd = _mm256_mul_epu32(_mm256_srli_epi64(a, 32), m);
  lo = _mm256_blend_epi32(even, _mm256_slli_epi64(odd, 32), 0xAA);
  hi = _mm256_blend_epi32(_mm256_srli_epi64(even, 32), odd, 0xAA);
}

inline __m256d bits_to_open_unit(__m256i bits) {
  const __m256i mant = _mm256_srli_epi64(bits, 12);
  const __m256i magic = _mm256_set1_epi64x(0x4330000000000000LL);
  const __m256d k = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(mant, magic)),
                                  _mm256_set1_pd(0x1p52));
  return _mm256_mul_pd(_mm256_add_pd(k, _mm256_set1_pd(0.5)), _mm256_set1_pd(0x1p-52));
}

void uniform_pairs_avx2(PhiloxKey key, std::uint32_t substream, std::uint32_t block,
                        std::uint64_t first, std::size_t n, double* u0, double* u1) {
  const __m256i m0 = _mm256_set1_epi32(static_cast<int>(0xD2511F53u));
  const __m256i m1 = _mm256_set1_epi32(static_cast<int>(0xCD9E8D57u));
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    alignas(32) std::uint32_t lo_idx[8];
    alignas(32) std::uint32_t hi_idx[8];
    for (int j = 0; j < 8; ++j) {
      const std::uint64_t idx = first + i + j;
      lo_idx[j] = static_cast<std::uint32_t>(idx);
      hi_idx[j] = static_cast<std::uint32_t>(idx >> 32);
    }
    __m256i x0 = _mm256_load_si256(reinterpret_cast<const __m256i*>(lo_idx));
    __m256i x1 = _mm256_load_si256(reinterpret_cast<const __m256i*>(hi_idx));
    __m256i x2 = _mm256_set1_epi32(static_cast<int>(block));
    __m256i x3 = _mm256_set1_epi32(static_cast<int>(substream));
    std::uint32_t k0 = key[0];
    std::uint32_t k1 = key[1];
    for (int round = 0; round < 10; ++round) {
      __m256i hi0, lo0, hi1, lo1;
      mulhilo8(x0, m0, hi0, lo0);
      mulhilo8(x2, m1, hi1, lo1);
      const __m256i vk0 = _mm256_set1_epi32(static_cast<int>(k0));
      const __m256i vk1 = _mm256_set1_epi32(static_cast<int>(k1));
      x0 = _mm256_xor_si256(_mm256_xor_si256(hi1, x1), vk0);
      x1 = lo1;
      x2 = _mm256_xor_si256(_mm256_xor_si256(hi0, x3), vk1);
      x3 = lo0;
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    // Interleave word pairs into 64-bit values, restoring stream order.
    const __m256i a_lo = _mm256_unpacklo_epi32(x0, x1);
    const __m256i a_hi = _mm256_unpackhi_epi32(x0, x1);
    const __m256i b_lo = _mm256_unpacklo_epi32(x2, x3);
    const __m256i b_hi = _mm256_unpackhi_epi32(x2, x3);
    _mm256_storeu_pd(u0 + i, bits_to_open_unit(_mm256_permute2x128_si256(a_lo, a_hi, 0x20)));
    _mm256_storeu_pd(u0 + i + 4, bits_to_open_unit(_mm256_permute2x128_si256(a_lo, a_hi, 0x31)));
    _mm256_storeu_pd(u1 + i, bits_to_open_unit(_mm256_permute2x128_si256(b_lo, b_hi, 0x20)));
    _mm256_storeu_pd(u1 + i + 4, bits_to_open_unit(_mm256_permute2x128_si256(b_lo, b_hi, 0x31)));
  }
  if (i < n) scalar_table().uniform_pairs(key, substream, block, first + i, n - i, u0 + i, u1 + i);
}

void ciesielski_avx2(CiesielskiTerms terms, const double* x, double* out, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  const __m256d limit = _mm256_set1_pd(0x1p52);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d scale = _mm256_set1_pd(std::ldexp(1.0, terms.first));
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d y = _mm256_mul_pd(_mm256_loadu_pd(x + i), scale);
    __m256d acc = _mm256_setzero_pd();
    for (int k = terms.first; k <= terms.last; ++k) {
      const __m256d active = _mm256_cmp_pd(_mm256_andnot_pd(sign, y), limit, _CMP_LT_OQ);
      if (_mm256_movemask_pd(active) == 0) break;
      const __m256d r = _mm256_round_pd(y, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
      const __m256d d = _mm256_and_pd(_mm256_andnot_pd(sign, _mm256_sub_pd(y, r)), active);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(terms.weights[k - terms.first]), d));
      y = _mm256_mul_pd(y, two);
    }
    _mm256_storeu_pd(out + i, acc);
  }
  if (i < n) scalar_table().ciesielski(terms, x + i, out + i, n - i);
}

void indicator_avx2(double threshold, const double* x, double* out, std::size_t n) {
  const __m256d t = _mm256_set1_pd(threshold);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d mask = _mm256_cmp_pd(_mm256_loadu_pd(x + i), t, _CMP_GE_OQ);
    _mm256_storeu_pd(out + i, _mm256_and_pd(mask, one));
  }
  if (i < n) scalar_table().indicator(threshold, x + i, out + i, n - i);
}

inline double hsum_pairwise(__m256d v) {
  // (l0 + l1) + (l2 + l3), the same association as the scalar reference.
  const __m256d h = _mm256_hadd_pd(v, v);
  return _mm_cvtsd_f64(_mm256_castpd256_pd128(h)) + _mm_cvtsd_f64(_mm256_extractf128_pd(h, 1));
}

PowerSums sq_diff_sums_avx2(const double* a, const double* b, std::size_t n) {
  __m256d s1 = _mm256_setzero_pd();
  __m256d s2 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    const __m256d d2 = _mm256_mul_pd(d, d);
    s1 = _mm256_add_pd(s1, d2);
    s2 = _mm256_add_pd(s2, _mm256_mul_pd(d2, d2));
  }
  PowerSums r{hsum_pairwise(s1), hsum_pairwise(s2)};
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    const double d2 = d * d;
    r.s1 += d2;
    r.s2 += d2 * d2;
  }
  return r;
}

PowerSums moment_sums_avx2(const double* x, std::size_t n) {
  __m256d s1 = _mm256_setzero_pd();
  __m256d s2 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    s1 = _mm256_add_pd(s1, v);
    s2 = _mm256_add_pd(s2, _mm256_mul_pd(v, v));
  }
  PowerSums r{hsum_pairwise(s1), hsum_pairwise(s2)};
  for (; i < n; ++i) {
    r.s1 += x[i];
    r.s2 += x[i] * x[i];
  }
  return r;
}

}  // namespace

const KernelTable& avx2_table_unchecked() noexcept {
  static const KernelTable table{"avx2",         uniform_pairs_avx2, ciesielski_avx2,
                                 indicator_avx2, sq_diff_sums_avx2,  moment_sums_avx2};
  return table;
}

}  // namespace levylab::kernels

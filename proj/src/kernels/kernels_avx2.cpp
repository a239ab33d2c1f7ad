// AVX2+FMA kernel variants. Compiled with -mavx2 -mfma; only reached when
// the dispatcher has confirmed CPU support at runtime.

#if defined(__x86_64__)

#include <immintrin.h>

#include "limo/kernels.hpp"

namespace limo {
namespace kernels {
namespace detail {

namespace {

inline double hsum_pd(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d shuf = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

}  // namespace

double dot_f32_avx2(const float* a, const float* b, size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256 va = _mm256_loadu_ps(a + i);
        __m256 vb = _mm256_loadu_ps(b + i);
        __m256d a_lo = _mm256_cvtps_pd(_mm256_castps256_ps128(va));
        __m256d a_hi = _mm256_cvtps_pd(_mm256_extractf128_ps(va, 1));
        __m256d b_lo = _mm256_cvtps_pd(_mm256_castps256_ps128(vb));
        __m256d b_hi = _mm256_cvtps_pd(_mm256_extractf128_ps(vb, 1));
        acc0 = _mm256_fmadd_pd(a_lo, b_lo, acc0);
        acc1 = _mm256_fmadd_pd(a_hi, b_hi, acc1);
    }
    double acc = hsum_pd(_mm256_add_pd(acc0, acc1));
    for (; i < n; i++) acc += (double)a[i] * (double)b[i];
    return acc;
}

double dot_f64_avx2(const double* a, const double* b, size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i),
                               acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4),
                               _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i),
                               acc0);
    }
    double acc = hsum_pd(_mm256_add_pd(acc0, acc1));
    for (; i < n; i++) acc += a[i] * b[i];
    return acc;
}

double adc_lookup_avx2(const float* tables, size_t m, size_t ksub,
                       const uint8_t* codes) {
    // Gather 8 table entries at a time; table stride is ksub floats.
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    size_t s = 0;
    const int ks = (int)ksub;
    for (; s + 8 <= m; s += 8) {
        __m256i idx = _mm256_setr_epi32(
                (int)(s + 0) * ks + codes[s + 0],
                (int)(s + 1) * ks + codes[s + 1],
                (int)(s + 2) * ks + codes[s + 2],
                (int)(s + 3) * ks + codes[s + 3],
                (int)(s + 4) * ks + codes[s + 4],
                (int)(s + 5) * ks + codes[s + 5],
                (int)(s + 6) * ks + codes[s + 6],
                (int)(s + 7) * ks + codes[s + 7]);
        __m256 vals = _mm256_i32gather_ps(tables, idx, 4);
        acc0 = _mm256_add_pd(acc0,
                             _mm256_cvtps_pd(_mm256_castps256_ps128(vals)));
        acc1 = _mm256_add_pd(acc1,
                             _mm256_cvtps_pd(_mm256_extractf128_ps(vals, 1)));
    }
    double acc = hsum_pd(_mm256_add_pd(acc0, acc1));
    for (; s < m; s++) acc += (double)tables[s * ksub + codes[s]];
    return acc;
}

double binary_score_avx2(const float* q, const uint64_t* code, size_t d) {
    // Expand 8 bits at a time into a sign mask and flip q lanes accordingly:
    // score = sum(bit ? +q : -q).
    const __m256i bit_sel = _mm256_setr_epi32(1, 2, 4, 8, 16, 32, 64, 128);
    const __m256 sign_bit = _mm256_set1_ps(-0.0f);
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    size_t j = 0;
    for (; j + 8 <= d; j += 8) {
        uint32_t byte = (uint32_t)((code[j >> 6] >> (j & 63)) & 0xffu);
        __m256i bits = _mm256_and_si256(_mm256_set1_epi32((int)byte), bit_sel);
        __m256i is_zero = _mm256_cmpeq_epi32(bits, _mm256_setzero_si256());
        // bit==0 lanes get the sign flipped.
        __m256 flip = _mm256_and_ps(_mm256_castsi256_ps(is_zero), sign_bit);
        __m256 vq = _mm256_xor_ps(_mm256_loadu_ps(q + j), flip);
        acc0 = _mm256_add_pd(acc0,
                             _mm256_cvtps_pd(_mm256_castps256_ps128(vq)));
        acc1 = _mm256_add_pd(acc1,
                             _mm256_cvtps_pd(_mm256_extractf128_ps(vq, 1)));
    }
    double acc = hsum_pd(_mm256_add_pd(acc0, acc1));
    for (; j < d; j++) {
        uint64_t bit = (code[j >> 6] >> (j & 63)) & 1u;
        acc += bit ? (double)q[j] : -(double)q[j];
    }
    return acc;
}

}  // namespace detail
}  // namespace kernels
}  // namespace limo

#endif  // __x86_64__

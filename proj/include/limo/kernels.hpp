#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace limo {
namespace kernels {

// Runtime-dispatched arithmetic kernels for the scoring inner loops.
// Every kernel has a scalar reference implementation and, on x86-64 with
// AVX2+FMA, a vectorized variant. The scalar variants accumulate strictly
// left to right in double precision, so their results are reproducible and
// can be compared bit for bit against independently written reference loops.
// Vector variants reorder the summation; they are equivalence-tested against
// the scalar ones under tolerance.

enum class Backend { scalar, avx2 };

// Selected at startup from CPU features; LIMO_SIMD={auto,scalar,avx2}
// overrides. set_backend() falls back to scalar if the request is
// unsupported and returns the backend actually selected.
Backend active_backend();
Backend set_backend(Backend b);
bool avx2_supported();
std::string backend_name(Backend b);

// dot(a, b) over f32 inputs, f64 accumulation.
double dot_f32(const float* a, const float* b, size_t n);

// dot(a, b) over f64 inputs.
double dot_f64(const double* a, const double* b, size_t n);

// Squared L2 norm, f32 inputs, f64 accumulation.
double norm_sq_f32(const float* a, size_t n);
double norm_sq_f64(const double* a, size_t n);

// Max over per-row dot(query, rows[r]) for r in [0, nrows). Returns the max
// value; *argmax gets the smallest row index attaining it.
double max_dot_f32(const float* query, const float* rows, size_t nrows,
                   size_t d, size_t* argmax);
double max_dot_f64(const double* query, const double* rows, size_t nrows,
                   size_t d, size_t* argmax);

// Asymmetric-distance accumulation: sum over s of tables[s*ksub + codes[s]].
double adc_lookup(const float* tables, size_t m, size_t ksub,
                  const uint8_t* codes);

// Sign-code score: sum_j q[j] * (bit_j(code) ? +1 : -1). d must be a
// multiple of 64; code holds d bits, little-endian qwords, bit j of word
// j/64 at position j%64.
double binary_score(const float* q, const uint64_t* code, size_t d);

namespace detail {
double dot_f32_scalar(const float* a, const float* b, size_t n);
double dot_f64_scalar(const double* a, const double* b, size_t n);
double adc_lookup_scalar(const float* tables, size_t m, size_t ksub,
                         const uint8_t* codes);
double binary_score_scalar(const float* q, const uint64_t* code, size_t d);
#if defined(__x86_64__)
double dot_f32_avx2(const float* a, const float* b, size_t n);
double dot_f64_avx2(const double* a, const double* b, size_t n);
double adc_lookup_avx2(const float* tables, size_t m, size_t ksub,
                       const uint8_t* codes);
double binary_score_avx2(const float* q, const uint64_t* code, size_t d);
#endif
}  // namespace detail

}  // namespace kernels
}  // namespace limo

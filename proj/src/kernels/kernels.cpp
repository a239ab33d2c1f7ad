#include "limo/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace limo {
namespace kernels {

namespace detail {

double dot_f32_scalar(const float* a, const float* b, size_t n) {
    double acc = 0.0;
    for (size_t i = 0; i < n; i++) acc += (double)a[i] * (double)b[i];
    return acc;
}

double dot_f64_scalar(const double* a, const double* b, size_t n) {
    double acc = 0.0;
    for (size_t i = 0; i < n; i++) acc += a[i] * b[i];
    return acc;
}

double adc_lookup_scalar(const float* tables, size_t m, size_t ksub,
                         const uint8_t* codes) {
    double acc = 0.0;
    for (size_t s = 0; s < m; s++) acc += (double)tables[s * ksub + codes[s]];
    return acc;
}

double binary_score_scalar(const float* q, const uint64_t* code, size_t d) {
    double acc = 0.0;
    for (size_t j = 0; j < d; j++) {
        uint64_t bit = (code[j >> 6] >> (j & 63)) & 1u;
        acc += bit ? (double)q[j] : -(double)q[j];
    }
    return acc;
}

}  // namespace detail

bool avx2_supported() {
#if defined(__x86_64__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

Backend pick_default() {
    if (const char* env = std::getenv("LIMO_SIMD")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
        if (std::strcmp(env, "avx2") == 0 && avx2_supported())
            return Backend::avx2;
        if (std::strcmp(env, "auto") != 0) return Backend::scalar;
    }
    return avx2_supported() ? Backend::avx2 : Backend::scalar;
}

Backend g_backend = pick_default();

}  // namespace

Backend active_backend() { return g_backend; }

Backend set_backend(Backend b) {
    if (b == Backend::avx2 && !avx2_supported()) b = Backend::scalar;
    g_backend = b;
    return g_backend;
}

std::string backend_name(Backend b) {
    return b == Backend::avx2 ? "avx2" : "scalar";
}

double dot_f32(const float* a, const float* b, size_t n) {
#if defined(__x86_64__)
    if (g_backend == Backend::avx2) return detail::dot_f32_avx2(a, b, n);
#endif
    return detail::dot_f32_scalar(a, b, n);
}

double dot_f64(const double* a, const double* b, size_t n) {
#if defined(__x86_64__)
    if (g_backend == Backend::avx2) return detail::dot_f64_avx2(a, b, n);
#endif
    return detail::dot_f64_scalar(a, b, n);
}

double norm_sq_f32(const float* a, size_t n) { return dot_f32(a, a, n); }
double norm_sq_f64(const double* a, size_t n) { return dot_f64(a, a, n); }

double max_dot_f32(const float* query, const float* rows, size_t nrows,
                   size_t d, size_t* argmax) {
    double best = dot_f32(query, rows, d);
    size_t best_i = 0;
    for (size_t r = 1; r < nrows; r++) {
        double v = dot_f32(query, rows + r * d, d);
        if (v > best) {
            best = v;
            best_i = r;
        }
    }
    if (argmax) *argmax = best_i;
    return best;
}

double max_dot_f64(const double* query, const double* rows, size_t nrows,
                   size_t d, size_t* argmax) {
    double best = dot_f64(query, rows, d);
    size_t best_i = 0;
    for (size_t r = 1; r < nrows; r++) {
        double v = dot_f64(query, rows + r * d, d);
        if (v > best) {
            best = v;
            best_i = r;
        }
    }
    if (argmax) *argmax = best_i;
    return best;
}

double adc_lookup(const float* tables, size_t m, size_t ksub,
                  const uint8_t* codes) {
#if defined(__x86_64__)
    if (g_backend == Backend::avx2)
        return detail::adc_lookup_avx2(tables, m, ksub, codes);
#endif
    return detail::adc_lookup_scalar(tables, m, ksub, codes);
}

double binary_score(const float* q, const uint64_t* code, size_t d) {
#if defined(__x86_64__)
    if (g_backend == Backend::avx2)
        return detail::binary_score_avx2(q, code, d);
#endif
    return detail::binary_score_scalar(q, code, d);
}

}  // namespace kernels
}  // namespace limo

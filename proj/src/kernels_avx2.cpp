#include "ape/kernels.hpp"

#include <cmath>
#include <immintrin.h>

// AVX2+FMA backend. Reductions keep four independent lane accumulators and
// combine them in a fixed order so results are reproducible run-to-run.

namespace ape::kernels {
namespace {

inline double hsum_ordered(__m256d acc) {
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    return ((lane[0] + lane[1]) + lane[2]) + lane[3];
}

void v_axpby(std::size_t n, double a, const double* x, double b, double* y) {
    const __m256d va = _mm256_set1_pd(a), vb = _mm256_set1_pd(b);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_mul_pd(vb, _mm256_loadu_pd(y + i));
        vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] = std::fma(a, x[i], b * y[i]);
}

void v_axpy(std::size_t n, double a, const double* x, double* y) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] = std::fma(a, x[i], y[i]);
}

void v_scale(std::size_t n, double a, double* x) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) x[i] *= a;
}

void v_vmul(std::size_t n, const double* x, const double* y, double* z) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(z + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) z[i] = x[i] * y[i];
}

void v_vfma(std::size_t n, const double* x, const double* y, double* z) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vz = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i),
                                     _mm256_loadu_pd(z + i));
        _mm256_storeu_pd(z + i, vz);
    }
    for (; i < n; ++i) z[i] = std::fma(x[i], y[i], z[i]);
}

void v_vfma_scaled(std::size_t n, double a, const double* x, const double* y, double* z) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d xy = _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(z + i, _mm256_fmadd_pd(va, xy, _mm256_loadu_pd(z + i)));
    }
    for (; i < n; ++i) z[i] = std::fma(a, x[i] * y[i], z[i]);
}

void v_vdiv(std::size_t n, const double* x, const double* y, double* z) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(z + i, _mm256_div_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) z[i] = x[i] / y[i];
}

double v_dot(std::size_t n, const double* x, const double* y) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
    double r = hsum_ordered(acc);
    for (; i < n; ++i) r += x[i] * y[i];
    return r;
}

double v_wdot(std::size_t n, const double* w, const double* x, const double* y) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d xy = _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), xy, acc);
    }
    double r = hsum_ordered(acc);
    for (; i < n; ++i) r += w[i] * x[i] * y[i];
    return r;
}

double v_sum(std::size_t n, const double* x) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double r = hsum_ordered(acc);
    for (; i < n; ++i) r += x[i];
    return r;
}

double v_max_abs(std::size_t n, const double* x) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_max_pd(acc, _mm256_andnot_pd(sign, _mm256_loadu_pd(x + i)));
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    double r = std::max(std::max(lane[0], lane[1]), std::max(lane[2], lane[3]));
    for (; i < n; ++i) r = std::max(r, std::fabs(x[i]));
    return r;
}

double v_min_val(std::size_t n, const double* x) {
    std::size_t i = 0;
    double r = x[0];
    if (n >= 4) {
        __m256d acc = _mm256_loadu_pd(x);
        for (i = 4; i + 4 <= n; i += 4) acc = _mm256_min_pd(acc, _mm256_loadu_pd(x + i));
        alignas(32) double lane[4];
        _mm256_store_pd(lane, acc);
        r = std::min(std::min(lane[0], lane[1]), std::min(lane[2], lane[3]));
    }
    for (; i < n; ++i) r = std::min(r, x[i]);
    return r;
}

double v_max_val(std::size_t n, const double* x) {
    std::size_t i = 0;
    double r = x[0];
    if (n >= 4) {
        __m256d acc = _mm256_loadu_pd(x);
        for (i = 4; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, _mm256_loadu_pd(x + i));
        alignas(32) double lane[4];
        _mm256_store_pd(lane, acc);
        r = std::max(std::max(lane[0], lane[1]), std::max(lane[2], lane[3]));
    }
    for (; i < n; ++i) r = std::max(r, x[i]);
    return r;
}

void v_cmul_real(std::size_t n, double* z, const double* m) {
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        // duplicate (m[k], m[k+1]) -> (m[k], m[k], m[k+1], m[k+1])
        __m128d mm = _mm_loadu_pd(m + k);
        __m256d md = _mm256_permute4x64_pd(_mm256_castpd128_pd256(mm), 0x50);
        _mm256_storeu_pd(z + 2 * k, _mm256_mul_pd(md, _mm256_loadu_pd(z + 2 * k)));
    }
    for (; k < n; ++k) {
        z[2 * k] *= m[k];
        z[2 * k + 1] *= m[k];
    }
}

void v_cmul_imag(std::size_t n, double* z, const double* m) {
    const __m256d negmask = _mm256_setr_pd(-0.0, 0.0, -0.0, 0.0);
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        __m128d mm = _mm_loadu_pd(m + k);
        __m256d md = _mm256_permute4x64_pd(_mm256_castpd128_pd256(mm), 0x50);
        __m256d v = _mm256_loadu_pd(z + 2 * k);
        __m256d sw = _mm256_permute_pd(v, 0x5); // (im, re, im, re)
        _mm256_storeu_pd(z + 2 * k, _mm256_xor_pd(_mm256_mul_pd(md, sw), negmask));
    }
    for (; k < n; ++k) {
        const double re = z[2 * k], im = z[2 * k + 1];
        z[2 * k] = -m[k] * im;
        z[2 * k + 1] = m[k] * re;
    }
}

} // namespace

const Ops& avx2_ops() {
    static const Ops ops = {v_axpby, v_axpy,    v_scale,   v_vmul,    v_vfma,
                            v_vfma_scaled,      v_vdiv,    v_dot,     v_wdot,
                            v_sum,   v_max_abs, v_min_val, v_max_val, v_cmul_real,
                            v_cmul_imag,        "avx2"};
    return ops;
}

} // namespace ape::kernels

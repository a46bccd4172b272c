#pragma once

// Data-parallel inner loops used by the field algebra, the vertical stencils,
// the spectral multipliers and the reductions. Every kernel has a scalar
// reference implementation and an AVX2+FMA variant; the active backend is
// picked once at startup from CPUID (override with APE_KERNEL_ISA=scalar|avx2).
//
// Reductions use a fixed accumulation order within each backend, so a given
// backend is bitwise deterministic run-to-run.

#include <cstddef>
#include <string>

namespace ape::kernels {

struct Ops {
    // y[i] = a*x[i] + b*y[i]
    void (*axpby)(std::size_t n, double a, const double* x, double b, double* y);
    // y[i] += a*x[i]
    void (*axpy)(std::size_t n, double a, const double* x, double* y);
    // x[i] *= a
    void (*scale)(std::size_t n, double a, double* x);
    // z[i] = x[i]*y[i]
    void (*vmul)(std::size_t n, const double* x, const double* y, double* z);
    // z[i] += x[i]*y[i]
    void (*vfma)(std::size_t n, const double* x, const double* y, double* z);
    // z[i] += a*x[i]*y[i]
    void (*vfma_scaled)(std::size_t n, double a, const double* x, const double* y, double* z);
    // z[i] = x[i]/y[i]
    void (*vdiv)(std::size_t n, const double* x, const double* y, double* z);
    // sum_i x[i]*y[i]
    double (*dot)(std::size_t n, const double* x, const double* y);
    // sum_i w[i]*x[i]*y[i]
    double (*wdot)(std::size_t n, const double* w, const double* x, const double* y);
    double (*sum)(std::size_t n, const double* x);
    double (*max_abs)(std::size_t n, const double* x);
    double (*min_val)(std::size_t n, const double* x);
    double (*max_val)(std::size_t n, const double* x);
    // interleaved complex z scaled by a real multiplier table: z[k] *= m[k]
    void (*cmul_real)(std::size_t n, double* z, const double* m);
    // interleaved complex z multiplied by i*m[k]: (re,im) -> (-m*im, m*re)
    void (*cmul_imag)(std::size_t n, double* z, const double* m);
    const char* name;
};

const Ops& scalar_ops();
const Ops& avx2_ops();

// Active backend (resolved once, thread-safe).
const Ops& active();

// True if the host supports the AVX2+FMA backend.
bool avx2_supported();

} // namespace ape::kernels

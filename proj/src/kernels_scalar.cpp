#include "ape/kernels.hpp"

#include <cmath>

namespace ape::kernels {
namespace {

void s_axpby(std::size_t n, double a, const double* x, double b, double* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

void s_axpy(std::size_t n, double a, const double* x, double* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void s_scale(std::size_t n, double a, double* x) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void s_vmul(std::size_t n, const double* x, const double* y, double* z) {
    for (std::size_t i = 0; i < n; ++i) z[i] = x[i] * y[i];
}

void s_vfma(std::size_t n, const double* x, const double* y, double* z) {
    for (std::size_t i = 0; i < n; ++i) z[i] += x[i] * y[i];
}

void s_vfma_scaled(std::size_t n, double a, const double* x, const double* y, double* z) {
    for (std::size_t i = 0; i < n; ++i) z[i] += a * x[i] * y[i];
}

void s_vdiv(std::size_t n, const double* x, const double* y, double* z) {
    for (std::size_t i = 0; i < n; ++i) z[i] = x[i] / y[i];
}

double s_dot(std::size_t n, const double* x, const double* y) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double s_wdot(std::size_t n, const double* w, const double* x, const double* y) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += w[i] * x[i] * y[i];
    return acc;
}

double s_sum(std::size_t n, const double* x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

double s_max_abs(std::size_t n, const double* x) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(x[i]));
    return m;
}

double s_min_val(std::size_t n, const double* x) {
    double m = x[0];
    for (std::size_t i = 1; i < n; ++i) m = std::min(m, x[i]);
    return m;
}

double s_max_val(std::size_t n, const double* x) {
    double m = x[0];
    for (std::size_t i = 1; i < n; ++i) m = std::max(m, x[i]);
    return m;
}

void s_cmul_real(std::size_t n, double* z, const double* m) {
    for (std::size_t k = 0; k < n; ++k) {
        z[2 * k] *= m[k];
        z[2 * k + 1] *= m[k];
    }
}

void s_cmul_imag(std::size_t n, double* z, const double* m) {
    for (std::size_t k = 0; k < n; ++k) {
        const double re = z[2 * k], im = z[2 * k + 1];
        z[2 * k] = -m[k] * im;
        z[2 * k + 1] = m[k] * re;
    }
}

} // namespace

const Ops& scalar_ops() {
    static const Ops ops = {s_axpby, s_axpy,    s_scale,   s_vmul,    s_vfma,
                            s_vfma_scaled,      s_vdiv,    s_dot,     s_wdot,
                            s_sum,   s_max_abs, s_min_val, s_max_val, s_cmul_real,
                            s_cmul_imag,        "scalar"};
    return ops;
}

} // namespace ape::kernels

#include "ape/geometry.hpp"

#include "ape/kernels.hpp"

#include <cmath>

namespace ape {

template <class T>
void numerov_solve(int n, double h, double lambda, const T* src, T y0, T y1, T* y) {
    // (1 - s/12)(y_{j+1} + y_{j-1}) - (2 + 10 s/12) y_j = (h^2/12)(f_{j+1} + 10 f_j + f_{j-1})
    // with s = lambda h^2
    const double s = lambda * h * h;
    const double off = 1.0 - s / 12.0;
    const double dia = -(2.0 + 10.0 * s / 12.0);
    const int m = n - 2; // interior unknowns
    std::vector<T> rhs(m, T(0));
    if (src) {
        const double c = h * h / 12.0;
        for (int j = 1; j <= m; ++j) rhs[j - 1] = c * (src[j + 1] + 10.0 * src[j] + src[j - 1]);
    }
    rhs[0] -= off * y0;
    rhs[m - 1] -= off * y1;
    // Thomas algorithm, constant bands
    std::vector<double> cp(m);
    std::vector<T> dp(m);
    cp[0] = off / dia;
    dp[0] = rhs[0] / dia;
    for (int j = 1; j < m; ++j) {
        const double den = dia - off * cp[j - 1];
        cp[j] = off / den;
        dp[j] = (rhs[j] - off * dp[j - 1]) / den;
    }
    y[0] = y0;
    y[n - 1] = y1;
    y[m] = dp[m - 1];
    for (int j = m - 2; j >= 0; --j) y[j + 1] = dp[j] - cp[j] * y[j + 2];
}

template void numerov_solve<double>(int, double, double, const double*, double, double, double*);
template void numerov_solve<std::complex<double>>(int, double, double,
                                                  const std::complex<double>*,
                                                  std::complex<double>, std::complex<double>,
                                                  std::complex<double>*);

HarmonicExtension::HarmonicExtension(const Space& s) : s_(s) {
    const Grid& g = s.grid();
    const Spectral& sp = s.spectral();
    const int n3 = g.n3();
    nmodes_ = static_cast<int>(sp.cplane_size());
    prof_.assign(static_cast<std::size_t>(nmodes_) * n3, 0.0);
    dprof_.assign(static_cast<std::size_t>(nmodes_) * n3, 0.0);
    std::vector<double> y(n3), dy;
    for (int i2 = 0; i2 < g.n2(); ++i2) {
        for (int ic = 0; ic < sp.nc1(); ++ic) {
            const std::size_t mode = static_cast<std::size_t>(i2) * sp.nc1() + ic;
            numerov_solve<double>(n3, g.h3(), sp.ksq(i2, ic), nullptr, 0.0, 1.0, y.data());
            s.vderiv().apply_profile(y, 1, dy);
            for (int i3 = 0; i3 < n3; ++i3) {
                prof_[mode * n3 + i3] = y[i3];
                dprof_[mode * n3 + i3] = dy[i3];
            }
        }
    }
}

void HarmonicExtension::extend(const BoundaryField& bv, ScalarField* phi,
                               ScalarField* d3phi) const {
    const Grid& g = s_.grid();
    const Spectral& sp = s_.spectral();
    check_finite(bv.data(), bv.size(), "harmonic extension boundary value");
    if (bv.size() != g.plane_size()) throw GridError("boundary value does not match the grid");
    std::vector<std::complex<double>> bhat(sp.cplane_size());
    sp.forward_plane(bv.data(), bhat.data());
    std::vector<std::complex<double>> plane(sp.cplane_size());
    const int n3 = g.n3();
    for (int i3 = 0; i3 < n3; ++i3) {
        if (phi) {
            for (std::size_t m = 0; m < sp.cplane_size(); ++m)
                plane[m] = bhat[m] * prof_[m * n3 + i3];
            sp.inverse_plane(plane.data(), phi->data() + g.idx(i3, 0, 0));
        }
        if (d3phi) {
            for (std::size_t m = 0; m < sp.cplane_size(); ++m)
                plane[m] = bhat[m] * dprof_[m * n3 + i3];
            sp.inverse_plane(plane.data(), d3phi->data() + g.idx(i3, 0, 0));
        }
    }
}

ScalarField HarmonicExtension::extend(const BoundaryField& bv) const {
    ScalarField phi(s_.grid());
    extend(bv, &phi, nullptr);
    return phi;
}

double AleMaps::b(int k, int i, std::size_t at) const {
    if (k < 2) return (k == i) ? jac[at] : 0.0;
    if (i == 0) return -d1psi[at];
    if (i == 1) return -d2psi[at];
    return 1.0;
}

double AleMaps::a(int k, int i, std::size_t at) const {
    if (k < 2) return (k == i) ? 1.0 : 0.0;
    if (i == 0) return a31[at];
    if (i == 1) return a32[at];
    return a33[at];
}

double AleMaps::bdot(int k, int i, std::size_t at) const {
    if (k < 2) return (k == i) ? d3psi_t[at] : 0.0;
    if (i == 0) return -d1psi_t[at];
    if (i == 1) return -d2psi_t[at];
    return 0.0;
}

double AleMaps::adot(int k, int i, std::size_t at) const {
    // a3i = b3i / J, so d_t a3i = (d_t b3i - a3i d_t J)/J
    if (k < 2) return 0.0;
    return (bdot(2, i, at) - a(2, i, at) * d3psi_t[at]) / jac[at];
}

namespace {

void finish_maps(const Space& s, AleMaps& m, double jmin_breakdown) {
    const auto& K = kernels::active();
    const double jmin = K.min_val(m.jac.size(), m.jac.data());
    if (!(jmin > jmin_breakdown))
        throw GeometryBreakdown("degenerate ALE map: min J = " + std::to_string(jmin));
    m.a33 = ScalarField(s.grid());
    m.a31 = ScalarField(s.grid());
    m.a32 = ScalarField(s.grid());
    for (std::size_t i = 0; i < m.jac.size(); ++i) {
        const double inv = 1.0 / m.jac[i];
        m.a33[i] = inv;
        m.a31[i] = -m.d1psi[i] * inv;
        m.a32[i] = -m.d2psi[i] * inv;
    }
}

} // namespace

AleMaps ale_coefficients(const Space& s, const ScalarField& psi, const ScalarField& psi_t,
                         double jmin_breakdown) {
    check_finite(psi.data(), psi.size(), "psi");
    check_finite(psi_t.data(), psi_t.size(), "psi_t");
    AleMaps m;
    m.psi = psi;
    m.psi_t = psi_t;
    m.d1psi = s.d_tan(psi, 1);
    m.d2psi = s.d_tan(psi, 2);
    m.jac = s.d3(psi);
    m.d1psi_t = s.d_tan(psi_t, 1);
    m.d2psi_t = s.d_tan(psi_t, 2);
    m.d3psi_t = s.d3(psi_t);
    finish_maps(s, m, jmin_breakdown);
    return m;
}

AleMaps geometry_from_plate(const Space& s, const HarmonicExtension& ext, const BoundaryField& w,
                            const BoundaryField& w_t, double jmin_breakdown) {
    BoundaryField bv(s.grid(), Boundary::Top);
    for (std::size_t i = 0; i < bv.size(); ++i) bv[i] = 1.0 + w[i];
    AleMaps m;
    m.psi = ScalarField(s.grid());
    m.jac = ScalarField(s.grid());
    ext.extend(bv, &m.psi, &m.jac);
    m.psi_t = ScalarField(s.grid());
    m.d3psi_t = ScalarField(s.grid());
    ext.extend(w_t, &m.psi_t, &m.d3psi_t);
    m.d1psi = s.d_tan(m.psi, 1);
    m.d2psi = s.d_tan(m.psi, 2);
    m.d1psi_t = s.d_tan(m.psi_t, 1);
    m.d2psi_t = s.d_tan(m.psi_t, 2);
    finish_maps(s, m, jmin_breakdown);
    return m;
}

std::vector<double> elliptic_ratio_probe(const Space& s, const HarmonicExtension& ext,
                                         const std::vector<BoundaryField>& w_samples,
                                         double sexp) {
    if (sexp < 0.0 || sexp > 5.0) throw GridError("elliptic probe exponent must be in [0,5]");
    std::vector<double> ratios;
    for (const auto& w : w_samples) {
        const double wn = s.sobolev(w, sexp);
        if (wn == 0.0) continue; // 0/0 by convention: skip
        const ScalarField phi = ext.extend(w);
        ratios.push_back(s.sobolev(phi, sexp + 0.5) / wn);
    }
    return ratios;
}

} // namespace ape

#include "ape/spectral.hpp"

#include "ape/kernels.hpp"

#include <cmath>
#include <cstring>
#include <fftw3.h>

namespace ape {

Spectral::Spectral(const Grid& g) : n1_(g.n1()), n2_(g.n2()), nc1_(g.n1() / 2 + 1) {
    norm_ = 1.0 / (static_cast<double>(n1_) * n2_);
    k1_.resize(nc1_);
    for (int ic = 0; ic < nc1_; ++ic) k1_[ic] = ic;
    k2_.resize(n2_);
    for (int i2 = 0; i2 < n2_; ++i2) k2_[i2] = (i2 <= n2_ / 2) ? i2 : i2 - n2_;

    rbuf_ = fftw_alloc_real(static_cast<std::size_t>(n1_) * n2_);
    fftw_complex* cb = fftw_alloc_complex(cplane_size());
    cbuf_ = cb;
    plan_fwd_ = fftw_plan_dft_r2c_2d(n2_, n1_, rbuf_, cb, FFTW_ESTIMATE);
    plan_bwd_ = fftw_plan_dft_c2r_2d(n2_, n1_, cb, rbuf_, FFTW_ESTIMATE);
}

Spectral::~Spectral() {
    fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
    fftw_free(rbuf_);
    fftw_free(static_cast<fftw_complex*>(cbuf_));
}

void Spectral::forward_plane(const double* re, std::complex<double>* sp) const {
    std::memcpy(rbuf_, re, sizeof(double) * n1_ * n2_);
    fftw_execute(static_cast<fftw_plan>(plan_fwd_));
    std::memcpy(sp, cbuf_, sizeof(std::complex<double>) * cplane_size());
}

void Spectral::inverse_plane(const std::complex<double>* sp, double* re) const {
    std::memcpy(cbuf_, sp, sizeof(std::complex<double>) * cplane_size());
    fftw_execute(static_cast<fftw_plan>(plan_bwd_));
    const auto& K = kernels::active();
    std::memcpy(re, rbuf_, sizeof(double) * n1_ * n2_);
    K.scale(static_cast<std::size_t>(n1_) * n2_, norm_, re);
}

bool Spectral::dealias_keep(int i2, int ic) const {
    return std::abs(k1_[ic]) <= n1_ / 3 && std::abs(k2_[i2]) <= n2_ / 3;
}

namespace {

// multiplier tables for (ik)^order along one direction; Nyquist zeroed
void build_deriv_mult(const Spectral& sp, int n2, int nc1, int n1, int dir, int order,
                      std::vector<double>& mult, bool& imag) {
    imag = (order % 2 == 1);
    mult.resize(static_cast<std::size_t>(n2) * nc1);
    for (int i2 = 0; i2 < n2; ++i2) {
        for (int ic = 0; ic < nc1; ++ic) {
            const double k = (dir == 1) ? sp.k1_of(ic) : sp.k2_of(i2);
            double m = std::pow(k, order);
            // sign of i^order: i, -1, -i, 1 for order mod 4 = 1,2,3,0
            const int r = order % 4;
            if (r == 2 || r == 3) m = -m;
            const bool nyq1 = (ic == n1 / 2);
            const bool nyq2 = (i2 == n2 / 2);
            if ((dir == 1 && nyq1) || (dir == 2 && nyq2)) m = 0.0;
            mult[static_cast<std::size_t>(i2) * nc1 + ic] = m;
        }
    }
}

} // namespace

void Spectral::deriv(const Grid& g, const ScalarField& f, int dir, int order,
                     ScalarField& out) const {
    if (dir != 1 && dir != 2) throw GridError("tangential derivative direction must be 1 or 2");
    if (order < 1) throw GridError("derivative order must be >= 1");
    std::vector<double> mult;
    bool imag = false;
    build_deriv_mult(*this, n2_, nc1_, n1_, dir, order, mult, imag);
    std::vector<std::complex<double>> sp(cplane_size());
    const auto& K = kernels::active();
    for (int i3 = 0; i3 < g.n3(); ++i3) {
        const double* src = f.data() + g.idx(i3, 0, 0);
        forward_plane(src, sp.data());
        double* z = reinterpret_cast<double*>(sp.data());
        if (imag)
            K.cmul_imag(cplane_size(), z, mult.data());
        else
            K.cmul_real(cplane_size(), z, mult.data());
        inverse_plane(sp.data(), out.data() + g.idx(i3, 0, 0));
    }
}

void Spectral::deriv(const BoundaryField& f, int dir, int order, BoundaryField& out) const {
    std::vector<double> mult;
    bool imag = false;
    build_deriv_mult(*this, n2_, nc1_, n1_, dir, order, mult, imag);
    std::vector<std::complex<double>> sp(cplane_size());
    forward_plane(f.data(), sp.data());
    double* z = reinterpret_cast<double*>(sp.data());
    const auto& K = kernels::active();
    if (imag)
        K.cmul_imag(cplane_size(), z, mult.data());
    else
        K.cmul_real(cplane_size(), z, mult.data());
    inverse_plane(sp.data(), out.data());
}

void Spectral::laplacian_h(const BoundaryField& f, int p, BoundaryField& out) const {
    std::vector<std::complex<double>> sp(cplane_size());
    forward_plane(f.data(), sp.data());
    std::vector<double> mult(cplane_size());
    for (int i2 = 0; i2 < n2_; ++i2)
        for (int ic = 0; ic < nc1_; ++ic) {
            double m = -ksq(i2, ic);
            mult[static_cast<std::size_t>(i2) * nc1_ + ic] = (p == 1) ? m : m * m;
        }
    kernels::active().cmul_real(cplane_size(), reinterpret_cast<double*>(sp.data()), mult.data());
    inverse_plane(sp.data(), out.data());
}

void Spectral::dealias_spec(std::complex<double>* sp) const {
    for (int i2 = 0; i2 < n2_; ++i2)
        for (int ic = 0; ic < nc1_; ++ic)
            if (!dealias_keep(i2, ic)) sp[static_cast<std::size_t>(i2) * nc1_ + ic] = 0.0;
}

void Spectral::dealias(const Grid& g, ScalarField& f) const {
    std::vector<std::complex<double>> sp(cplane_size());
    for (int i3 = 0; i3 < g.n3(); ++i3) {
        double* plane = f.data() + g.idx(i3, 0, 0);
        forward_plane(plane, sp.data());
        dealias_spec(sp.data());
        inverse_plane(sp.data(), plane);
    }
}

void Spectral::dealias(BoundaryField& f) const {
    std::vector<std::complex<double>> sp(cplane_size());
    forward_plane(f.data(), sp.data());
    dealias_spec(sp.data());
    inverse_plane(sp.data(), f.data());
}

double Spectral::plane_hs_sq(const std::complex<double>* sp, double s) const {
    const double area = 4.0 * Grid::pi() * Grid::pi();
    const double fac = area * norm_ * norm_;
    double acc = 0.0;
    for (int i2 = 0; i2 < n2_; ++i2)
        for (int ic = 0; ic < nc1_; ++ic) {
            const std::complex<double> z = sp[static_cast<std::size_t>(i2) * nc1_ + ic];
            const double mag2 = z.real() * z.real() + z.imag() * z.imag();
            double mult = 1.0;
            if (s != 0.0) mult = std::pow(1.0 + ksq(i2, ic), s);
            acc += mode_weight(ic) * mult * mag2;
        }
    return fac * acc;
}

} // namespace ape

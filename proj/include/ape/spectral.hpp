#pragma once

// Tangential Fourier collocation: plane transforms, spectral derivatives,
// 2/3-rule dealiasing and multiplier helpers. Real fields use the r2c layout
// n2 x (n1/2+1); modes with 0 < k1 < n1/2 stand for a +/-k1 pair (weight 2).

#include "ape/grid.hpp"

#include <complex>
#include <vector>

namespace ape {

class Spectral {
  public:
    explicit Spectral(const Grid& g);
    ~Spectral();
    Spectral(const Spectral&) = delete;
    Spectral& operator=(const Spectral&) = delete;

    int nc1() const { return nc1_; }
    std::size_t cplane_size() const { return static_cast<std::size_t>(nc1_) * n2_; }

    // Unnormalized forward transform of one tangential plane; inverse applies
    // the 1/(n1*n2) factor.
    void forward_plane(const double* re, std::complex<double>* sp) const;
    void inverse_plane(const std::complex<double>* sp, double* re) const;

    // d^order/dx_dir^order of an interior or boundary field (exact for
    // band-limited data, Nyquist modes zeroed).
    void deriv(const Grid& g, const ScalarField& f, int dir, int order, ScalarField& out) const;
    void deriv(const BoundaryField& f, int dir, int order, BoundaryField& out) const;

    // (Delta_h)^p on a boundary field, p = 1, 2.
    void laplacian_h(const BoundaryField& f, int p, BoundaryField& out) const;

    // 2/3-rule truncation in place.
    void dealias(const Grid& g, ScalarField& f) const;
    void dealias(BoundaryField& f) const;
    void dealias_spec(std::complex<double>* sp) const;

    // wavenumber tables over the r2c plane (index i2*nc1 + ic)
    double k1_of(int ic) const { return k1_[ic]; }
    double k2_of(int i2) const { return k2_[i2]; }
    double ksq(int i2, int ic) const { return k1_[ic] * k1_[ic] + k2_[i2] * k2_[i2]; }
    // Parseval weight of a mode (2 for interior k1 columns, 1 for k1=0/Nyquist)
    double mode_weight(int ic) const { return (ic == 0 || ic == n1_ / 2) ? 1.0 : 2.0; }
    bool dealias_keep(int i2, int ic) const;

    // weighted spectral sum of |f_hat|^2 over one plane with multiplier
    // (1+|k|^2)^s; includes the Parseval normalization so the result is
    // the squared L2(T^2) norm when s = 0.
    double plane_hs_sq(const std::complex<double>* sp, double s) const;

  private:
    int n1_, n2_, nc1_;
    double norm_;
    std::vector<double> k1_, k2_;
    double* rbuf_;
    void* cbuf_;
    void* plan_fwd_;
    void* plan_bwd_;
};

} // namespace ape

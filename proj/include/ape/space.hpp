#pragma once

// Discretization bundle: grid + tangential spectral ops + vertical stencils,
// with Sobolev norms, traces, cutoffs and quadrature on top. Interior
// fractional norms use the anisotropic equivalent norm
//   ||f||_{H^s}^2 = sum_{j=0..floor(s)} || Lambda_tan^{s-j} d3^j f ||_{L2}^2,
// the half power living on the tangential multiplier. Boundary norms are
// fully spectral with multiplier (1+|k|^2)^{s/2}.

#include "ape/grid.hpp"
#include "ape/spectral.hpp"
#include "ape/vderiv.hpp"

#include <memory>

namespace ape {

enum class Region { Omega, Gamma0, Gamma1 };

class Space {
  public:
    explicit Space(const Grid& g) : grid_(g), sp_(g), vd_(g) {}

    const Grid& grid() const { return grid_; }
    const Spectral& spectral() const { return sp_; }
    const VDeriv& vderiv() const { return vd_; }

    // --- derivatives ---
    ScalarField d_tan(const ScalarField& f, int dir, int order = 1) const;
    BoundaryField d_tan(const BoundaryField& f, int dir, int order = 1) const;
    ScalarField d3(const ScalarField& f, int order = 1) const;

    // --- traces & lifts ---
    BoundaryField trace(const ScalarField& f, Boundary b) const;
    // smooth vertical cutoff: 1 near the named boundary, 0 past x3 = 1/2
    ScalarField cutoff(Boundary near) const;
    double cutoff_profile(double x3, Boundary near) const;

    // --- quadrature ---
    double integral(const ScalarField& f) const;               // over Omega
    double integral(const BoundaryField& f) const;             // over the torus
    double l2_sq(const ScalarField& f) const;                  // integral of f^2
    double l2_sq(const BoundaryField& f) const;
    double max_abs(const ScalarField& f) const;
    double max_abs(const BoundaryField& f) const;

    // --- Sobolev norms ---
    double sobolev(const ScalarField& f, double s) const;      // on Omega, s <= 5.5
    double sobolev(const BoundaryField& f, double s) const;    // on the torus, s <= 6

    // --- field algebra helpers (kernel-backed) ---
    ScalarField mul(const ScalarField& a, const ScalarField& b) const;
    void add_scaled(ScalarField& y, double c, const ScalarField& x) const;
    void add_scaled(BoundaryField& y, double c, const BoundaryField& x) const;

  private:
    Grid grid_;
    Spectral sp_;
    VDeriv vd_;
};

} // namespace ape

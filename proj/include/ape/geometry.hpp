#pragma once

// ALE geometry: harmonic extension of the plate height into the channel,
// the coefficient matrices a, b = J a, J = d3 psi and the moving normal.
// The extension decouples per tangential Fourier mode into two-point BVPs
// solved with a compact 4th-order (Numerov) tridiagonal scheme; the mode
// profiles are precomputed so one extension is a broadcast-multiply plus
// inverse transforms.

#include "ape/space.hpp"

#include <complex>
#include <vector>

namespace ape {

struct GeometryBreakdown : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Solves y'' - lambda y = src on [0,1] (uniform, n nodes) with y(0)=y0,
// y(1)=y1, Numerov discretization. src may be null (homogeneous).
template <class T>
void numerov_solve(int n, double h, double lambda, const T* src, T y0, T y1, T* y);

class HarmonicExtension {
  public:
    explicit HarmonicExtension(const Space& s);

    // phi harmonic in Omega, phi = bv on Gamma1, phi = 0 on Gamma0
    ScalarField extend(const BoundaryField& bv) const;
    // extension together with its vertical derivative (differentiated
    // per-mode profiles; identical to applying the vertical stencil)
    void extend(const BoundaryField& bv, ScalarField* phi, ScalarField* d3phi) const;

    const Space& space() const { return s_; }

  private:
    const Space& s_;
    int nmodes_;
    std::vector<double> prof_;  // [mode][i3]
    std::vector<double> dprof_; // [mode][i3]
};

struct AleMaps {
    ScalarField psi, psi_t;
    ScalarField d1psi, d2psi;           // tangential gradient of psi
    ScalarField jac;                    // J = d3 psi
    ScalarField a31, a32, a33;          // third row of a; rows 1,2 are identity
    ScalarField d1psi_t, d2psi_t, d3psi_t;

    // b = J a: b11 = b22 = J, b31 = -d1psi, b32 = -d2psi, b33 = 1.
    double b(int k, int i, std::size_t at) const;
    double a(int k, int i, std::size_t at) const;
    // d_t of entries of a and b at a node (exact, from psi_t derivatives)
    double bdot(int k, int i, std::size_t at) const;
    double adot(int k, int i, std::size_t at) const;
};

// Coefficients from arbitrary psi, psi_t grid fields (derivatives taken
// discretely). Throws GeometryBreakdown when J < jmin_breakdown anywhere.
AleMaps ale_coefficients(const Space& s, const ScalarField& psi, const ScalarField& psi_t,
                         double jmin_breakdown = 0.1);

// Fast path: geometry from the plate state via the extension operator
// (psi = extend(1 + w), psi_t = extend(w_t)).
AleMaps geometry_from_plate(const Space& s, const HarmonicExtension& ext,
                            const BoundaryField& w, const BoundaryField& w_t,
                            double jmin_breakdown = 0.1);

// Measured ratios ||extend(w)||_{H^{s+1/2}} / ||w||_{H^s}; identically-zero
// samples are skipped.
std::vector<double> elliptic_ratio_probe(const Space& s, const HarmonicExtension& ext,
                                         const std::vector<BoundaryField>& w_samples,
                                         double sexp);

} // namespace ape

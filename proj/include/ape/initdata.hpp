#pragma once

// Compatible initial time-derivative cascade: substituting the data into
// the equations at t = 0 defines d_t^j R(0), d_t^j v(0) (j <= 3) and
// d_t^j w(0) (j <= 4), with every geometry derivative supplied by the
// harmonic extension of the w-jet. The cascade is evaluated with truncated
// derivative-jet arithmetic (Leibniz products, reciprocal and chain-rule
// composition on grid fields), so the higher derivatives follow mechanically
// from the same expressions the solver integrates.

#include "ape/geometry.hpp"
#include "ape/pressure.hpp"
#include "ape/state.hpp"

#include <string>
#include <vector>

namespace ape {

struct InitDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InitialJet {
    std::vector<VectorField> v_jet;   // d_t^j v(0), j = 0..3
    std::vector<ScalarField> R_jet;   // d_t^j R(0), j = 0..3
    std::vector<BoundaryField> w_jet; // d_t^j w(0), j = 0..4 (w_jet[0] = 0)
    ScalarField psi0, psi_t0;
};

InitialJet build_jet(const Space& s, const HarmonicExtension& ext, const PressureLaw& law,
                     const VectorField& v0, const ScalarField& R0, const BoundaryField& w1);

// total initial energy functional (sum of the squared jet norms)
double total_energy_E0(const Space& s, const InitialJet& jet);

// trace norm ||d_t R(0)|Gamma1||_{H2(Gamma1)} (reported, no threshold)
double Rt0_trace_H2(const Space& s, const InitialJet& jet);

struct InitialData {
    VectorField v0;
    ScalarField R0;
    BoundaryField w1;
};

// built-in analytic families: steady, density, density2d, shear, mixed,
// updraft, bump (corner-compatible); or "snapshot:PATH"
InitialData make_initial_data(const Space& s, const std::string& family, double amplitude,
                              const PressureLaw& law);

State state_from_initial(const Space& s, const HarmonicExtension& ext, const InitialData& d);

} // namespace ape

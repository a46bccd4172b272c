#pragma once

// One time level of the coupled system: fluid (v, R) on Omega, plate
// (w, w_t) on Gamma1, plus the ALE geometry derived from the plate state.

#include "ape/geometry.hpp"
#include "ape/pressure.hpp"

namespace ape {

struct State {
    double t = 0.0;
    VectorField v;
    ScalarField R;
    BoundaryField w, w_t;
    AleMaps maps;

    State() = default;
    State(const Space& s)
        : v(s.grid()), R(s.grid()), w(s.grid(), Boundary::Top), w_t(s.grid(), Boundary::Top) {}

    void refresh_maps(const Space& s, const HarmonicExtension& ext, double jmin_breakdown = 0.1) {
        maps = geometry_from_plate(s, ext, w, w_t, jmin_breakdown);
    }

    // kinematic mismatch b_{3i} v_i - w_t on Gamma1
    BoundaryField kinematic_residual(const Space& s) const;
    double kinematic_residual_l2(const Space& s) const;
};

} // namespace ape

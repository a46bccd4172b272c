#pragma once

// Right-hand sides of the coupled system in ALE form:
//   d_t v_i = -(c . grad) v_i - (1/R) (grad_a q)_i
//   d_t R   = -R div_a v - (c . grad) R
//   d_t w_t = -Lap_h^2 w + Lap_h w_t + q(R)|Gamma1
// with the advective coefficient c = (v1, v2, a_{3i} v_i - psi_t a_33).

#include "ape/pressure.hpp"
#include "ape/state.hpp"

#include <functional>

namespace ape {

// Optional source terms (manufactured solutions); each hook *adds* to the
// assembled right-hand side at the given time.
struct Forcing {
    std::function<void(const Space&, double, VectorField&, ScalarField&)> fluid;
    std::function<void(const Space&, double, BoundaryField&)> plate;
    // target offset for the kinematic enforcement: b_{3i} v_i = w_t + slip
    std::function<void(const Space&, double, BoundaryField&)> kinematic_slip;
    bool freeze_fluid = false;
    bool freeze_plate = false;
};

// advective coefficient c3 = a_{3i} v_i - psi_t a_33 (vertical component)
ScalarField advective_c3(const Space& s, const State& st);

void rhs_fluid(const Space& s, const PressureLaw& law, const State& st, VectorField& dv,
               ScalarField& dR, bool do_dealias = true, const Forcing* forcing = nullptr);

// full plate acceleration  -Lap_h^2 w + Lap_h w_t + q_trace
BoundaryField rhs_plate(const Space& s, const BoundaryField& w, const BoundaryField& w_t,
                        const BoundaryField& q_trace);

// boundary enforcement: v3 = 0 on Gamma0 exactly; minimal normal-direction
// correction on the top collocation layer so that b_{3i} v_i = w_t + slip.
// Returns the max-norm of the applied top-layer correction.
double enforce_boundary_conditions(const Space& s, State& st, const BoundaryField* slip = nullptr);

} // namespace ape

#pragma once

// Derived identities and monitored quantities, each as a computable
// residual: the transport operator Q, boundary tangency of the ALE drift,
// the second-order equation satisfied by log R with its Neumann data, the
// vorticity transport residual, the continuity/divergence identity, the
// flat div-curl reconstruction and the runtime monitor report.

#include "ape/pressure.hpp"
#include "ape/window.hpp"

#include <map>
#include <optional>
#include <string>

namespace ape {

// Q f = f_t + v_i a_{ki} d_k f - psi_t a_33 d_3 f (f_t supplied by caller)
ScalarField apply_Q(const Space& s, const State& st, const ScalarField& f, const ScalarField& f_t);

// max over each boundary of |vtil_i a_{3i}|, vtil = v - (0,0,psi_t)
std::pair<double, double> tangency_residual(const Space& s, const State& st);

// w_tt from the plate equation (exact trace relation)
BoundaryField plate_acceleration(const Space& s, const PressureLaw& law, const State& st);

// Neumann data h on Gamma1 and its interior extension
BoundaryField h_boundary(const Space& s, const PressureLaw& law, const State& st);
ScalarField h_extension(const Space& s, const HarmonicExtension& ext, const PressureLaw& law,
                        const State& st);

struct GResidual {
    ScalarField interior;  // Q^2 g - div_a(f grad_a g) - F
    BoundaryField gamma1;  // f grad_a g . nu - h
    BoundaryField gamma0;  // d_3 g
    double interior_l2, gamma1_l2, gamma0_l2;
};
GResidual g_equation_residual(const Space& s, const HarmonicExtension& ext,
                              const PressureLaw& law, const JetWindow& win);

// F of the interior equation (variable-coefficient commutator source)
ScalarField g_equation_source(const Space& s, const State& st);

struct VorticityResidual {
    VectorField zeta;      // variable curl at the window center
    VectorField transport; // transport-equation residual
    double residual_l2;
};
VectorField variable_curl(const Space& s, const State& st);
VorticityResidual vorticity_residual(const Space& s, const JetWindow& win);

// continuity residual scaled by 1/R (identical to the Qg + div_a v identity)
ScalarField divergence_identity_residual(const Space& s, const JetWindow& win);

struct DivCurlResult {
    VectorField vhat;
    double err_l2, err_h1;
    double a_minus_I_h2;
};
// Reconstructs v from div_a v, curl_a v, the normal traces and the domain
// means of v1, v2 by the flat per-mode solve; requires ||a-I||_H2 within
// the monitor bound unless check_monitor is false.
DivCurlResult divcurl_reconstruct(const Space& s, const State& st, bool check_monitor = true,
                                  double aI_bound = 0.1);

double a_minus_identity_h2(const Space& s, const State& st);

struct MonitorReport {
    double J_min, J_max;
    double R_min, R_max;
    double qp_min, qp_max;
    double a_minus_I_H2;
    double kinematic_residual;
    double tangency_g0, tangency_g1;
    std::map<std::string, double> norms; // filled when a window is supplied
    bool green(const PressureLaw& law, double aI_bound) const;
    std::string first_violation(const PressureLaw& law, double aI_bound) const;
};
MonitorReport monitor(const Space& s, const PressureLaw& law, const State& st,
                      const JetWindow* win = nullptr);

} // namespace ape

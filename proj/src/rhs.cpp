#include "ape/rhs.hpp"

#include "ape/kernels.hpp"

#include <cmath>

namespace ape {

ScalarField advective_c3(const Space& s, const State& st) {
    const AleMaps& m = st.maps;
    ScalarField c3(s.grid());
    const auto& K = kernels::active();
    const std::size_t n = c3.size();
    K.vfma(n, m.a31.data(), st.v[0].data(), c3.data());
    K.vfma(n, m.a32.data(), st.v[1].data(), c3.data());
    K.vfma(n, m.a33.data(), st.v[2].data(), c3.data());
    ScalarField tmp(s.grid());
    K.vmul(n, m.psi_t.data(), m.a33.data(), tmp.data());
    K.axpy(n, -1.0, tmp.data(), c3.data());
    return c3;
}

void rhs_fluid(const Space& s, const PressureLaw& law, const State& st, VectorField& dv,
               ScalarField& dR, bool do_dealias, const Forcing* forcing) {
    const Grid& g = s.grid();
    const AleMaps& m = st.maps;
    const auto& K = kernels::active();
    const std::size_t n = g.size();

    ScalarField q(g);
    pressure_eval(law, g, st.R, &q, nullptr, nullptr);

    const ScalarField c3 = advective_c3(s, st);

    ScalarField d1q = s.d_tan(q, 1), d2q = s.d_tan(q, 2), d3q = s.d3(q);
    ScalarField d1R = s.d_tan(st.R, 1), d2R = s.d_tan(st.R, 2), d3R = s.d3(st.R);

    ScalarField invR(g);
    {
        ScalarField ones(g);
        ones.fill(1.0);
        K.vdiv(n, ones.data(), st.R.data(), invR.data());
    }

    ScalarField diva(g); // a_{ji} d_j v_i
    for (int i = 0; i < 3; ++i) {
        ScalarField d1 = s.d_tan(st.v[i], 1);
        ScalarField d2 = s.d_tan(st.v[i], 2);
        ScalarField d3 = s.d3(st.v[i]);

        // transport
        ScalarField& out = dv[i];
        out.fill(0.0);
        K.vfma_scaled(n, -1.0, st.v[0].data(), d1.data(), out.data());
        K.vfma_scaled(n, -1.0, st.v[1].data(), d2.data(), out.data());
        K.vfma_scaled(n, -1.0, c3.data(), d3.data(), out.data());

        // pressure gradient (grad_a q)_i
        ScalarField gq(g);
        if (i == 0) {
            gq = d1q;
            K.vfma(n, m.a31.data(), d3q.data(), gq.data());
        } else if (i == 1) {
            gq = d2q;
            K.vfma(n, m.a32.data(), d3q.data(), gq.data());
        } else {
            K.vmul(n, m.a33.data(), d3q.data(), gq.data());
        }
        K.vfma_scaled(n, -1.0, invR.data(), gq.data(), out.data());

        // accumulate div_a v
        if (i == 0) {
            K.axpy(n, 1.0, d1.data(), diva.data());
            K.vfma(n, m.a31.data(), d3.data(), diva.data());
        } else if (i == 1) {
            K.axpy(n, 1.0, d2.data(), diva.data());
            K.vfma(n, m.a32.data(), d3.data(), diva.data());
        } else {
            K.vfma(n, m.a33.data(), d3.data(), diva.data());
        }
    }

    dR.fill(0.0);
    K.vfma_scaled(n, -1.0, st.R.data(), diva.data(), dR.data());
    K.vfma_scaled(n, -1.0, st.v[0].data(), d1R.data(), dR.data());
    K.vfma_scaled(n, -1.0, st.v[1].data(), d2R.data(), dR.data());
    K.vfma_scaled(n, -1.0, c3.data(), d3R.data(), dR.data());

    if (forcing && forcing->fluid) forcing->fluid(s, st.t, dv, dR);

    if (do_dealias) {
        for (int i = 0; i < 3; ++i) s.spectral().dealias(g, dv[i]);
        s.spectral().dealias(g, dR);
    }
}

BoundaryField rhs_plate(const Space& s, const BoundaryField& w, const BoundaryField& w_t,
                        const BoundaryField& q_trace) {
    BoundaryField lap2(s.grid(), Boundary::Top), lap1(s.grid(), Boundary::Top);
    s.spectral().laplacian_h(w, 2, lap2);
    s.spectral().laplacian_h(w_t, 1, lap1);
    BoundaryField out(s.grid(), Boundary::Top);
    const auto& K = kernels::active();
    K.axpy(out.size(), -1.0, lap2.data(), out.data());
    K.axpy(out.size(), 1.0, lap1.data(), out.data());
    K.axpy(out.size(), 1.0, q_trace.data(), out.data());
    return out;
}

double enforce_boundary_conditions(const Space& s, State& st, const BoundaryField* slip) {
    // Characteristic-style injection at the boundary collocation planes: the
    // wall value of the constrained combination is overwritten, interior
    // nodes keep their PDE values.
    const Grid& g = s.grid();
    const std::size_t ps = g.plane_size();

    // Gamma0: v3 = 0 exactly
    double* v3bot = st.v[2].data();
    std::fill(v3bot, v3bot + ps, 0.0);

    // Gamma1: v += delta * b3 / |b3|^2 with delta the kinematic mismatch
    const std::size_t top = g.idx(g.n3() - 1, 0, 0);
    double corr_max = 0.0;
    for (std::size_t p = 0; p < ps; ++p) {
        const std::size_t at = top + p;
        const double b31 = -st.maps.d1psi[at];
        const double b32 = -st.maps.d2psi[at];
        const double bv = b31 * st.v[0][at] + b32 * st.v[1][at] + st.v[2][at];
        const double target = st.w_t[p] + (slip ? (*slip)[p] : 0.0);
        const double delta = (target - bv) / (b31 * b31 + b32 * b32 + 1.0);
        st.v[0][at] += delta * b31;
        st.v[1][at] += delta * b32;
        st.v[2][at] += delta;
        corr_max = std::max(corr_max, std::fabs(delta));
    }
    return corr_max;
}

} // namespace ape

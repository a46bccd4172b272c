#include "ape/initdata.hpp"

#include "ape/io.hpp"
#include "ape/kernels.hpp"

#include <cmath>

namespace ape {

namespace {

using Jet = std::vector<ScalarField>; // jet[k] = d_t^k value at t = 0

long binom(int n, int k) {
    long r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

Jet jet_zero(const Space& s, int order) { return Jet(order + 1, ScalarField(s.grid())); }

Jet jet_mul(const Space& s, const Jet& a, const Jet& b, int order) {
    const auto& K = kernels::active();
    Jet c = jet_zero(s, order);
    for (int k = 0; k <= order; ++k)
        for (int r = 0; r <= k; ++r)
            K.vfma_scaled(c[k].size(), static_cast<double>(binom(k, r)), a[r].data(),
                          b[k - r].data(), c[k].data());
    return c;
}

Jet jet_add(const Space& s, const Jet& a, const Jet& b, double ca, double cb, int order) {
    const auto& K = kernels::active();
    Jet c = jet_zero(s, order);
    for (int k = 0; k <= order; ++k) {
        K.axpy(c[k].size(), ca, a[k].data(), c[k].data());
        K.axpy(c[k].size(), cb, b[k].data(), c[k].data());
    }
    return c;
}

Jet jet_recip(const Space& s, const Jet& a, int order) {
    const auto& K = kernels::active();
    Jet g = jet_zero(s, order);
    for (std::size_t i = 0; i < g[0].size(); ++i) g[0][i] = 1.0 / a[0][i];
    for (int k = 1; k <= order; ++k) {
        ScalarField acc(s.grid());
        for (int r = 1; r <= k; ++r)
            K.vfma_scaled(acc.size(), static_cast<double>(binom(k, r)), a[r].data(),
                          g[k - r].data(), acc.data());
        for (std::size_t i = 0; i < acc.size(); ++i) g[k][i] = -g[0][i] * acc[i];
    }
    return g;
}

Jet jet_dtan(const Space& s, const Jet& a, int dir, int order) {
    Jet c = jet_zero(s, order);
    for (int k = 0; k <= order; ++k) c[k] = s.d_tan(a[k], dir);
    return c;
}

// chain rule for q(R), q'(R) jets up to order 3
Jet jet_q(const Space& s, const PressureLaw& law, const Jet& R, int order) {
    Jet c = jet_zero(s, order);
    const std::size_t n = c[0].size();
    for (std::size_t i = 0; i < n; ++i) {
        const double r0 = R[0][i];
        const double q = law.q(r0), q1 = law.qp(r0), q2 = law.qpp(r0), q3 = law.qppp(r0);
        c[0][i] = q;
        if (order >= 1) c[1][i] = q1 * R[1][i];
        if (order >= 2) c[2][i] = q2 * R[1][i] * R[1][i] + q1 * R[2][i];
        if (order >= 3)
            c[3][i] = q3 * R[1][i] * R[1][i] * R[1][i] + 3.0 * q2 * R[1][i] * R[2][i] +
                      q1 * R[3][i];
    }
    return c;
}

} // namespace

InitialJet build_jet(const Space& s, const HarmonicExtension& ext, const PressureLaw& law,
                     const VectorField& v0, const ScalarField& R0, const BoundaryField& w1) {
    const Grid& g = s.grid();
    const auto& K = kernels::active();

    // preconditions
    check_finite(R0.data(), R0.size(), "R0");
    for (int i = 0; i < 3; ++i) check_finite(v0[i].data(), v0[i].size(), "v0");
    const double rmin = K.min_val(R0.size(), R0.data());
    const double rmax = K.max_val(R0.size(), R0.data());
    if (rmin < law.m0 || rmax > law.M0)
        throw InitDataError("initial density violates m0 <= R0 <= M0: range [" +
                            std::to_string(rmin) + ", " + std::to_string(rmax) + "]");
    {
        // kinematic compatibility at t = 0 (w0 = 0, so b_3i v_i = v_3 on Gamma1)
        BoundaryField mism = s.trace(v0[2], Boundary::Top);
        K.axpy(mism.size(), -1.0, w1.data(), mism.data());
        double vn = 0.0;
        for (int i = 0; i < 3; ++i) vn += s.l2_sq(v0[i]);
        const double tol = 1e-10 * (1.0 + std::sqrt(vn));
        const double mn = std::sqrt(s.l2_sq(mism));
        if (mn > tol)
            throw InitDataError("incompatible initial data: ||w1 - b_{3i} v0_i||_L2 = " +
                                std::to_string(mn));
    }

    InitialJet jet;
    jet.w_jet.assign(5, BoundaryField(g, Boundary::Top));
    jet.w_jet[1] = w1;
    jet.v_jet.assign(4, VectorField(g));
    jet.R_jet.assign(4, ScalarField(g));
    jet.v_jet[0] = v0;
    jet.R_jet[0] = R0;

    // psi jets (psijet[k] = d_t^k psi(0)) and their vertical derivatives
    std::vector<ScalarField> psijet(5, ScalarField(g)), d3psijet(5, ScalarField(g));
    {
        BoundaryField one(g, Boundary::Top);
        one.fill(1.0);
        ext.extend(one, &psijet[0], &d3psijet[0]); // w0 = 0: psi(0) = x3
        ext.extend(w1, &psijet[1], &d3psijet[1]);
    }
    jet.psi0 = psijet[0];
    jet.psi_t0 = psijet[1];

    auto lift_bjet = [&](int uptok) {
        // jets of v components, R, and geometry entries up to order uptok
        Jet v1(uptok + 1, ScalarField(g)), v2 = v1, v3 = v1, R = v1;
        for (int k = 0; k <= uptok; ++k) {
            v1[k] = jet.v_jet[k][0];
            v2[k] = jet.v_jet[k][1];
            v3[k] = jet.v_jet[k][2];
            R[k] = jet.R_jet[k];
        }
        return std::tuple{v1, v2, v3, R};
    };

    for (int k = 0; k <= 2; ++k) {
        // plate cascade: w_jet[k+2] = -Lap^2 w_k + Lap w_{k+1} + d_t^k q(R)|Gamma1
        {
            Jet Rj(k + 1, ScalarField(g));
            for (int r = 0; r <= k; ++r) Rj[r] = jet.R_jet[r];
            const Jet qj = jet_q(s, law, Rj, k);
            BoundaryField qtr = s.trace(qj[k], Boundary::Top);
            BoundaryField lap2(g, Boundary::Top), lap1(g, Boundary::Top);
            s.spectral().laplacian_h(jet.w_jet[k], 2, lap2);
            s.spectral().laplacian_h(jet.w_jet[k + 1], 1, lap1);
            BoundaryField wk2(g, Boundary::Top);
            K.axpy(wk2.size(), -1.0, lap2.data(), wk2.data());
            K.axpy(wk2.size(), 1.0, lap1.data(), wk2.data());
            K.axpy(wk2.size(), 1.0, qtr.data(), wk2.data());
            jet.w_jet[k + 2] = wk2;
            ext.extend(wk2, &psijet[k + 2], &d3psijet[k + 2]);
        }

        // geometry jets to order k (a row 3), psi_t jet = shifted psi jet
        Jet Jj(k + 1, ScalarField(g)), d1p(k + 1, ScalarField(g)), d2p(k + 1, ScalarField(g)),
            pt(k + 1, ScalarField(g));
        for (int r = 0; r <= k; ++r) {
            Jj[r] = d3psijet[r];
            d1p[r] = s.d_tan(psijet[r], 1);
            d2p[r] = s.d_tan(psijet[r], 2);
            pt[r] = psijet[r + 1];
        }
        const Jet invJ = jet_recip(s, Jj, k);
        Jet a31 = jet_mul(s, d1p, invJ, k);
        Jet a32 = jet_mul(s, d2p, invJ, k);
        for (int r = 0; r <= k; ++r) {
            K.scale(a31[r].size(), -1.0, a31[r].data());
            K.scale(a32[r].size(), -1.0, a32[r].data());
        }
        const Jet& a33 = invJ;

        auto [v1, v2, v3, R] = lift_bjet(k);

        // advective coefficient jets
        Jet c3 = jet_add(s, jet_mul(s, a31, v1, k), jet_mul(s, a32, v2, k), 1.0, 1.0, k);
        c3 = jet_add(s, c3, jet_mul(s, a33, v3, k), 1.0, 1.0, k);
        c3 = jet_add(s, c3, jet_mul(s, pt, a33, k), 1.0, -1.0, k);

        // div_a v jets
        Jet diva = jet_add(s, jet_dtan(s, v1, 1, k), jet_dtan(s, v2, 2, k), 1.0, 1.0, k);
        {
            Jet d3v1(k + 1, ScalarField(g)), d3v2 = d3v1, d3v3 = d3v1;
            for (int r = 0; r <= k; ++r) {
                d3v1[r] = s.d3(v1[r]);
                d3v2[r] = s.d3(v2[r]);
                d3v3[r] = s.d3(v3[r]);
            }
            diva = jet_add(s, diva, jet_mul(s, a31, d3v1, k), 1.0, 1.0, k);
            diva = jet_add(s, diva, jet_mul(s, a32, d3v2, k), 1.0, 1.0, k);
            diva = jet_add(s, diva, jet_mul(s, a33, d3v3, k), 1.0, 1.0, k);
        }

        // continuity: d_t R = -R diva - (c . grad) R
        {
            Jet d1R = jet_dtan(s, R, 1, k), d2R = jet_dtan(s, R, 2, k);
            Jet d3R(k + 1, ScalarField(g));
            for (int r = 0; r <= k; ++r) d3R[r] = s.d3(R[r]);
            Jet rhs = jet_mul(s, R, diva, k);
            rhs = jet_add(s, rhs, jet_mul(s, v1, d1R, k), 1.0, 1.0, k);
            rhs = jet_add(s, rhs, jet_mul(s, v2, d2R, k), 1.0, 1.0, k);
            rhs = jet_add(s, rhs, jet_mul(s, c3, d3R, k), 1.0, 1.0, k);
            jet.R_jet[k + 1] = rhs[k];
            K.scale(jet.R_jet[k + 1].size(), -1.0, jet.R_jet[k + 1].data());
        }

        // momentum: d_t v_i = -(c . grad) v_i - (1/R) (grad_a q)_i
        {
            const Jet qj = jet_q(s, law, R, k);
            Jet d1q = jet_dtan(s, qj, 1, k), d2q = jet_dtan(s, qj, 2, k);
            Jet d3q(k + 1, ScalarField(g));
            for (int r = 0; r <= k; ++r) d3q[r] = s.d3(qj[r]);
            const Jet invR = jet_recip(s, R, k);
            const Jet* vcomp[3] = {&v1, &v2, &v3};
            for (int i = 0; i < 3; ++i) {
                const Jet& vi = *vcomp[i];
                Jet d1v = jet_dtan(s, vi, 1, k), d2v = jet_dtan(s, vi, 2, k);
                Jet d3v(k + 1, ScalarField(g));
                for (int r = 0; r <= k; ++r) d3v[r] = s.d3(vi[r]);
                Jet rhs = jet_mul(s, v1, d1v, k);
                rhs = jet_add(s, rhs, jet_mul(s, v2, d2v, k), 1.0, 1.0, k);
                rhs = jet_add(s, rhs, jet_mul(s, c3, d3v, k), 1.0, 1.0, k);
                Jet gq;
                if (i == 0)
                    gq = jet_add(s, d1q, jet_mul(s, a31, d3q, k), 1.0, 1.0, k);
                else if (i == 1)
                    gq = jet_add(s, d2q, jet_mul(s, a32, d3q, k), 1.0, 1.0, k);
                else
                    gq = jet_mul(s, a33, d3q, k);
                rhs = jet_add(s, rhs, jet_mul(s, invR, gq, k), 1.0, 1.0, k);
                jet.v_jet[k + 1][i] = rhs[k];
                K.scale(jet.v_jet[k + 1][i].size(), -1.0, jet.v_jet[k + 1][i].data());
            }
        }
    }
    return jet;
}

double total_energy_E0(const Space& s, const InitialJet& jet) {
    double acc = 0.0;
    for (int j = 0; j <= 3; ++j) {
        double vn = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double nn = s.sobolev(jet.v_jet[j][i], 3.0 - j);
            vn += nn * nn;
        }
        acc += vn;
        const double rn = s.sobolev(jet.R_jet[j], 3.0 - j);
        acc += rn * rn;
    }
    for (int j = 0; j <= 4; ++j) {
        const double sj = 8.0 - 2.0 * j;
        if (j == 0) {
            // w_jet[0] = 0 by normalization; its H^8 contribution vanishes
            if (s.max_abs(jet.w_jet[0]) != 0.0)
                throw InitDataError("w(0) must vanish (normalized initial plate)");
            continue;
        }
        const double wn = s.sobolev(jet.w_jet[j], sj);
        acc += wn * wn;
    }
    const BoundaryField r0tr = s.trace(jet.R_jet[0], Boundary::Top);
    const double r0n = s.sobolev(r0tr, 4.0);
    acc += r0n * r0n;
    const double rtn = Rt0_trace_H2(s, jet);
    acc += rtn * rtn;
    return acc;
}

double Rt0_trace_H2(const Space& s, const InitialJet& jet) {
    const BoundaryField tr = s.trace(jet.R_jet[1], Boundary::Top);
    return s.sobolev(tr, 2.0);
}

InitialData make_initial_data(const Space& s, const std::string& family, double amplitude,
                              const PressureLaw& law) {
    const Grid& g = s.grid();
    InitialData d{VectorField(g), ScalarField(g), BoundaryField(g, Boundary::Top)};
    d.R0.fill(law.Rbar);

    auto fill = [&](auto&& fv1, auto&& fv2, auto&& fv3, auto&& fR) {
        for (int i3 = 0; i3 < g.n3(); ++i3)
            for (int i2 = 0; i2 < g.n2(); ++i2)
                for (int i1 = 0; i1 < g.n1(); ++i1) {
                    const std::size_t at = g.idx(i3, i2, i1);
                    const double x1 = g.x1(i1), x2 = g.x2(i2), x3 = g.x3(i3);
                    d.v0[0][at] = fv1(x1, x2, x3);
                    d.v0[1][at] = fv2(x1, x2, x3);
                    d.v0[2][at] = fv3(x1, x2, x3);
                    d.R0[at] = fR(x1, x2, x3);
                }
    };
    const double A = amplitude;
    const double Rb = law.Rbar;
    auto zero = [](double, double, double) { return 0.0; };

    if (family == "steady") {
        fill(zero, zero, zero, [&](double, double, double) { return Rb; });
    } else if (family == "density") {
        fill(zero, zero, zero,
             [&](double x1, double, double) { return Rb + A * std::cos(x1); });
    } else if (family == "density2d") {
        fill(zero, zero, zero, [&](double x1, double x2, double) {
            return Rb + A * std::cos(x1) * std::cos(x2);
        });
    } else if (family == "shear") {
        fill([&](double, double x2, double) { return A * std::sin(x2); }, zero, zero,
             [&](double, double, double) { return Rb; });
    } else if (family == "updraft") {
        fill(zero, zero,
             [&](double x1, double, double x3) {
                 return A * std::sin(Grid::pi() * x3) * std::cos(x1);
             },
             [&](double, double, double) { return Rb; });
    } else if (family == "bump") {
        // corner-compatible data: every field and its vertical derivative
        // vanish at both walls, so the formal jet cascade matches a smooth
        // solution through second order
        auto mu = [](double x3) {
            const double sn = std::sin(Grid::pi() * x3);
            return sn * sn;
        };
        fill([&](double, double x2, double x3) { return A * std::sin(x2) * mu(x3); },
             [&](double x1, double, double x3) { return A * std::sin(x1) * mu(x3); }, zero,
             [&](double x1, double x2, double x3) {
                 return Rb + A * mu(x3) * (std::cos(x1) + 0.5 * std::cos(x2));
             });
    } else if (family == "mixed") {
        fill([&](double, double x2, double) { return A * std::sin(x2); },
             [&](double x1, double, double) { return 0.5 * A * std::sin(x1); },
             [&](double x1, double, double x3) {
                 return A * std::sin(Grid::pi() * x3) * std::cos(x1);
             },
             [&](double x1, double x2, double) {
                 return Rb + A * (std::cos(x1) + 0.5 * std::cos(x2));
             });
    } else if (family.rfind("snapshot:", 0) == 0) {
        const Snapshot snap = read_snapshot(family.substr(9));
        if (snap.n1 != g.n1() || snap.n2 != g.n2() || snap.n3 != g.n3())
            throw InitDataError("snapshot grid does not match the configured grid");
        auto copy_field = [&](const std::string& name, double* dst, std::size_t count) {
            const auto& v = snap.field(name);
            if (v.size() != count) throw InitDataError("snapshot field size mismatch: " + name);
            std::copy(v.begin(), v.end(), dst);
        };
        copy_field("v1", d.v0[0].data(), g.size());
        copy_field("v2", d.v0[1].data(), g.size());
        copy_field("v3", d.v0[2].data(), g.size());
        copy_field("R", d.R0.data(), g.size());
        if (snap.has("w_t")) copy_field("w_t", d.w1.data(), g.plane_size());
        return d;
    } else {
        throw InitDataError("unknown initial-data family: " + family);
    }

    // w1 from the kinematic condition at t = 0 (w0 = 0)
    BoundaryField tr(g, Boundary::Top);
    const std::size_t top = g.idx(g.n3() - 1, 0, 0);
    for (std::size_t p = 0; p < g.plane_size(); ++p) tr[p] = d.v0[2][top + p];
    d.w1 = tr;
    return d;
}

State state_from_initial(const Space& s, const HarmonicExtension& ext, const InitialData& d) {
    State st(s);
    st.t = 0.0;
    st.v = d.v0;
    st.R = d.R0;
    st.w.fill(0.0);
    st.w_t = d.w1;
    st.refresh_maps(s, ext);
    return st;
}

} // namespace ape

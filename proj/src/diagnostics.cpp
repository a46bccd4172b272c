#include "ape/diagnostics.hpp"

#include "ape/kernels.hpp"
#include "ape/rhs.hpp"

#include <cmath>

namespace ape {

namespace {

ScalarField log_R(const Space& s, const State& st) {
    ScalarField g(s.grid());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::log(st.R[i]);
    return g;
}

// advective coefficient vector c = (v1, v2, a_{3i} v_i - psi_t a_33)
std::array<const ScalarField*, 2> c_tan(const State& st) { return {&st.v[0], &st.v[1]}; }

} // namespace

ScalarField apply_Q(const Space& s, const State& st, const ScalarField& f,
                    const ScalarField& f_t) {
    const auto& K = kernels::active();
    ScalarField out = f_t;
    ScalarField d1 = s.d_tan(f, 1), d2 = s.d_tan(f, 2), d3 = s.d3(f);
    const ScalarField c3 = advective_c3(s, st);
    K.vfma(out.size(), st.v[0].data(), d1.data(), out.data());
    K.vfma(out.size(), st.v[1].data(), d2.data(), out.data());
    K.vfma(out.size(), c3.data(), d3.data(), out.data());
    return out;
}

std::pair<double, double> tangency_residual(const Space& s, const State& st) {
    const Grid& g = s.grid();
    const AleMaps& m = st.maps;
    double g0 = 0.0, g1 = 0.0;
    const std::size_t ps = g.plane_size();
    const std::size_t top = g.idx(g.n3() - 1, 0, 0);
    for (std::size_t p = 0; p < ps; ++p) {
        // vtil_i a_3i = a31 v1 + a32 v2 + a33 (v3 - psi_t)
        const double bot =
            m.a31[p] * st.v[0][p] + m.a32[p] * st.v[1][p] + m.a33[p] * (st.v[2][p] - m.psi_t[p]);
        g0 = std::max(g0, std::fabs(bot));
        const std::size_t at = top + p;
        const double tp = m.a31[at] * st.v[0][at] + m.a32[at] * st.v[1][at] +
                          m.a33[at] * (st.v[2][at] - m.psi_t[at]);
        g1 = std::max(g1, std::fabs(tp));
    }
    return {g0, g1};
}

BoundaryField plate_acceleration(const Space& s, const PressureLaw& law, const State& st) {
    const Grid& g = s.grid();
    BoundaryField qtr(g, Boundary::Top);
    const int top = g.n3() - 1;
    for (std::size_t p = 0; p < g.plane_size(); ++p) qtr[p] = law.q(st.R[g.idx(top, 0, 0) + p]);
    return rhs_plate(s, st.w, st.w_t, qtr);
}

BoundaryField h_boundary(const Space& s, const PressureLaw& law, const State& st) {
    const Grid& g = s.grid();
    const AleMaps& m = st.maps;
    const std::size_t top = g.idx(g.n3() - 1, 0, 0);
    const BoundaryField wtt = plate_acceleration(s, law, st);

    // tangential derivatives of b_{3i} = (-d1psi, -d2psi, 1) and of w_t
    ScalarField d11 = s.d_tan(m.d1psi, 1), d12 = s.d_tan(m.d1psi, 2);
    ScalarField d21 = s.d_tan(m.d2psi, 1), d22 = s.d_tan(m.d2psi, 2);
    BoundaryField dw1 = s.d_tan(st.w_t, 1), dw2 = s.d_tan(st.w_t, 2);

    BoundaryField h(g, Boundary::Top);
    for (std::size_t p = 0; p < g.plane_size(); ++p) {
        const std::size_t at = top + p;
        const double v1 = st.v[0][at], v2 = st.v[1][at];
        // d_t b_{3i} v_i
        double acc = -m.d1psi_t[at] * v1 - m.d2psi_t[at] * v2;
        acc -= wtt[p];
        // sum_j d_j b_{3i} v_j v_i  (a_{jl} v_l = v_j for j = 1,2)
        acc += v1 * (-d11[at] * v1 - d21[at] * v2);
        acc += v2 * (-d12[at] * v1 - d22[at] * v2);
        // - sum_j d_j w_t v_j
        acc -= dw1[p] * v1 + dw2[p] * v2;
        h[p] = acc;
    }
    return h;
}

ScalarField h_extension(const Space& s, const HarmonicExtension& ext, const PressureLaw& law,
                        const State& st) {
    const Grid& g = s.grid();
    const AleMaps& m = st.maps;
    const BoundaryField wtt = plate_acceleration(s, law, st);
    const ScalarField psi_tt = ext.extend(wtt);

    ScalarField d11 = s.d_tan(m.d1psi, 1), d12 = s.d_tan(m.d1psi, 2);
    ScalarField d21 = s.d_tan(m.d2psi, 1), d22 = s.d_tan(m.d2psi, 2);

    ScalarField h(g);
    for (std::size_t at = 0; at < g.size(); ++at) {
        const double v1 = st.v[0][at], v2 = st.v[1][at];
        double acc = -m.d1psi_t[at] * v1 - m.d2psi_t[at] * v2;
        acc -= psi_tt[at];
        acc += v1 * (-d11[at] * v1 - d21[at] * v2);
        acc += v2 * (-d12[at] * v1 - d22[at] * v2);
        acc -= m.d1psi_t[at] * v1 + m.d2psi_t[at] * v2;
        h[at] = acc;
    }
    return h;
}

ScalarField g_equation_source(const Space& s, const State& st) {
    const Grid& g = s.grid();
    const AleMaps& m = st.maps;

    // derivative tables
    ScalarField dv[3][3]; // dv[i][k] = d_k v_i
    for (int i = 0; i < 3; ++i) {
        dv[i][0] = s.d_tan(st.v[i], 1);
        dv[i][1] = s.d_tan(st.v[i], 2);
        dv[i][2] = s.d3(st.v[i]);
    }
    // V_k = v_j a_{kj}: V_1 = v1, V_2 = v2, V_3 = a_{3j} v_j
    ScalarField V3(g);
    {
        const auto& K = kernels::active();
        K.vfma(g.size(), m.a31.data(), st.v[0].data(), V3.data());
        K.vfma(g.size(), m.a32.data(), st.v[1].data(), V3.data());
        K.vfma(g.size(), m.a33.data(), st.v[2].data(), V3.data());
    }
    ScalarField dV3[3] = {s.d_tan(V3, 1), s.d_tan(V3, 2), s.d3(V3)};
    // W = psi_t a_33
    ScalarField W = s.mul(m.psi_t, m.a33);
    ScalarField dW[3] = {s.d_tan(W, 1), s.d_tan(W, 2), s.d3(W)};
    // derivatives of the nontrivial a row
    ScalarField da3[3][3]; // da3[i][k] = d_k a_{3,i+1}
    const ScalarField* arow[3] = {&m.a31, &m.a32, &m.a33};
    for (int i = 0; i < 3; ++i) {
        da3[i][0] = s.d_tan(*arow[i], 1);
        da3[i][1] = s.d_tan(*arow[i], 2);
        da3[i][2] = s.d3(*arow[i]);
    }

    // F collects the commutator of a_{mi} d_m with the transport coefficients,
    //   F = -d_t a_{mi} d_m v_i + a_{mi} d_m(V_k) d_k v_i - V_k d_k a_{mi} d_m v_i
    //       - a_{mi} d_m(W) d_3 v_i + W d_3 a_{mi} d_m v_i
    // (V_k = v_j a_{kj}, W = psi_t a_33), so that Q H + div_a(f grad_a g) = -F.
    ScalarField F(g);
    for (std::size_t at = 0; at < g.size(); ++at) {
        double acc = 0.0;
        const double W_ = W[at];
        for (int i = 0; i < 3; ++i) {
            // time derivative of a hits only its third row
            acc -= m.adot(2, i, at) * dv[i][2][at];
            for (int mI = 0; mI < 3; ++mI) {
                const double ami = m.a(mI, i, at);
                if (ami != 0.0) {
                    double dmV1 = (mI < 2) ? dv[0][mI][at] : dv[0][2][at];
                    double dmV2 = (mI < 2) ? dv[1][mI][at] : dv[1][2][at];
                    const double dmV3 = dV3[mI][at];
                    acc += ami * (dmV1 * dv[i][0][at] + dmV2 * dv[i][1][at] + dmV3 * dv[i][2][at]);
                    acc -= ami * dW[mI][at] * dv[i][2][at];
                }
                // d_k a_{mi} nonzero only for m = 3
                if (mI == 2) {
                    const double Vk[3] = {st.v[0][at], st.v[1][at], V3[at]};
                    double dka = 0.0;
                    for (int k = 0; k < 3; ++k) dka += da3[i][k][at] * Vk[k];
                    acc -= dka * dv[i][2][at];
                    acc += da3[i][2][at] * W_ * dv[i][2][at];
                }
            }
        }
        F[at] = acc;
    }
    return F;
}

GResidual g_equation_residual(const Space& s, const HarmonicExtension& ext,
                              const PressureLaw& law, const JetWindow& win) {
    if (!win.full()) throw GridError("window underfilled");
    const State& st = win.center();
    const Grid& g = s.grid();
    const AleMaps& m = st.maps;
    const auto& K = kernels::active();

    auto g_of = [&](const State& w) { return log_R(s, w); };
    const ScalarField gc = log_R(s, st);
    const ScalarField g_t = win.ddt_field(s, 1, g_of);
    const ScalarField g_tt = win.ddt_field(s, 2, g_of);

    // advective coefficient per sample and its time derivative
    auto c3_of = [&](const State& w) { return advective_c3(s, w); };
    const ScalarField c3 = advective_c3(s, st);
    const ScalarField c3_t = win.ddt_field(s, 1, c3_of);
    auto v1_of = [&](const State& w) { return w.v[0]; };
    auto v2_of = [&](const State& w) { return w.v[1]; };
    const ScalarField c1_t = win.ddt_field(s, 1, v1_of);
    const ScalarField c2_t = win.ddt_field(s, 1, v2_of);

    // spatial derivatives of g and g_t at the center
    ScalarField d1g = s.d_tan(gc, 1), d2g = s.d_tan(gc, 2), d3g = s.d3(gc);
    ScalarField d1gt = s.d_tan(g_t, 1), d2gt = s.d_tan(g_t, 2), d3gt = s.d3(g_t);
    // second derivatives
    ScalarField g11 = s.d_tan(gc, 1, 2), g22 = s.d_tan(gc, 2, 2), g33 = s.d3(gc, 2);
    ScalarField g12 = s.d_tan(d1g, 2), g13 = s.d3(d1g), g23 = s.d3(d2g);

    // spatial derivatives of the advective coefficients
    ScalarField dc[3][3];
    const ScalarField* cf[3] = {&st.v[0], &st.v[1], &c3};
    for (int k = 0; k < 3; ++k) {
        dc[k][0] = s.d_tan(*cf[k], 1);
        dc[k][1] = s.d_tan(*cf[k], 2);
        dc[k][2] = s.d3(*cf[k]);
    }

    // f = q'(R)
    ScalarField f(g);
    for (std::size_t i = 0; i < g.size(); ++i) f[i] = law.qp(st.R[i]);

    // u_i = f (grad_a g)_i, then div_a u
    ScalarField u1(g), u2(g), u3(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double ga1 = d1g[i] + m.a31[i] * d3g[i];
        const double ga2 = d2g[i] + m.a32[i] * d3g[i];
        const double ga3 = m.a33[i] * d3g[i];
        u1[i] = f[i] * ga1;
        u2[i] = f[i] * ga2;
        u3[i] = f[i] * ga3;
    }
    ScalarField d1u1 = s.d_tan(u1, 1), d2u2 = s.d_tan(u2, 2);
    ScalarField d3u1 = s.d3(u1), d3u2 = s.d3(u2), d3u3 = s.d3(u3);

    const ScalarField F = g_equation_source(s, st);

    GResidual out{ScalarField(g), BoundaryField(g, Boundary::Top),
                  BoundaryField(g, Boundary::Bottom), 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double c[3] = {st.v[0][i], st.v[1][i], c3[i]};
        const double ct[3] = {c1_t[i], c2_t[i], c3_t[i]};
        const double dg[3] = {d1g[i], d2g[i], d3g[i]};
        const double dgt[3] = {d1gt[i], d2gt[i], d3gt[i]};
        double q2 = g_tt[i];
        for (int k = 0; k < 3; ++k) q2 += 2.0 * c[k] * dgt[k] + ct[k] * dg[k];
        // c_k d_k(c_m) d_m g + c_k c_m d_km g
        double adv2 = 0.0;
        const double hess[3][3] = {{g11[i], g12[i], g13[i]},
                                   {g12[i], g22[i], g23[i]},
                                   {g13[i], g23[i], g33[i]}};
        for (int k = 0; k < 3; ++k)
            for (int mm = 0; mm < 3; ++mm)
                adv2 += c[k] * dc[mm][k][i] * dg[mm] + c[k] * c[mm] * hess[k][mm];
        q2 += adv2;
        const double divu = d1u1[i] + m.a31[i] * d3u1[i] + d2u2[i] + m.a32[i] * d3u2[i] +
                            m.a33[i] * d3u3[i];
        out.interior[i] = q2 - divu - F[i];
    }

    // Gamma1: f grad_a g . nu - h  with nu = (b31, b32, 1)
    const BoundaryField h = h_boundary(s, law, st);
    const std::size_t top = g.idx(g.n3() - 1, 0, 0);
    for (std::size_t p = 0; p < g.plane_size(); ++p) {
        const std::size_t at = top + p;
        const double ga1 = d1g[at] + m.a31[at] * d3g[at];
        const double ga2 = d2g[at] + m.a32[at] * d3g[at];
        const double ga3 = m.a33[at] * d3g[at];
        const double flux =
            f[at] * (-m.d1psi[at] * ga1 - m.d2psi[at] * ga2 + ga3);
        out.gamma1[p] = flux - h[p];
    }
    for (std::size_t p = 0; p < g.plane_size(); ++p) out.gamma0[p] = d3g[p];

    out.interior_l2 = std::sqrt(s.l2_sq(out.interior));
    out.gamma1_l2 = std::sqrt(s.l2_sq(out.gamma1));
    out.gamma0_l2 = std::sqrt(s.l2_sq(out.gamma0));
    (void)K;
    return out;
}

VectorField variable_curl(const Space& s, const State& st) {
    const Grid& g = s.grid();
    const AleMaps& m = st.maps;
    ScalarField dv[3][3];
    for (int i = 0; i < 3; ++i) {
        dv[i][0] = s.d_tan(st.v[i], 1);
        dv[i][1] = s.d_tan(st.v[i], 2);
        dv[i][2] = s.d3(st.v[i]);
    }
    // (grad_a)_j v_k = a_{mj} d_m v_k = d_j v_k + a_{3j} d_3 v_k for j=1,2;
    //                  a_33 d_3 v_k for j=3
    auto grad_a = [&](int j, int k, std::size_t at) {
        if (j < 2) return dv[k][j][at] + m.a(2, j, at) * dv[k][2][at];
        return m.a33[at] * dv[k][2][at];
    };
    VectorField zeta(g);
    for (std::size_t at = 0; at < g.size(); ++at) {
        zeta[0][at] = grad_a(1, 2, at) - grad_a(2, 1, at);
        zeta[1][at] = grad_a(2, 0, at) - grad_a(0, 2, at);
        zeta[2][at] = grad_a(0, 1, at) - grad_a(1, 0, at);
    }
    return zeta;
}

VorticityResidual vorticity_residual(const Space& s, const JetWindow& win) {
    if (!win.full()) throw GridError("window underfilled");
    const State& st = win.center();
    const Grid& g = s.grid();
    const AleMaps& m = st.maps;

    VorticityResidual out{VectorField(g), VectorField(g), 0.0};
    out.zeta = variable_curl(s, st);
    const ScalarField c3 = advective_c3(s, st);

    // div_a v at the center
    ScalarField diva(g);
    {
        ScalarField d1 = s.d_tan(st.v[0], 1), d2 = s.d_tan(st.v[1], 2);
        ScalarField d31 = s.d3(st.v[0]), d32 = s.d3(st.v[1]), d33 = s.d3(st.v[2]);
        for (std::size_t i = 0; i < g.size(); ++i)
            diva[i] = d1[i] + m.a31[i] * d31[i] + d2[i] + m.a32[i] * d32[i] + m.a33[i] * d33[i];
    }
    ScalarField dvk[3][3];
    for (int i = 0; i < 3; ++i) {
        dvk[i][0] = s.d_tan(st.v[i], 1);
        dvk[i][1] = s.d_tan(st.v[i], 2);
        dvk[i][2] = s.d3(st.v[i]);
    }

    double acc = 0.0;
    for (int i = 0; i < 3; ++i) {
        const int comp = i;
        auto zi_of = [&](const State& w) {
            VectorField z = variable_curl(s, w);
            return z[comp];
        };
        const ScalarField zt = win.ddt_field(s, 1, zi_of);
        ScalarField d1z = s.d_tan(out.zeta[i], 1), d2z = s.d_tan(out.zeta[i], 2),
                    d3z = s.d3(out.zeta[i]);
        for (std::size_t at = 0; at < g.size(); ++at) {
            // Z_k = zeta_l a_{kl}
            const double Z1 = out.zeta[0][at];
            const double Z2 = out.zeta[1][at];
            const double Z3 = m.a31[at] * out.zeta[0][at] + m.a32[at] * out.zeta[1][at] +
                              m.a33[at] * out.zeta[2][at];
            double r = zt[at] + st.v[0][at] * d1z[at] + st.v[1][at] * d2z[at] + c3[at] * d3z[at];
            r -= Z1 * dvk[i][0][at] + Z2 * dvk[i][1][at] + Z3 * dvk[i][2][at];
            r += diva[at] * out.zeta[i][at];
            out.transport[i][at] = r;
        }
        acc += s.l2_sq(out.transport[i]);
    }
    out.residual_l2 = std::sqrt(acc);
    return out;
}

ScalarField divergence_identity_residual(const Space& s, const JetWindow& win) {
    if (!win.full()) throw GridError("window underfilled");
    const State& st = win.center();
    const Grid& g = s.grid();
    const AleMaps& m = st.maps;

    auto R_of = [&](const State& w) { return w.R; };
    const ScalarField R_t = win.ddt_field(s, 1, R_of);
    ScalarField d1R = s.d_tan(st.R, 1), d2R = s.d_tan(st.R, 2), d3R = s.d3(st.R);
    ScalarField d1 = s.d_tan(st.v[0], 1), d2 = s.d_tan(st.v[1], 2);
    ScalarField d31 = s.d3(st.v[0]), d32 = s.d3(st.v[1]), d33 = s.d3(st.v[2]);
    const ScalarField c3 = advective_c3(s, st);

    ScalarField res(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double diva =
            d1[i] + m.a31[i] * d31[i] + d2[i] + m.a32[i] * d32[i] + m.a33[i] * d33[i];
        const double adv = st.v[0][i] * d1R[i] + st.v[1][i] * d2R[i] + c3[i] * d3R[i];
        res[i] = diva + (R_t[i] + adv) / st.R[i];
    }
    return res;
}

double a_minus_identity_h2(const Space& s, const State& st) {
    const Grid& g = s.grid();
    ScalarField e33(g);
    for (std::size_t i = 0; i < g.size(); ++i) e33[i] = st.maps.a33[i] - 1.0;
    const double n31 = s.sobolev(st.maps.a31, 2.0);
    const double n32 = s.sobolev(st.maps.a32, 2.0);
    const double n33 = s.sobolev(e33, 2.0);
    return std::sqrt(n31 * n31 + n32 * n32 + n33 * n33);
}

DivCurlResult divcurl_reconstruct(const Space& s, const State& st, bool check_monitor,
                                  double aI_bound) {
    const Grid& g = s.grid();
    const Spectral& sp = s.spectral();
    const AleMaps& m = st.maps;
    const int n3 = g.n3();

    DivCurlResult out{VectorField(g), 0.0, 0.0, 0.0};
    out.a_minus_I_h2 = a_minus_identity_h2(s, st);
    if (check_monitor && out.a_minus_I_h2 > aI_bound)
        throw GridError("div-curl reconstruction void: coefficient matrix too far from identity");

    // data: d = div_a v, c = curl_a v, normal traces, tangential means
    ScalarField d(g);
    {
        ScalarField d1 = s.d_tan(st.v[0], 1), d2 = s.d_tan(st.v[1], 2);
        ScalarField d31 = s.d3(st.v[0]), d32 = s.d3(st.v[1]), d33 = s.d3(st.v[2]);
        for (std::size_t i = 0; i < g.size(); ++i)
            d[i] = d1[i] + m.a31[i] * d31[i] + d2[i] + m.a32[i] * d32[i] + m.a33[i] * d33[i];
    }
    const VectorField c = variable_curl(s, st);
    const double vol = 4.0 * Grid::pi() * Grid::pi();
    const double mean1 = s.integral(st.v[0]) / vol; // averaged vertical profile constants
    const double mean2 = s.integral(st.v[1]) / vol;

    // spectral profiles of the data
    const std::size_t nm = sp.cplane_size();
    std::vector<std::complex<double>> dhat(nm * n3), c1hat(nm * n3), c2hat(nm * n3),
        c3hat(nm * n3);
    std::vector<std::complex<double>> plane(nm);
    for (int i3 = 0; i3 < n3; ++i3) {
        sp.forward_plane(d.data() + g.idx(i3, 0, 0), plane.data());
        for (std::size_t mm = 0; mm < nm; ++mm) dhat[mm * n3 + i3] = plane[mm];
        sp.forward_plane(c[0].data() + g.idx(i3, 0, 0), plane.data());
        for (std::size_t mm = 0; mm < nm; ++mm) c1hat[mm * n3 + i3] = plane[mm];
        sp.forward_plane(c[1].data() + g.idx(i3, 0, 0), plane.data());
        for (std::size_t mm = 0; mm < nm; ++mm) c2hat[mm * n3 + i3] = plane[mm];
        sp.forward_plane(c[2].data() + g.idx(i3, 0, 0), plane.data());
        for (std::size_t mm = 0; mm < nm; ++mm) c3hat[mm * n3 + i3] = plane[mm];
    }
    std::vector<std::complex<double>> tr0(nm), tr1(nm);
    {
        BoundaryField b0 = s.trace(st.v[2], Boundary::Bottom);
        BoundaryField b1 = s.trace(st.v[2], Boundary::Top);
        sp.forward_plane(b0.data(), tr0.data());
        sp.forward_plane(b1.data(), tr1.data());
    }

    // per-mode solves
    std::vector<std::complex<double>> v1hat(nm * n3), v2hat(nm * n3), v3hat(nm * n3);
    std::vector<std::complex<double>> prof(n3), rhs(n3), dprof(n3), ddrof(n3);
    std::vector<double> re(n3), im(n3), dre, dim;
    const double np = static_cast<double>(g.n1()) * g.n2();
    for (int i2 = 0; i2 < g.n2(); ++i2) {
        for (int ic = 0; ic < sp.nc1(); ++ic) {
            const std::size_t mm = static_cast<std::size_t>(i2) * sp.nc1() + ic;
            const double k1 = sp.k1_of(ic), k2 = sp.k2_of(i2);
            const double k2sum = k1 * k1 + k2 * k2;
            if (k2sum == 0.0) {
                // zero mode: v3' = dbar with v3(0) given; v1' = c2bar, v2' = -c1bar
                // cumulative integrals via the first-derivative stencil inverse:
                // integrate with 4th-order local rule
                auto cumint = [&](const std::vector<std::complex<double>>& f,
                                  std::complex<double> f0,
                                  std::vector<std::complex<double>>& out_) {
                    // local cubic (4-point Newton-Cotes marching)
                    out_.assign(n3, f0);
                    const double h = g.h3();
                    for (int j = 1; j < n3; ++j) {
                        int s0 = std::clamp(j - 2, 0, n3 - 4);
                        // integral of the cubic through (s0..s0+3) over [j-1, j]
                        // via Lagrange integration weights
                        double w[4] = {0, 0, 0, 0};
                        const double a0 = (j - 1) * h, b0 = j * h;
                        for (int q = 0; q < 4; ++q) {
                            // integrate L_q over [a0,b0] with 4-pt Gauss-Legendre
                            static const double gx[4] = {-0.8611363115940526, -0.3399810435848563,
                                                         0.3399810435848563, 0.8611363115940526};
                            static const double gw[4] = {0.3478548451374538, 0.6521451548625461,
                                                         0.6521451548625461, 0.3478548451374538};
                            double acc = 0.0;
                            for (int gq = 0; gq < 4; ++gq) {
                                const double x = 0.5 * (a0 + b0) + 0.5 * (b0 - a0) * gx[gq];
                                double L = 1.0;
                                for (int r = 0; r < 4; ++r)
                                    if (r != q)
                                        L *= (x - (s0 + r) * h) / ((q - r) * h);
                                acc += gw[gq] * L;
                            }
                            w[q] = acc * 0.5 * (b0 - a0);
                        }
                        out_[j] = out_[j - 1];
                        for (int q = 0; q < 4; ++q) out_[j] += w[q] * f[s0 + q];
                    }
                };
                std::vector<std::complex<double>> dbar(n3), c1b(n3), c2b(n3);
                for (int i3 = 0; i3 < n3; ++i3) {
                    dbar[i3] = dhat[mm * n3 + i3];
                    c1b[i3] = c1hat[mm * n3 + i3];
                    c2b[i3] = c2hat[mm * n3 + i3];
                }
                // v1bar' = c2bar, v2bar' = -c1bar, v3bar' = dbar; the free
                // constants of v1bar, v2bar come from the prescribed means
                std::vector<std::complex<double>> v3m, v1m, v2m;
                cumint(dbar, tr0[mm], v3m);
                cumint(c2b, 0.0, v1m);
                cumint(c1b, 0.0, v2m);
                std::complex<double> av1 = 0.0, av2 = 0.0;
                for (int i3 = 0; i3 < n3; ++i3) {
                    av1 += g.vweights()[i3] * v1m[i3];
                    av2 += g.vweights()[i3] * (-v2m[i3]);
                }
                const std::complex<double> c1c = mean1 * np - av1;
                const std::complex<double> c2c = mean2 * np - av2;
                for (int i3 = 0; i3 < n3; ++i3) {
                    v1hat[mm * n3 + i3] = v1m[i3] + c1c;
                    v2hat[mm * n3 + i3] = -v2m[i3] + c2c;
                    v3hat[mm * n3 + i3] = v3m[i3];
                }
                continue;
            }
            // v3'' - |k|^2 v3 = d' - (i k1 c2 - i k2 c1), Dirichlet traces
            for (int i3 = 0; i3 < n3; ++i3) {
                re[i3] = dhat[mm * n3 + i3].real();
                im[i3] = dhat[mm * n3 + i3].imag();
            }
            s.vderiv().apply_profile(re, 1, dre);
            s.vderiv().apply_profile(im, 1, dim);
            for (int i3 = 0; i3 < n3; ++i3) {
                const std::complex<double> curlcurl3 =
                    std::complex<double>(0, k1) * c2hat[mm * n3 + i3] -
                    std::complex<double>(0, k2) * c1hat[mm * n3 + i3];
                rhs[i3] = std::complex<double>(dre[i3], dim[i3]) - curlcurl3;
            }
            numerov_solve<std::complex<double>>(n3, g.h3(), k2sum, rhs.data(), tr0[mm], tr1[mm],
                                                prof.data());
            // v3' profile
            for (int i3 = 0; i3 < n3; ++i3) {
                re[i3] = prof[i3].real();
                im[i3] = prof[i3].imag();
            }
            s.vderiv().apply_profile(re, 1, dre);
            s.vderiv().apply_profile(im, 1, dim);
            for (int i3 = 0; i3 < n3; ++i3) {
                const std::complex<double> A =
                    dhat[mm * n3 + i3] - std::complex<double>(dre[i3], dim[i3]);
                const std::complex<double> B = c3hat[mm * n3 + i3];
                const std::complex<double> ik1(0, k1), ik2(0, k2);
                v1hat[mm * n3 + i3] = (ik1 * A - ik2 * B) / (-k2sum);
                v2hat[mm * n3 + i3] = (ik2 * A + ik1 * B) / (-k2sum);
                v3hat[mm * n3 + i3] = prof[i3];
            }
        }
    }

    // back to physical space
    std::vector<std::complex<double>> pl(nm);
    for (int i3 = 0; i3 < n3; ++i3) {
        for (std::size_t mm = 0; mm < nm; ++mm) pl[mm] = v1hat[mm * n3 + i3];
        sp.inverse_plane(pl.data(), out.vhat[0].data() + g.idx(i3, 0, 0));
        for (std::size_t mm = 0; mm < nm; ++mm) pl[mm] = v2hat[mm * n3 + i3];
        sp.inverse_plane(pl.data(), out.vhat[1].data() + g.idx(i3, 0, 0));
        for (std::size_t mm = 0; mm < nm; ++mm) pl[mm] = v3hat[mm * n3 + i3];
        sp.inverse_plane(pl.data(), out.vhat[2].data() + g.idx(i3, 0, 0));
    }

    double e0 = 0.0, e1 = 0.0;
    for (int i = 0; i < 3; ++i) {
        ScalarField diff(g);
        for (std::size_t at = 0; at < g.size(); ++at) diff[at] = st.v[i][at] - out.vhat[i][at];
        const double l2 = s.l2_sq(diff);
        const double h1 = s.sobolev(diff, 1.0);
        e0 += l2;
        e1 += h1 * h1;
    }
    out.err_l2 = std::sqrt(e0);
    out.err_h1 = std::sqrt(e1);
    return out;
}

MonitorReport monitor(const Space& s, const PressureLaw& law, const State& st,
                      const JetWindow* win) {
    const auto& K = kernels::active();
    MonitorReport r{};
    r.J_min = K.min_val(st.maps.jac.size(), st.maps.jac.data());
    r.J_max = K.max_val(st.maps.jac.size(), st.maps.jac.data());
    r.R_min = K.min_val(st.R.size(), st.R.data());
    r.R_max = K.max_val(st.R.size(), st.R.data());
    r.qp_min = law.qp(r.R_min);
    r.qp_max = law.qp(r.R_max);
    r.a_minus_I_H2 = a_minus_identity_h2(s, st);
    r.kinematic_residual = st.kinematic_residual_l2(s);
    auto [t0, t1] = tangency_residual(s, st);
    r.tangency_g0 = t0;
    r.tangency_g1 = t1;

    if (win && win->full()) {
        // norm table: d_t^j of v and R in H^{3-j}, the plate cascade on
        // Gamma1; limited to the derivatives the window length supports
        const int jmax = std::min(3, (win->length() - 1) / 2);
        for (int j = 0; j <= jmax; ++j) {
            double vn = 0.0;
            for (int i = 0; i < 3; ++i) {
                const int comp = i;
                auto vi_of = [&](const State& w) { return w.v[comp]; };
                const ScalarField dj =
                    (j == 0) ? st.v[i] : win->ddt_field(s, j, vi_of);
                const double nn = s.sobolev(dj, 3.0 - j);
                vn += nn * nn;
            }
            r.norms["v_t" + std::to_string(j)] = std::sqrt(vn);
            auto R_of = [&](const State& w) { return w.R; };
            const ScalarField dj = (j == 0) ? st.R : win->ddt_field(s, j, R_of);
            r.norms["R_t" + std::to_string(j)] = s.sobolev(dj, 3.0 - j);
        }
        r.norms["w_H5"] = s.sobolev(st.w, 5.0);
        r.norms["wt_H4"] = s.sobolev(st.w_t, 4.0);
        auto wtt_of = [&](const State& w) { return plate_acceleration(s, law, w); };
        const BoundaryField wtt = plate_acceleration(s, law, st);
        r.norms["wtt_H3"] = s.sobolev(wtt, 3.0);
        if (jmax >= 1) {
            const BoundaryField wttt = win->ddt_boundary(s, 1, wtt_of);
            r.norms["wttt_H2"] = s.sobolev(wttt, 2.0);
        }
        if (jmax >= 2) {
            const BoundaryField wtttt = win->ddt_boundary(s, 2, wtt_of);
            r.norms["wtttt_L2"] = s.sobolev(wtttt, 0.0);
        }
        // psi/a/b table reported through the elliptic proxies of the w-jet
        auto wt_of = [&](const State& w) { return w.w_t; };
        for (int j = 0; j <= std::min(3, jmax + 1); ++j) {
            BoundaryField dj(s.grid(), Boundary::Top);
            if (j == 0)
                dj = st.w;
            else if (j == 1)
                dj = st.w_t;
            else
                dj = win->ddt_boundary(s, j - 1, wt_of);
            r.norms["psi_proxy_t" + std::to_string(j)] = s.sobolev(dj, 5.0 - j);
        }
    }
    return r;
}

bool MonitorReport::green(const PressureLaw& law, double aI_bound) const {
    return first_violation(law, aI_bound).empty();
}

std::string MonitorReport::first_violation(const PressureLaw& law, double aI_bound) const {
    if (!(J_min >= 0.5 && J_max <= 2.0)) return "J-range";
    if (!(R_min >= law.m0 / 2.0 && R_max <= 2.0 * law.M0)) return "R-range";
    if (!(qp_min >= law.c1() && qp_max <= law.c2())) return "qprime-range";
    if (!(a_minus_I_H2 <= aI_bound)) return "a-minus-I";
    return "";
}

} // namespace ape

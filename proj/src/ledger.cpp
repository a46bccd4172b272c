#include "ape/ledger.hpp"

#include "ape/diagnostics.hpp"
#include "ape/kernels.hpp"
#include "ape/rhs.hpp"

#include <cmath>

namespace ape {

double LedgerRow::value(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return values[i];
    throw GridError("ledger has no term " + name);
}

const char* ledger_name(LedgerKind k) {
    switch (k) {
        case LedgerKind::Momentum: return "momentum";
        case LedgerKind::Plate: return "plate";
        case LedgerKind::PlateWeighted: return "plateW";
        case LedgerKind::Density: return "density";
    }
    return "?";
}

namespace {

long binom(int n, int k) {
    long r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

struct Ctx {
    const Space& s;
    const PressureLaw& law;
    const JetWindow& win;
    int m;

    const State& center() const { return win.center(); }
    int len() const { return win.length(); }

    // d_t^j of a sampled interior field at window sample `at` (or center)
    ScalarField ddtf(int j, const std::function<ScalarField(const State&)>& f,
                     int at = -1) const {
        if (j == 0) return f(at < 0 ? center() : win.at(at));
        return win.ddt_field(s, j, f, at);
    }
    BoundaryField ddtb(int j, const std::function<BoundaryField(const State&)>& f,
                       int at = -1) const {
        if (j == 0) return f(at < 0 ? center() : win.at(at));
        return win.ddt_boundary(s, j, f, at);
    }
    // Leibniz commutator  d_t^m (A B) - A d_t^m B   at the center
    ScalarField leibniz_defect(const std::function<ScalarField(const State&)>& A,
                               const std::function<ScalarField(const State&)>& B) const {
        ScalarField acc(s.grid());
        const auto& K = kernels::active();
        for (int r = 1; r <= m; ++r) {
            const ScalarField dA = ddtf(r, A);
            const ScalarField dB = ddtf(m - r, B);
            K.vfma_scaled(acc.size(), static_cast<double>(binom(m, r)), dA.data(), dB.data(),
                          acc.data());
        }
        return acc;
    }
};

ScalarField sample_q(const Space& s, const PressureLaw& law, const State& st) {
    ScalarField q(s.grid());
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = law.q(st.R[i]);
    return q;
}

LedgerRow momentum_ledger(const Ctx& cx) {
    const Space& s = cx.s;
    const Grid& g = s.grid();
    const State& st = cx.center();
    const int m = cx.m;
    const auto& K = kernels::active();
    const std::size_t n = g.size();

    auto JR_of = [&](const State& w) { return s.mul(w.maps.jac, w.R); };
    auto q_of = [&](const State& w) { return sample_q(s, cx.law, w); };

    // d_t^m v at every sample (for the energy trace) and center fields
    std::vector<VectorField> dmv(cx.len());
    for (int a = 0; a < cx.len(); ++a) {
        dmv[a] = VectorField(g);
        for (int i = 0; i < 3; ++i) {
            const int comp = i;
            auto vi = [&](const State& w) { return w.v[comp]; };
            dmv[a][i] = cx.ddtf(m, vi, a);
        }
    }
    const VectorField& X = dmv[cx.len() / 2];

    // energies E(s) = 1/2 int J R |d_t^m v|^2
    std::vector<double> E(cx.len());
    for (int a = 0; a < cx.len(); ++a) {
        const ScalarField jr = JR_of(cx.win.at(a));
        double acc = 0.0;
        ScalarField p2(g);
        for (int i = 0; i < 3; ++i) K.vfma(n, dmv[a][i].data(), dmv[a][i].data(), p2.data());
        acc = 0.5 * s.integral(s.mul(jr, p2));
        E[a] = acc;
    }
    const double dEdt = cx.win.ddt(1, E);

    const ScalarField JRdot = cx.ddtf(1, JR_of);
    ScalarField X2(g);
    for (int i = 0; i < 3; ++i) K.vfma(n, X[i].data(), X[i].data(), X2.data());

    const double K1 = 0.5 * s.integral(s.mul(JRdot, X2));

    // K2 = int [d_t^m(JR v_t) - JR d_t^{m+1} v] . X
    double K2 = 0.0;
    for (int i = 0; i < 3; ++i) {
        const int comp = i;
        ScalarField acc(g);
        for (int r = 1; r <= m; ++r) {
            auto vi = [&](const State& w) { return w.v[comp]; };
            const ScalarField dA = cx.ddtf(r, JR_of);
            const ScalarField dB = cx.ddtf(m - r + 1, vi);
            K.vfma_scaled(n, static_cast<double>(binom(m, r)), dA.data(), dB.data(), acc.data());
        }
        K2 += s.integral(s.mul(acc, X[i]));
    }

    // T_i = R v_j b_{kj} d_k v_i ; commutator K3 and advective I1-part
    auto adv_of = [&](const State& w, int comp) {
        // R ( v_j b_{kj} d_k ) v_comp ; v_j b_{kj} = (J v_1, J v_2, b_{3j} v_j)
        const AleMaps& M = w.maps;
        ScalarField d1 = s.d_tan(w.v[comp], 1), d2 = s.d_tan(w.v[comp], 2), d3 = s.d3(w.v[comp]);
        ScalarField out(g);
        for (std::size_t at = 0; at < n; ++at) {
            const double b3v = -M.d1psi[at] * w.v[0][at] - M.d2psi[at] * w.v[1][at] + w.v[2][at];
            out[at] = w.R[at] * (M.jac[at] * (w.v[0][at] * d1[at] + w.v[1][at] * d2[at]) +
                                 b3v * d3[at]);
        }
        return out;
    };
    double K3 = 0.0;
    for (int i = 0; i < 3; ++i) {
        const int comp = i;
        auto Ti = [&](const State& w) { return adv_of(w, comp); };
        ScalarField dmT = cx.ddtf(m, Ti);
        // subtract R v_j b_kj d_k X_i at the center
        ScalarField d1 = s.d_tan(X[i], 1), d2 = s.d_tan(X[i], 2), d3 = s.d3(X[i]);
        const AleMaps& M = st.maps;
        for (std::size_t at = 0; at < n; ++at) {
            const double b3v = -M.d1psi[at] * st.v[0][at] - M.d2psi[at] * st.v[1][at] +
                               st.v[2][at];
            dmT[at] -= st.R[at] * (M.jac[at] * (st.v[0][at] * d1[at] + st.v[1][at] * d2[at]) +
                                   b3v * d3[at]);
        }
        K3 += s.integral(s.mul(dmT, X[i]));
    }

    // K4 with T_i = R psi_t d_3 v_i (b_33 = 1 after the J-scaling)
    double K4 = 0.0;
    for (int i = 0; i < 3; ++i) {
        const int comp = i;
        auto Ti = [&](const State& w) {
            ScalarField d3 = s.d3(w.v[comp]);
            ScalarField out(g);
            for (std::size_t at = 0; at < n; ++at)
                out[at] = w.R[at] * w.maps.psi_t[at] * d3[at];
            return out;
        };
        ScalarField dmT = cx.ddtf(m, Ti);
        ScalarField d3 = s.d3(X[i]);
        for (std::size_t at = 0; at < n; ++at)
            dmT[at] -= st.R[at] * st.maps.psi_t[at] * d3[at];
        K4 += s.integral(s.mul(dmT, X[i]));
    }

    // I1 = 1/2 int R v_j b_kj d_k |X|^2 - 1/2 int R psi_t d_3 |X|^2
    double I1 = 0.0;
    {
        ScalarField d1 = s.d_tan(X2, 1), d2 = s.d_tan(X2, 2), d3 = s.d3(X2);
        const AleMaps& M = st.maps;
        ScalarField tmp(g);
        for (std::size_t at = 0; at < n; ++at) {
            const double b3v = -M.d1psi[at] * st.v[0][at] - M.d2psi[at] * st.v[1][at] +
                               st.v[2][at];
            tmp[at] = st.R[at] * (M.jac[at] * (st.v[0][at] * d1[at] + st.v[1][at] * d2[at]) +
                                  b3v * d3[at]) -
                      st.R[at] * M.psi_t[at] * d3[at];
        }
        I1 = 0.5 * s.integral(tmp);
    }

    // I2 = int b_ki d_t^m q d_k X_i ; K5 = int [d_t^m(b_ki d_k q) - b_ki d_k d_t^m q] X_i
    const ScalarField dmq = cx.ddtf(m, q_of);
    double I2 = 0.0, K5 = 0.0;
    {
        ScalarField d1q = s.d_tan(dmq, 1), d2q = s.d_tan(dmq, 2), d3q = s.d3(dmq);
        const AleMaps& M = st.maps;
        for (int i = 0; i < 3; ++i) {
            ScalarField d1 = s.d_tan(X[i], 1), d2 = s.d_tan(X[i], 2), d3 = s.d3(X[i]);
            ScalarField tmp(g);
            for (std::size_t at = 0; at < n; ++at) {
                const double bk[3] = {M.b(0, i, at), M.b(1, i, at), M.b(2, i, at)};
                tmp[at] = dmq[at] * (bk[0] * d1[at] + bk[1] * d2[at] + bk[2] * d3[at]);
            }
            I2 += s.integral(tmp);

            const int comp = i;
            auto Ti = [&](const State& w) {
                const ScalarField qw = sample_q(s, cx.law, w);
                ScalarField dq1 = s.d_tan(qw, 1);
                ScalarField dq2 = s.d_tan(qw, 2);
                ScalarField dq3 = s.d3(qw);
                ScalarField out(g);
                const AleMaps& Mw = w.maps;
                for (std::size_t at = 0; at < n; ++at)
                    out[at] = Mw.b(0, comp, at) * dq1[at] + Mw.b(1, comp, at) * dq2[at] +
                              Mw.b(2, comp, at) * dq3[at];
                return out;
            };
            ScalarField dmT = cx.ddtf(m, Ti);
            for (std::size_t at = 0; at < n; ++at) {
                const double bk[3] = {M.b(0, i, at), M.b(1, i, at), M.b(2, i, at)};
                dmT[at] -= bk[0] * d1q[at] + bk[1] * d2q[at] + bk[2] * d3q[at];
            }
            K5 += s.integral(s.mul(dmT, X[i]));
        }
    }

    // I_B1 on Gamma1, fluid side
    double IB1 = 0.0;
    {
        const Grid& gg = g;
        const std::size_t top = gg.idx(gg.n3() - 1, 0, 0);
        const AleMaps& M = st.maps;
        BoundaryField tmp(gg, Boundary::Top);
        for (std::size_t p = 0; p < gg.plane_size(); ++p) {
            const std::size_t at = top + p;
            const double b3X = -M.d1psi[at] * X[0][at] - M.d2psi[at] * X[1][at] + X[2][at];
            tmp[p] = dmq[at] * b3X;
        }
        IB1 = s.integral(tmp);
    }

    LedgerRow row;
    row.t = st.t;
    row.names = {"K1", "K2", "K3", "K4", "K5", "I1", "I2", "IB1"};
    row.values = {K1, K2, K3, K4, K5, I1, I2, IB1};
    row.dEdt = dEdt;
    row.rhs_sum = K1 - K2 - K3 + K4 - I1 + I2 - K5 - IB1;
    row.identity_residual = std::fabs(dEdt - row.rhs_sum);
    return row;
}

BoundaryField q_trace_of(const Space& s, const PressureLaw& law, const State& st,
                         const PlateSource* src) {
    const Grid& g = s.grid();
    BoundaryField q(g, Boundary::Top);
    const int top = g.n3() - 1;
    for (std::size_t p = 0; p < g.plane_size(); ++p) q[p] = law.q(st.R[g.idx(top, 0, 0) + p]);
    if (src && *src) {
        const BoundaryField extra = (*src)(s, st.t);
        kernels::active().axpy(q.size(), 1.0, extra.data(), q.data());
    }
    return q;
}

LedgerRow plate_ledger(const Ctx& cx, const PlateSource* src) {
    const Space& s = cx.s;
    const Grid& g = s.grid();
    const State& st = cx.center();
    const int m = cx.m;
    const auto& K = kernels::active();

    auto wt_of = [&](const State& w) { return w.w_t; };
    auto w_of = [&](const State& w) { return w.w; };
    auto q_of = [&](const State& w) { return q_trace_of(s, cx.law, w, src); };

    // X = d_t^{m+1} w (= d_t^m w_t), u = d_t^m w per sample
    std::vector<double> E1(cx.len()), E2(cx.len());
    for (int a = 0; a < cx.len(); ++a) {
        const BoundaryField X = cx.ddtb(m, wt_of, a);
        const BoundaryField u = cx.ddtb(m, w_of, a);
        BoundaryField lap(g, Boundary::Top);
        s.spectral().laplacian_h(u, 1, lap);
        E1[a] = 0.5 * s.l2_sq(X);
        E2[a] = 0.5 * s.l2_sq(lap);
    }
    const double dE1 = cx.win.ddt(1, E1);
    const double dE2 = cx.win.ddt(1, E2);

    const BoundaryField X = cx.ddtb(m, wt_of);
    BoundaryField dX1 = s.d_tan(X, 1), dX2 = s.d_tan(X, 2);
    const double D = s.l2_sq(dX1) + s.l2_sq(dX2);

    const BoundaryField dmq = cx.ddtb(m, q_of);
    BoundaryField ib(g, Boundary::Top);
    K.vmul(ib.size(), dmq.data(), X.data(), ib.data());
    const double IB = s.integral(ib);

    // EQ43-style split of d_t^m(b_3i v_i): the r = 0 term is the fluid-side IB1
    const std::size_t top = g.idx(g.n3() - 1, 0, 0);
    auto b3v_terms = [&](int r) {
        // int dmq * C(m,r) d_t^r b_3i d_t^{m-r} v_i over Gamma1
        BoundaryField term(g, Boundary::Top);
        VectorField dv(g);
        for (int i = 0; i < 3; ++i) {
            const int comp = i;
            auto vi = [&](const State& w) { return w.v[comp]; };
            dv[i] = cx.ddtf(m - r, vi);
        }
        // d_t^r b_3 = (-d1 d_t^r psi, -d2 d_t^r psi, [r==0])
        auto d1p_of = [&](const State& w) { return w.maps.d1psi; };
        auto d2p_of = [&](const State& w) { return w.maps.d2psi; };
        const ScalarField b1 = cx.ddtf(r, d1p_of);
        const ScalarField b2 = cx.ddtf(r, d2p_of);
        for (std::size_t p = 0; p < g.plane_size(); ++p) {
            const std::size_t at = top + p;
            double b3x = -b1[at] * dv[0][at] - b2[at] * dv[1][at];
            if (r == 0) b3x += dv[2][at];
            term[p] = dmq[p] * static_cast<double>(binom(m, r)) * b3x;
        }
        return s.integral(term);
    };
    const double IB1_fluid = b3v_terms(0);
    double IB_rest = 0.0;
    for (int r = 1; r <= m; ++r) IB_rest += b3v_terms(r);
    const double IB1_plate = IB - IB_rest;

    LedgerRow row;
    row.t = st.t;
    row.names = {"dE_kin", "dE_bend", "damping", "IB", "IB1_fluid", "IB1_plate"};
    row.values = {dE1, dE2, D, IB, IB1_fluid, IB1_plate};
    row.dEdt = dE1 + dE2 + D;
    row.rhs_sum = IB;
    row.identity_residual = std::fabs(row.dEdt - row.rhs_sum);
    return row;
}

LedgerRow plate_weighted_ledger(const Ctx& cx, const PlateSource* src) {
    const Space& s = cx.s;
    const Grid& g = s.grid();
    const State& st = cx.center();
    const int m = cx.m;
    const auto& K = kernels::active();
    const std::size_t ps = g.plane_size();

    auto wt_of = [&](const State& w) { return w.w_t; };
    auto w_of = [&](const State& w) { return w.w; };
    auto q_of = [&](const State& w) { return q_trace_of(s, cx.law, w, src); };
    auto JR_of = [&](const State& w) {
        BoundaryField jr(g, Boundary::Top);
        const std::size_t top = g.idx(g.n3() - 1, 0, 0);
        for (std::size_t p = 0; p < ps; ++p) jr[p] = w.maps.jac[top + p] * w.R[top + p];
        return jr;
    };

    std::vector<double> E1(cx.len()), E2(cx.len());
    for (int a = 0; a < cx.len(); ++a) {
        const BoundaryField X = cx.ddtb(m, wt_of, a);
        const BoundaryField u = cx.ddtb(m, w_of, a);
        const BoundaryField jr = JR_of(cx.win.at(a));
        BoundaryField lap(g, Boundary::Top);
        s.spectral().laplacian_h(u, 1, lap);
        double e1 = 0.0, e2 = 0.0;
        for (std::size_t p = 0; p < ps; ++p) {
            e1 += X[p] * X[p] / jr[p];
            e2 += lap[p] * lap[p] / jr[p];
        }
        E1[a] = 0.5 * e1 * g.tan_weight();
        E2[a] = 0.5 * e2 * g.tan_weight();
    }
    const double dE1 = cx.win.ddt(1, E1);
    const double dE2 = cx.win.ddt(1, E2);

    const BoundaryField X = cx.ddtb(m, wt_of);
    const BoundaryField u = cx.ddtb(m, w_of);
    const BoundaryField jr = JR_of(st);
    const BoundaryField jr_t = cx.ddtb(1, JR_of);
    BoundaryField lap(g, Boundary::Top);
    s.spectral().laplacian_h(u, 1, lap);
    BoundaryField beta(g, Boundary::Top);
    for (std::size_t p = 0; p < ps; ++p) beta[p] = 1.0 / jr[p];

    // damping with weight
    BoundaryField dX1 = s.d_tan(X, 1), dX2 = s.d_tan(X, 2);
    double D = 0.0;
    for (std::size_t p = 0; p < ps; ++p)
        D += beta[p] * (dX1[p] * dX1[p] + dX2[p] * dX2[p]);
    D *= g.tan_weight();

    const BoundaryField dmq = cx.ddtb(m, q_of);
    double IB = 0.0;
    for (std::size_t p = 0; p < ps; ++p) IB += beta[p] * dmq[p] * X[p];
    IB *= g.tan_weight();

    // corrections: 1/2 int beta_t (X^2 + lap^2), -2 int lap grad(beta).grad(X),
    // - int lap Lap(beta) X, - int X grad(beta).grad(X)
    BoundaryField db1 = s.d_tan(beta, 1), db2 = s.d_tan(beta, 2);
    BoundaryField lapb(g, Boundary::Top);
    s.spectral().laplacian_h(beta, 1, lapb);
    double Cdt = 0.0, Cg2 = 0.0, Cdiv = 0.0, CgX = 0.0;
    for (std::size_t p = 0; p < ps; ++p) {
        const double beta_t = -jr_t[p] / (jr[p] * jr[p]);
        Cdt += 0.5 * beta_t * (X[p] * X[p] + lap[p] * lap[p]);
        const double gbgX = db1[p] * dX1[p] + db2[p] * dX2[p];
        Cg2 += -2.0 * lap[p] * gbgX;
        Cdiv += -lap[p] * lapb[p] * X[p];
        CgX += -X[p] * gbgX;
    }
    Cdt *= g.tan_weight();
    Cg2 *= g.tan_weight();
    Cdiv *= g.tan_weight();
    CgX *= g.tan_weight();

    LedgerRow row;
    row.t = st.t;
    row.names = {"dE_kin", "dE_bend", "damping", "IB", "C_dt", "C_grad2", "C_div", "C_gradX"};
    row.values = {dE1, dE2, D, IB, Cdt, Cg2, Cdiv, CgX};
    row.dEdt = dE1 + dE2 + D;
    row.rhs_sum = IB + Cdt + Cg2 + Cdiv + CgX;
    row.identity_residual = std::fabs(row.dEdt - row.rhs_sum);
    (void)K;
    return row;
}

LedgerRow density_ledger(const Ctx& cx) {
    const Space& s = cx.s;
    const Grid& g = s.grid();
    const State& st = cx.center();
    const int m = cx.m;
    const auto& K = kernels::active();
    const std::size_t n = g.size();

    auto R_of = [&](const State& w) { return w.R; };
    auto q_of = [&](const State& w) { return sample_q(s, cx.law, w); };
    auto beta_of = [&](const State& w) {
        // J q'(R)/R
        ScalarField b(g);
        for (std::size_t i = 0; i < n; ++i)
            b[i] = w.maps.jac[i] * cx.law.qp(w.R[i]) / w.R[i];
        return b;
    };
    auto gamma_of = [&](const State& w) {
        // q'(R)/R
        ScalarField b(g);
        for (std::size_t i = 0; i < n; ++i) b[i] = cx.law.qp(w.R[i]) / w.R[i];
        return b;
    };
    // d_t^m R at all samples + energies
    std::vector<ScalarField> dmR(cx.len());
    for (int a = 0; a < cx.len(); ++a) dmR[a] = cx.ddtf(m, R_of, a);
    const ScalarField& X = dmR[cx.len() / 2];
    std::vector<double> E(cx.len());
    for (int a = 0; a < cx.len(); ++a) {
        const ScalarField be = beta_of(cx.win.at(a));
        E[a] = 0.5 * s.integral(s.mul(be, s.mul(dmR[a], dmR[a])));
    }
    const double dEdt = cx.win.ddt(1, E);

    const ScalarField beta = beta_of(st);
    const ScalarField gam = gamma_of(st);
    const ScalarField beta_t = cx.ddtf(1, beta_of);
    ScalarField X2 = s.mul(X, X);
    const double I0 = 0.5 * s.integral(s.mul(beta_t, X2));

    // K6 = int [d_t^m(beta R_t) - beta d_t^{m+1} R] X
    ScalarField acc(g);
    for (int r = 1; r <= m; ++r) {
        const ScalarField dA = cx.ddtf(r, beta_of);
        const ScalarField dB = cx.ddtf(m - r + 1, R_of);
        K.vfma_scaled(n, static_cast<double>(binom(m, r)), dA.data(), dB.data(), acc.data());
    }
    const double K6 = s.integral(s.mul(acc, X));

    // K7 = int [d_t^m(beta R_t) - gam d_t^m(J R_t)] X
    double K7 = 0.0;
    {
        ScalarField t1(g), t2(g);
        for (int r = 0; r <= m; ++r) {
            const ScalarField dB = cx.ddtf(m - r + 1, R_of);
            const ScalarField dA = cx.ddtf(r, beta_of);
            K.vfma_scaled(n, static_cast<double>(binom(m, r)), dA.data(), dB.data(), t1.data());
            auto J_of = [&](const State& w) { return w.maps.jac; };
            const ScalarField dJ = cx.ddtf(r, J_of);
            K.vfma_scaled(n, static_cast<double>(binom(m, r)), dJ.data(), dB.data(), t2.data());
        }
        ScalarField diff(g);
        for (std::size_t i = 0; i < n; ++i) diff[i] = t1[i] - gam[i] * t2[i];
        K7 = s.integral(s.mul(diff, X));
    }

    // spatial pieces at the center
    const ScalarField dmq = cx.ddtf(m, q_of);
    VectorField dmv(g);
    for (int i = 0; i < 3; ++i) {
        const int comp = i;
        auto vi = [&](const State& w) { return w.v[comp]; };
        dmv[i] = cx.ddtf(m, vi);
    }
    const AleMaps& M = st.maps;

    // I2 = int b_ji d_j(d_t^m v_i) d_t^m q
    double I2 = 0.0;
    {
        ScalarField tmp(g);
        ScalarField d1 = s.d_tan(dmv[0], 1), d2 = s.d_tan(dmv[1], 2);
        ScalarField d31 = s.d3(dmv[0]), d32 = s.d3(dmv[1]), d33 = s.d3(dmv[2]);
        for (std::size_t at = 0; at < n; ++at) {
            const double bdv = M.jac[at] * (d1[at] + d2[at]) - M.d1psi[at] * d31[at] -
                               M.d2psi[at] * d32[at] + d33[at];
            // note: b_ji d_j v_i = J(d1 v1 + d2 v2) + b_3i d_3 v_i
            tmp[at] = bdv * dmq[at];
        }
        I2 = s.integral(tmp);
    }

    // I3 = 1/2 int gam v_i b_ji d_j(X^2) - 1/2 int gam psi_t d_3(X^2)
    double I3 = 0.0;
    {
        ScalarField d1 = s.d_tan(X2, 1), d2 = s.d_tan(X2, 2), d3 = s.d3(X2);
        ScalarField tmp(g);
        for (std::size_t at = 0; at < n; ++at) {
            const double b3v = -M.d1psi[at] * st.v[0][at] - M.d2psi[at] * st.v[1][at] +
                               st.v[2][at];
            tmp[at] = gam[at] * (M.jac[at] * (st.v[0][at] * d1[at] + st.v[1][at] * d2[at]) +
                                 b3v * d3[at]) -
                      gam[at] * M.psi_t[at] * d3[at];
        }
        I3 = 0.5 * s.integral(tmp);
    }

    // K8: commutator of d_t^m over (R b_ji d_j v_i) against gam X
    double K8 = 0.0;
    {
        auto T_of = [&](const State& w) {
            const AleMaps& Mw = w.maps;
            ScalarField d1 = s.d_tan(w.v[0], 1), d2 = s.d_tan(w.v[1], 2);
            ScalarField d31 = s.d3(w.v[0]), d32 = s.d3(w.v[1]), d33 = s.d3(w.v[2]);
            ScalarField out(g);
            for (std::size_t at = 0; at < n; ++at) {
                const double bdv = Mw.jac[at] * (d1[at] + d2[at]) - Mw.d1psi[at] * d31[at] -
                                   Mw.d2psi[at] * d32[at] + d33[at];
                out[at] = w.R[at] * bdv;
            }
            return out;
        };
        ScalarField dmT = cx.ddtf(m, T_of);
        ScalarField d1 = s.d_tan(dmv[0], 1), d2 = s.d_tan(dmv[1], 2);
        ScalarField d31 = s.d3(dmv[0]), d32 = s.d3(dmv[1]), d33 = s.d3(dmv[2]);
        ScalarField tmp(g);
        for (std::size_t at = 0; at < n; ++at) {
            const double bdv = M.jac[at] * (d1[at] + d2[at]) - M.d1psi[at] * d31[at] -
                               M.d2psi[at] * d32[at] + d33[at];
            tmp[at] = gam[at] * (dmT[at] - st.R[at] * bdv) * X[at];
        }
        K8 = s.integral(tmp);
    }

    // K9 = int b_ji d_j(d_t^m v_i) (q'(R) X - d_t^m q)
    double K9 = 0.0;
    {
        ScalarField d1 = s.d_tan(dmv[0], 1), d2 = s.d_tan(dmv[1], 2);
        ScalarField d31 = s.d3(dmv[0]), d32 = s.d3(dmv[1]), d33 = s.d3(dmv[2]);
        ScalarField tmp(g);
        for (std::size_t at = 0; at < n; ++at) {
            const double bdv = M.jac[at] * (d1[at] + d2[at]) - M.d1psi[at] * d31[at] -
                               M.d2psi[at] * d32[at] + d33[at];
            tmp[at] = bdv * (cx.law.qp(st.R[at]) * X[at] - dmq[at]);
        }
        K9 = s.integral(tmp);
    }

    // K10: commutator over (v_i b_ji d_j R)
    double K10 = 0.0;
    {
        auto T_of = [&](const State& w) {
            const AleMaps& Mw = w.maps;
            ScalarField d1 = s.d_tan(w.R, 1), d2 = s.d_tan(w.R, 2), d3 = s.d3(w.R);
            ScalarField out(g);
            for (std::size_t at = 0; at < n; ++at) {
                const double b3v = -Mw.d1psi[at] * w.v[0][at] - Mw.d2psi[at] * w.v[1][at] +
                                   w.v[2][at];
                out[at] = Mw.jac[at] * (w.v[0][at] * d1[at] + w.v[1][at] * d2[at]) + b3v * d3[at];
            }
            return out;
        };
        ScalarField dmT = cx.ddtf(m, T_of);
        const ScalarField dmdR1 = s.d_tan(X, 1), dmdR2 = s.d_tan(X, 2), dmdR3 = s.d3(X);
        ScalarField tmp(g);
        for (std::size_t at = 0; at < n; ++at) {
            const double b3v = -M.d1psi[at] * st.v[0][at] - M.d2psi[at] * st.v[1][at] +
                               st.v[2][at];
            const double lead = M.jac[at] * (st.v[0][at] * dmdR1[at] + st.v[1][at] * dmdR2[at]) +
                                b3v * dmdR3[at];
            tmp[at] = gam[at] * (dmT[at] - lead) * X[at];
        }
        K10 = s.integral(tmp);
    }

    // K11: commutator over (psi_t d_3 R) [b_33 = 1 after J-scaling]
    double K11 = 0.0;
    {
        auto T_of = [&](const State& w) {
            ScalarField d3 = s.d3(w.R);
            ScalarField out(g);
            for (std::size_t at = 0; at < n; ++at) out[at] = w.maps.psi_t[at] * d3[at];
            return out;
        };
        ScalarField dmT = cx.ddtf(m, T_of);
        const ScalarField d3X = s.d3(X);
        ScalarField tmp(g);
        for (std::size_t at = 0; at < n; ++at)
            tmp[at] = gam[at] * (dmT[at] - st.maps.psi_t[at] * d3X[at]) * X[at];
        K11 = s.integral(tmp);
    }

    LedgerRow row;
    row.t = st.t;
    row.names = {"I0", "K6", "K7", "K8", "K9", "K10", "K11", "I2", "I3"};
    row.values = {I0, K6, K7, K8, K9, K10, K11, I2, I3};
    row.dEdt = dEdt;
    row.rhs_sum = I0 - K6 + K7 - I2 - I3 - K8 - K9 - K10 + K11;
    row.identity_residual = std::fabs(dEdt - row.rhs_sum);
    return row;
}

} // namespace

LedgerRow energy_ledger(const Space& s, const PressureLaw& law, const JetWindow& win,
                        LedgerKind which, int m, const PlateSource* plate_src) {
    if (!win.full()) throw GridError("window underfilled");
    if (2 * (m + 1) + 1 > win.length()) throw GridError("window too short for ledger order");
    Ctx cx{s, law, win, m};
    switch (which) {
        case LedgerKind::Momentum: return momentum_ledger(cx);
        case LedgerKind::Plate: return plate_ledger(cx, plate_src);
        case LedgerKind::PlateWeighted: return plate_weighted_ledger(cx, plate_src);
        case LedgerKind::Density: return density_ledger(cx);
    }
    throw GridError("unknown ledger kind");
}

} // namespace ape

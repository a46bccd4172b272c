#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ape/diagnostics.hpp"
#include "ape/initdata.hpp"
#include "ape/ledger.hpp"
#include "ape/rhs.hpp"
#include "ape/run.hpp"

#include <cmath>

using namespace ape;

namespace {

const double PI = Grid::pi();

struct Setup {
    Space s;
    HarmonicExtension ext;
    PressureLaw law;
    Setup(int n1, int n2, int n3) : s(Grid(n1, n2, n3)), ext(s), law{} {}
};

State steady(const Setup& su) {
    State st(su.s);
    st.R.fill(1.0);
    st.refresh_maps(su.s, su.ext);
    return st;
}

JetWindow steady_window(const Setup& su, int len = 9, double dt = 0.01) {
    JetWindow win(len, dt);
    for (int k = 0; k < len; ++k) {
        State st = steady(su);
        st.t = k * dt;
        win.push(st);
    }
    return win;
}

// window of states collected from a small-data run at fixed dt
JetWindow run_window(const Setup& su, const std::string& family, double amp, double dt,
                     int win_len, int stride = 1) {
    Config cfg;
    cfg.N1 = su.s.grid().n1();
    cfg.N2 = su.s.grid().n2();
    cfg.N3 = su.s.grid().n3();
    cfg.dt = dt;
    cfg.T = dt * (win_len * stride + 2);
    cfg.init_family = family;
    cfg.init_amplitude = amp;
    cfg.snap_every = stride;
    cfg.write_snapshots = false;
    std::vector<State> frames;
    const RunResult rr = run(cfg, "", &frames);
    REQUIRE(rr.status == RunStatus::Completed);
    REQUIRE(static_cast<int>(frames.size()) >= win_len);
    JetWindow win(win_len, dt * stride);
    for (int k = 0; k < win_len; ++k) win.push(frames[k]);
    return win;
}

} // namespace

TEST_CASE("Q on constants and steady states") {
    Setup su(8, 8, 9);
    const State st = steady(su);
    ScalarField f(su.s.grid()), ft(su.s.grid());
    f.fill(4.2);
    CHECK(su.s.max_abs(apply_Q(su.s, st, f, ft)) < 1e-12);

    // flat advection: v = (1,0,0), f = sin(x1) -> Qf = cos(x1)
    State adv = steady(su);
    for (std::size_t i = 0; i < adv.v[0].size(); ++i) adv.v[0][i] = 1.0;
    const Grid& g = su.s.grid();
    ScalarField sf(g);
    for (int i3 = 0; i3 < g.n3(); ++i3)
        for (int i2 = 0; i2 < g.n2(); ++i2)
            for (int i1 = 0; i1 < g.n1(); ++i1) sf[g.idx(i3, i2, i1)] = std::sin(g.x1(i1));
    const ScalarField qf = apply_Q(su.s, adv, sf, ScalarField(g));
    double worst = 0.0;
    for (int i3 = 0; i3 < g.n3(); ++i3)
        for (int i2 = 0; i2 < g.n2(); ++i2)
            for (int i1 = 0; i1 < g.n1(); ++i1)
                worst = std::max(worst, std::fabs(qf[g.idx(i3, i2, i1)] - std::cos(g.x1(i1))));
    CHECK(worst < 1e-12);
}

TEST_CASE("tangency residual: steady zero; perturbation scales by 1/J") {
    Setup su(8, 8, 9);
    State st = steady(su);
    auto [g0, g1] = tangency_residual(su.s, st);
    CHECK(g0 == 0.0);
    CHECK(g1 == 0.0);

    const double delta = 1e-3;
    const Grid& g = su.s.grid();
    const std::size_t top = g.idx(g.n3() - 1, 0, 0);
    for (std::size_t p = 0; p < g.plane_size(); ++p) st.v[2][top + p] += delta;
    auto [h0, h1] = tangency_residual(su.s, st);
    CHECK(h0 == 0.0);
    CHECK(h1 == doctest::Approx(delta).epsilon(1e-10)); // J = 1 here
}

TEST_CASE("tangency equals kinematic residual over J on the moving boundary") {
    Setup su(12, 12, 17);
    // a state with nontrivial geometry
    Config cfg;
    cfg.N1 = cfg.N2 = 12;
    cfg.N3 = 17;
    cfg.T = 0.05;
    cfg.init_family = "mixed";
    cfg.init_amplitude = 5e-3;
    cfg.write_snapshots = false;
    std::vector<State> frames;
    REQUIRE(run(cfg, "", &frames).status == RunStatus::Completed);
    State st = frames.back();
    // deliberately break the kinematic condition
    const Grid& g = su.s.grid();
    const std::size_t top = g.idx(g.n3() - 1, 0, 0);
    for (std::size_t p = 0; p < g.plane_size(); ++p)
        st.v[2][top + p] += 1e-4 * std::sin(g.x1(p % g.n1()));
    const BoundaryField kin = st.kinematic_residual(su.s);
    auto [t0, t1] = tangency_residual(su.s, st);
    double expect = 0.0;
    for (std::size_t p = 0; p < g.plane_size(); ++p)
        expect = std::max(expect, std::fabs(kin[p] / st.maps.jac[top + p]));
    CHECK(t1 == doctest::Approx(expect).epsilon(1e-10));
    (void)t0;
}

TEST_CASE("h extension restricts to the boundary formula exactly") {
    Setup su(12, 12, 17);
    Config cfg;
    cfg.N1 = cfg.N2 = 12;
    cfg.N3 = 17;
    cfg.T = 0.04;
    cfg.init_family = "mixed";
    cfg.init_amplitude = 1e-2;
    cfg.write_snapshots = false;
    std::vector<State> frames;
    REQUIRE(run(cfg, "", &frames).status == RunStatus::Completed);
    const State& st = frames.back();

    const BoundaryField h = h_boundary(su.s, su.law, st);
    const ScalarField hex = h_extension(su.s, su.ext, su.law, st);
    const BoundaryField tr = su.s.trace(hex, Boundary::Top);
    double worst = 0.0;
    for (std::size_t p = 0; p < h.size(); ++p) worst = std::max(worst, std::fabs(h[p] - tr[p]));
    CHECK(worst < 1e-12);

    // steady: h identically zero
    const State st0 = steady(su);
    CHECK(su.s.max_abs(h_boundary(su.s, su.law, st0)) < 1e-12);
    CHECK(su.s.max_abs(h_extension(su.s, su.ext, su.law, st0)) < 1e-12);
}

TEST_CASE("variable curl of a flat shear flow") {
    Setup su(16, 16, 9);
    State st = steady(su);
    const Grid& g = su.s.grid();
    for (int i3 = 0; i3 < g.n3(); ++i3)
        for (int i2 = 0; i2 < g.n2(); ++i2)
            for (int i1 = 0; i1 < g.n1(); ++i1)
                st.v[0][g.idx(i3, i2, i1)] = std::sin(g.x2(i2));
    const VectorField z = variable_curl(su.s, st);
    CHECK(su.s.max_abs(z[0]) < 1e-12);
    CHECK(su.s.max_abs(z[1]) < 1e-12);
    double worst = 0.0;
    for (int i3 = 0; i3 < g.n3(); ++i3)
        for (int i2 = 0; i2 < g.n2(); ++i2)
            for (int i1 = 0; i1 < g.n1(); ++i1)
                worst = std::max(worst,
                                 std::fabs(z[2][g.idx(i3, i2, i1)] + std::cos(g.x2(i2))));
    CHECK(worst < 1e-12);
}

TEST_CASE("steady state zeroes every residual and ledger") {
    Setup su(8, 8, 17);
    const JetWindow win = steady_window(su);
    const GResidual gr = g_equation_residual(su.s, su.ext, su.law, win);
    CHECK(gr.interior_l2 < 1e-12);
    CHECK(gr.gamma0_l2 < 1e-12);
    CHECK(gr.gamma1_l2 < 1e-12);
    const VorticityResidual vr = vorticity_residual(su.s, win);
    CHECK(vr.residual_l2 < 1e-12);
    CHECK(std::sqrt(su.s.l2_sq(divergence_identity_residual(su.s, win))) < 1e-12);
    for (const LedgerKind k : {LedgerKind::Momentum, LedgerKind::Plate, LedgerKind::PlateWeighted,
                               LedgerKind::Density}) {
        for (int m = 0; m <= 3; ++m) {
            const LedgerRow row = energy_ledger(su.s, su.law, win, k, m);
            CHECK(row.identity_residual < 1e-10);
            for (const double v : row.values) CHECK(std::fabs(v) < 1e-10);
        }
    }
}

TEST_CASE("divergence identity agrees with the Qg + div_a v route") {
    Setup su(12, 12, 17);
    const JetWindow win = run_window(su, "mixed", 1e-3, 5e-3, 9);
    const ScalarField res = divergence_identity_residual(su.s, win);
    // same statement via g = log R: Qg + div_a v with chain-rule derivatives
    const State& st = win.center();
    auto R_of = [&](const State& w) { return w.R; };
    const ScalarField R_t = win.ddt_field(su.s, 1, R_of);
    ScalarField gt(su.s.grid());
    for (std::size_t i = 0; i < gt.size(); ++i) gt[i] = R_t[i] / st.R[i];
    // Qg with grad g = grad R / R
    ScalarField d1R = su.s.d_tan(st.R, 1), d2R = su.s.d_tan(st.R, 2), d3R = su.s.d3(st.R);
    const ScalarField c3 = advective_c3(su.s, st);
    ScalarField qg = gt;
    for (std::size_t i = 0; i < qg.size(); ++i)
        qg[i] += (st.v[0][i] * d1R[i] + st.v[1][i] * d2R[i] + c3[i] * d3R[i]) / st.R[i];
    // + div_a v
    ScalarField d1 = su.s.d_tan(st.v[0], 1), d2 = su.s.d_tan(st.v[1], 2);
    ScalarField d31 = su.s.d3(st.v[0]), d32 = su.s.d3(st.v[1]), d33 = su.s.d3(st.v[2]);
    for (std::size_t i = 0; i < qg.size(); ++i)
        qg[i] += d1[i] + st.maps.a31[i] * d31[i] + d2[i] + st.maps.a32[i] * d32[i] +
                 st.maps.a33[i] * d33[i];
    double worst = 0.0;
    for (std::size_t i = 0; i < qg.size(); ++i) worst = std::max(worst, std::fabs(qg[i] - res[i]));
    CHECK(worst < 1e-12);
}

TEST_CASE("div-curl reconstruction: flat closed-form cases are recovered") {
    Setup su(16, 16, 33);
    // shear: div = 0, curl = (0,0,-cos x2), zero traces, mean v1 = 0
    State st = steady(su);
    const Grid& g = su.s.grid();
    for (int i3 = 0; i3 < g.n3(); ++i3)
        for (int i2 = 0; i2 < g.n2(); ++i2)
            for (int i1 = 0; i1 < g.n1(); ++i1)
                st.v[0][g.idx(i3, i2, i1)] = std::sin(g.x2(i2));
    const DivCurlResult r = divcurl_reconstruct(su.s, st);
    CHECK(r.err_l2 < 1e-10);

    // potential flow: v = grad(cos x1 cosh x3 / cosh 1)
    State st2 = steady(su);
    for (int i3 = 0; i3 < g.n3(); ++i3)
        for (int i2 = 0; i2 < g.n2(); ++i2)
            for (int i1 = 0; i1 < g.n1(); ++i1) {
                const std::size_t at = g.idx(i3, i2, i1);
                const double x1 = g.x1(i1), x3 = g.x3(i3);
                st2.v[0][at] = -std::sin(x1) * std::cosh(x3) / std::cosh(1.0);
                st2.v[2][at] = std::cos(x1) * std::sinh(x3) / std::cosh(1.0);
            }
    const DivCurlResult r2 = divcurl_reconstruct(su.s, st2);
    CHECK(r2.err_l2 < 1e-6);
}

TEST_CASE("div-curl error scales linearly with the geometry deviation") {
    Setup su(16, 16, 33);
    const Grid& g = su.s.grid();
    std::vector<double> aI, err;
    for (const double amp : {1e-4, 1e-3, 1e-2}) {
        State st(su.s);
        st.R.fill(1.0);
        for (int i2 = 0; i2 < g.n2(); ++i2)
            for (int i1 = 0; i1 < g.n1(); ++i1)
                st.w[static_cast<std::size_t>(i2) * g.n1() + i1] =
                    amp * std::cos(g.x1(i1)) * std::cos(g.x2(i2));
        // fixed band-limited velocity with vanishing normal traces
        for (int i3 = 0; i3 < g.n3(); ++i3)
            for (int i2 = 0; i2 < g.n2(); ++i2)
                for (int i1 = 0; i1 < g.n1(); ++i1) {
                    const std::size_t at = g.idx(i3, i2, i1);
                    const double x1 = g.x1(i1), x2 = g.x2(i2), x3 = g.x3(i3);
                    st.v[0][at] = std::sin(x2) + 0.3 * std::cos(x1);
                    st.v[1][at] = 0.5 * std::sin(x1);
                    st.v[2][at] = std::sin(PI * x3) * std::cos(x2);
                }
        st.refresh_maps(su.s, su.ext);
        // the largest amplitude sits just past the default contract gate;
        // the probe reports the a-I error term, so relax the gate here
        const DivCurlResult r = divcurl_reconstruct(su.s, st, true, 0.5);
        aI.push_back(r.a_minus_I_h2);
        err.push_back(r.err_l2);
    }
    const double slope = std::log(err[2] / err[0]) / std::log(aI[2] / aI[0]);
    CHECK(slope > 0.7);
    CHECK(slope < 1.3);
}

TEST_CASE("monitor flags a synthetic J violation at the offending range") {
    Setup su(8, 8, 17);
    // psi with d3 psi = 0.4 < 1/2 somewhere
    ScalarField psi(su.s.grid()), zero(su.s.grid());
    const Grid& g = su.s.grid();
    for (int i3 = 0; i3 < g.n3(); ++i3)
        for (int i2 = 0; i2 < g.n2(); ++i2)
            for (int i1 = 0; i1 < g.n1(); ++i1) {
                const double x3 = g.x3(i3);
                psi[g.idx(i3, i2, i1)] =
                    x3 - 0.3 * std::sin(PI * x3) / PI * (1.0 + 0.99); // min slope ~0.4
            }
    State st(su.s);
    st.R.fill(1.0);
    st.maps = ale_coefficients(su.s, psi, zero);
    const MonitorReport r = monitor(su.s, su.law, st, nullptr);
    CHECK(r.J_min < 0.5);
    CHECK(r.first_violation(su.law, 0.1) == "J-range");

    const State ok = steady(su);
    const MonitorReport r2 = monitor(su.s, su.law, ok, nullptr);
    CHECK(r2.green(su.law, 0.1));
    CHECK(r2.J_min == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r2.a_minus_I_H2 < 1e-10);
}

TEST_CASE("ledger residuals on a trajectory shrink under joint refinement") {
    // coarse vs refined (h3, dt) halved jointly; m = 0 momentum ledger
    auto residual_at = [&](int n3, double dt) {
        Setup su(12, 12, n3);
        const JetWindow win = run_window(su, "bump", 1e-3, dt, 9);
        const LedgerRow row = energy_ledger(su.s, su.law, win, LedgerKind::Momentum, 0);
        return row.identity_residual;
    };
    const double c = residual_at(17, 4e-3);
    const double f = residual_at(33, 2e-3);
    CHECK(c / f > 5.0);
}

TEST_CASE("IB1 fluid and plate sides agree on an enforced trajectory") {
    Setup su(12, 12, 17);
    const JetWindow win = run_window(su, "density", 1e-3, 4e-3, 9);
    const LedgerRow row = energy_ledger(su.s, su.law, win, LedgerKind::Plate, 0);
    const double scale = std::max(1e-30, std::fabs(row.value("IB")));
    CHECK(std::fabs(row.value("IB1_fluid") - row.value("IB1_plate")) <=
          std::max(10.0 * row.identity_residual, 1e-14 * scale));
}

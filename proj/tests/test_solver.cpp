#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ape/initdata.hpp"
#include "ape/mms.hpp"
#include "ape/run.hpp"
#include "ape/stepper.hpp"

#include <cmath>

using namespace ape;

namespace {

const double PI = Grid::pi();

BoundaryField bsample(const Space& s, const std::function<double(double, double)>& f) {
    const Grid& g = s.grid();
    BoundaryField out(g, Boundary::Top);
    for (int i2 = 0; i2 < g.n2(); ++i2)
        for (int i1 = 0; i1 < g.n1(); ++i1)
            out[static_cast<std::size_t>(i2) * g.n1() + i1] = f(g.x1(i1), g.x2(i2));
    return out;
}

double bmax_diff(const BoundaryField& a, const BoundaryField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

State steady_state(const Space& s, const HarmonicExtension& ext) {
    State st(s);
    st.R.fill(1.0);
    st.refresh_maps(s, ext);
    return st;
}

} // namespace

TEST_CASE("pressure law frozen values") {
    PressureLaw law{1.4, 1.0, 0.5, 2.0};
    CHECK(law.q(1.0) == 0.0);
    CHECK(law.qp(1.0) == 1.0);
    CHECK(law.c1() == doctest::Approx(std::pow(0.25, 0.4)).epsilon(1e-14));
    CHECK(law.c2() == doctest::Approx(std::pow(4.0, 0.4)).epsilon(1e-14));
    CHECK(law.qpp(1.0) == doctest::Approx(0.4).epsilon(1e-14));

    Space s(Grid(4, 4, 9));
    ScalarField R(s.grid());
    R.fill(0.1); // below m0/2
    CHECK_THROWS_AS(pressure_eval(law, s.grid(), R, nullptr, nullptr, nullptr),
                    PressureRangeError);
}

TEST_CASE("fluid rhs vanishes at the steady state") {
    Space s(Grid(8, 8, 17));
    HarmonicExtension ext(s);
    PressureLaw law;
    const State st = steady_state(s, ext);
    VectorField dv(s.grid());
    ScalarField dR(s.grid());
    rhs_fluid(s, law, st, dv, dR);
    for (int i = 0; i < 3; ++i) CHECK(s.max_abs(dv[i]) < 1e-13);
    CHECK(s.max_abs(dR) < 1e-13);
}

TEST_CASE("fluid rhs: flat shear flow is steady") {
    // v = (sin x2, 0, 0), R = 1, w = 0: transport and pressure terms vanish
    Space s(Grid(16, 16, 17));
    HarmonicExtension ext(s);
    PressureLaw law;
    State st(s);
    st.R.fill(1.0);
    const Grid& g = s.grid();
    for (int i3 = 0; i3 < g.n3(); ++i3)
        for (int i2 = 0; i2 < g.n2(); ++i2)
            for (int i1 = 0; i1 < g.n1(); ++i1)
                st.v[0][g.idx(i3, i2, i1)] = std::sin(g.x2(i2));
    st.refresh_maps(s, ext);
    VectorField dv(g);
    ScalarField dR(g);
    rhs_fluid(s, law, st, dv, dR);
    for (int i = 0; i < 3; ++i) CHECK(s.max_abs(dv[i]) < 1e-12);
    CHECK(s.max_abs(dR) < 1e-12);
}

TEST_CASE("plate rhs applies the spectral symbols") {
    Space s(Grid(16, 16, 9));
    BoundaryField zero(s.grid(), Boundary::Top);
    // w = cos(x1): Lap^2 w = w, so dwt/dt = -cos(x1)
    const auto w = bsample(s, [](double x1, double) { return std::cos(x1); });
    const auto r1 = rhs_plate(s, w, zero, zero);
    const auto ex1 = bsample(s, [](double x1, double) { return -std::cos(x1); });
    CHECK(bmax_diff(r1, ex1) < 1e-12);
    // w_t = cos(2 x2): Lap w_t = -4 cos(2 x2)
    const auto wt = bsample(s, [](double, double x2) { return std::cos(2.0 * x2); });
    const auto r2 = rhs_plate(s, zero, wt, zero);
    const auto ex2 = bsample(s, [](double, double x2) { return -4.0 * std::cos(2.0 * x2); });
    CHECK(bmax_diff(r2, ex2) < 1e-12);
    // all zero
    const auto r0 = rhs_plate(s, zero, zero, zero);
    CHECK(s.max_abs(r0) == 0.0);
}

TEST_CASE("cfl formula") {
    Space s(Grid(32, 32, 33));
    HarmonicExtension ext(s);
    PressureLaw law;
    const State st = steady_state(s, ext);
    const double dt1 = cfl_dt(s, law, st, 1.0);
    // steady state: speeds are acoustic only, sqrt(q'(1)) = 1; the vertical
    // cell is the finest
    CHECK(dt1 == doctest::Approx(1.0 / 32.0).epsilon(1e-10));
    CHECK(cfl_dt(s, law, st, 0.5) == doctest::Approx(0.5 * dt1).epsilon(1e-12));

    // doubling N1 halves the tangential bound
    Space s2(Grid(64, 64, 9));
    HarmonicExtension ext2(s2);
    State st2(s2);
    st2.R.fill(1.0);
    const Grid& g2 = s2.grid();
    for (std::size_t i = 0; i < g2.size(); ++i) st2.v[0][i] = 10.0; // tangential dominates
    st2.refresh_maps(s2, ext2);
    Space s3(Grid(128, 128, 9));
    HarmonicExtension ext3(s3);
    State st3(s3);
    st3.R.fill(1.0);
    for (std::size_t i = 0; i < s3.grid().size(); ++i) st3.v[0][i] = 10.0;
    st3.refresh_maps(s3, ext3);
    const double a = cfl_dt(s2, law, st2, 1.0);
    const double b = cfl_dt(s3, law, st3, 1.0);
    CHECK(a / b == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("steady state is preserved exactly over many steps") {
    Space s(Grid(8, 8, 17));
    HarmonicExtension ext(s);
    PressureLaw law;
    State st = steady_state(s, ext);
    Stepper stepper(s, ext, law);
    const double dt = cfl_dt(s, law, st, 0.5);
    for (int k = 0; k < 50; ++k) stepper.step(st, dt);
    for (int i = 0; i < 3; ++i) CHECK(s.max_abs(st.v[i]) < 1e-12);
    ScalarField dR(s.grid());
    for (std::size_t i = 0; i < dR.size(); ++i) dR[i] = st.R[i] - 1.0;
    CHECK(s.max_abs(dR) < 1e-12);
    CHECK(s.max_abs(st.w) < 1e-12);
    CHECK(s.max_abs(st.w_t) < 1e-12);
}

TEST_CASE("x1-reflection symmetry is preserved") {
    // data symmetric under x1 -> 2 pi - x1 (cos modes in x1, v1 = 0)
    Config cfg;
    cfg.N1 = 16;
    cfg.N2 = 8;
    cfg.N3 = 17;
    cfg.T = 0.05;
    cfg.init_family = "density";
    cfg.init_amplitude = 1e-2;
    cfg.write_snapshots = false;
    std::vector<State> frames;
    const RunResult rr = run(cfg, "", &frames);
    CHECK(rr.status == RunStatus::Completed);
    const State& st = frames.back();
    const Grid& g = Grid(cfg.N1, cfg.N2, cfg.N3);
    double worst = 0.0;
    for (int i3 = 0; i3 < g.n3(); ++i3)
        for (int i2 = 0; i2 < g.n2(); ++i2)
            for (int i1 = 1; i1 < g.n1(); ++i1) {
                const int j1 = g.n1() - i1;
                worst = std::max(worst, std::fabs(st.R[g.idx(i3, i2, i1)] -
                                                  st.R[g.idx(i3, i2, j1 % g.n1())]));
                // v1 is odd in x1
                worst = std::max(worst, std::fabs(st.v[0][g.idx(i3, i2, i1)] +
                                                  st.v[0][g.idx(i3, i2, j1 % g.n1())]));
            }
    CHECK(worst < 1e-11);
}

TEST_CASE("kinematic condition and bottom wall enforced after every step") {
    Config cfg;
    cfg.N1 = 16;
    cfg.N2 = 16;
    cfg.N3 = 17;
    cfg.T = 0.1;
    cfg.init_family = "mixed";
    cfg.init_amplitude = 1e-3;
    cfg.sample_every = 1;
    cfg.write_snapshots = false;
    std::vector<State> frames;
    const RunResult rr = run(cfg, "", &frames);
    CHECK(rr.status == RunStatus::Completed);
    CHECK(rr.max_kinematic_residual < 1e-12);
    CHECK(rr.max_tangency_g0 < 1e-13);
    CHECK(rr.max_tangency_g1 < 1e-12);
}

TEST_CASE("mass of the moving domain is conserved at scheme accuracy") {
    Config cfg;
    cfg.N1 = 16;
    cfg.N2 = 16;
    cfg.N3 = 33;
    cfg.T = 0.25;
    cfg.init_family = "mixed";
    cfg.init_amplitude = 1e-3;
    cfg.write_snapshots = false;
    const RunResult rr = run(cfg, "");
    CHECK(rr.status == RunStatus::Completed);
    CHECK(std::fabs(rr.mass_final - rr.mass_initial) / rr.mass_initial < 1e-7);
}

TEST_CASE("out-of-range initial density is rejected before stepping") {
    Config cfg;
    cfg.init_family = "density";
    cfg.init_amplitude = 0.9; // R dips to 0.1 < m0
    cfg.N1 = cfg.N2 = 8;
    cfg.N3 = 9;
    CHECK_THROWS_AS(run(cfg, ""), InitDataError);
}

TEST_CASE("mms plate-only case converges in time at 4th order") {
    const MmsCase mc = build_case("plate_only");
    DtRule rule{DtRule::Kind::Halving, 0.02};
    const auto rows = convergence_study(mc, {9, 9, 9}, rule, 0.2, 8);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1].order_l2 > 2.5);
    CHECK(rows[2].order_l2 > 2.5);
}

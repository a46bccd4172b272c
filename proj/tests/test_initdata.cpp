#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ape/initdata.hpp"
#include "ape/stepper.hpp"

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

} // namespace

TEST_CASE("steady data gives the zero jet and the frozen E0 value") {
    Setup su(8, 8, 17);
    const InitialData d = make_initial_data(su.s, "steady", 0.0, su.law);
    const InitialJet jet = build_jet(su.s, su.ext, su.law, d.v0, d.R0, d.w1);
    for (int j = 1; j <= 3; ++j) {
        CHECK(su.s.max_abs(jet.R_jet[j]) < 1e-12);
        for (int i = 0; i < 3; ++i) CHECK(su.s.max_abs(jet.v_jet[j][i]) < 1e-12);
    }
    for (int j = 2; j <= 4; ++j) CHECK(su.s.max_abs(jet.w_jet[j]) < 1e-12);
    // E0 = ||1||_{H3}^2 + ||1||_{H4(Gamma1)}^2 = 4 pi^2 + 4 pi^2
    const double e0 = total_energy_E0(su.s, jet);
    CHECK(e0 == doctest::Approx(8.0 * PI * PI).epsilon(1e-10));
}

TEST_CASE("density perturbation: first derivatives match the closed forms") {
    Setup su(16, 16, 17);
    const double A = 0.01;
    const InitialData d = make_initial_data(su.s, "density", A, su.law);
    const InitialJet jet = build_jet(su.s, su.ext, su.law, d.v0, d.R0, d.w1);

    // R_t(0) = 0 (v0 = 0, psi_t(0) = 0)
    CHECK(su.s.max_abs(jet.R_jet[1]) < 1e-12);

    // v_t(0) = -(q'(R0)/R0) grad R0 = +A R0^{gamma-2} sin(x1) e1
    const Grid& g = su.s.grid();
    double worst = 0.0;
    for (int i3 = 0; i3 < g.n3(); ++i3)
        for (int i2 = 0; i2 < g.n2(); ++i2)
            for (int i1 = 0; i1 < g.n1(); ++i1) {
                const std::size_t at = g.idx(i3, i2, i1);
                const double R0 = 1.0 + A * std::cos(g.x1(i1));
                const double expect = A * std::pow(R0, su.law.gamma - 2.0) * std::sin(g.x1(i1));
                worst = std::max(worst, std::fabs(jet.v_jet[1][0][at] - expect));
                worst = std::max(worst, std::fabs(jet.v_jet[1][1][at]));
                worst = std::max(worst, std::fabs(jet.v_jet[1][2][at]));
            }
    CHECK(worst < 1e-10);

    // w_tt(0) = q(R0)|Gamma1 (w0 = w1 = 0)
    double worstw = 0.0;
    for (int i2 = 0; i2 < g.n2(); ++i2)
        for (int i1 = 0; i1 < g.n1(); ++i1) {
            const double R0 = 1.0 + A * std::cos(g.x1(i1));
            worstw = std::max(worstw, std::fabs(jet.w_jet[2][static_cast<std::size_t>(i2) *
                                                                 g.n1() +
                                                             i1] -
                                                su.law.q(R0)));
        }
    CHECK(worstw < 1e-12);
}

TEST_CASE("jet matches a one-sided finite difference of the solver trajectory") {
    // second-order consistency needs corner-compatible data; generic data is
    // compatible only at order zero and the enforced trajectory then differs
    // from the formal cascade at the moving boundary
    Setup su(12, 12, 17);
    const InitialData d = make_initial_data(su.s, "bump", 1e-3, su.law);
    const InitialJet jet = build_jet(su.s, su.ext, su.law, d.v0, d.R0, d.w1);
    State st = state_from_initial(su.s, su.ext, d);
    Stepper stepper(su.s, su.ext, su.law);

    const double dt = 2e-4;
    std::vector<State> traj{st};
    for (int k = 0; k < 4; ++k) {
        stepper.step(st, dt);
        traj.push_back(st);
    }
    // 5-point one-sided first derivative at t = 0
    const double c[5] = {-25.0 / 12, 4.0, -3.0, 4.0 / 3, -0.25};
    ScalarField fd(su.s.grid());
    for (std::size_t at = 0; at < fd.size(); ++at) {
        double acc = 0.0;
        for (int k = 0; k < 5; ++k) acc += c[k] * traj[k].v[0][at];
        fd[at] = acc / dt;
    }
    double worst = 0.0;
    for (std::size_t at = 0; at < fd.size(); ++at)
        worst = std::max(worst, std::fabs(fd[at] - jet.v_jet[1][0][at]));
    CHECK(worst < 1e-6); // FD error floor, not scheme error

    ScalarField fdR(su.s.grid());
    for (std::size_t at = 0; at < fdR.size(); ++at) {
        double acc = 0.0;
        for (int k = 0; k < 5; ++k) acc += c[k] * traj[k].R[at];
        fdR[at] = acc / dt;
    }
    double worstR = 0.0;
    for (std::size_t at = 0; at < fdR.size(); ++at)
        worstR = std::max(worstR, std::fabs(fdR[at] - jet.R_jet[1][at]));
    CHECK(worstR < 1e-6);

    // second derivative via 5-point one-sided stencil
    const double c2[5] = {35.0 / 12, -26.0 / 3, 19.0 / 2, -14.0 / 3, 11.0 / 12};
    ScalarField fd2(su.s.grid());
    for (std::size_t at = 0; at < fd2.size(); ++at) {
        double acc = 0.0;
        for (int k = 0; k < 5; ++k) acc += c2[k] * traj[k].R[at];
        fd2[at] = acc / (dt * dt);
    }
    double worst2 = 0.0;
    for (std::size_t at = 0; at < fd2.size(); ++at)
        worst2 = std::max(worst2, std::fabs(fd2[at] - jet.R_jet[2][at]));
    CHECK(worst2 < 1e-2);
}

TEST_CASE("jets converge under grid refinement") {
    auto jet_norm = [&](int n3) {
        Setup su(12, 12, n3);
        const InitialData d = make_initial_data(su.s, "mixed", 1e-2, su.law);
        const InitialJet jet = build_jet(su.s, su.ext, su.law, d.v0, d.R0, d.w1);
        return su.s.sobolev(jet.R_jet[2], 0.0);
    };
    const double a = jet_norm(17), b = jet_norm(33), c = jet_norm(65);
    // successive differences shrink (grid-converging construction)
    CHECK(std::fabs(b - c) < std::fabs(a - b));
}

TEST_CASE("quadratic scaling of E0 on R-independent pieces") {
    Setup su(8, 8, 17);
    // shear data: no density perturbation, so E0 - E0(steady) scales as A^2
    const InitialData d1 = make_initial_data(su.s, "shear", 1e-3, su.law);
    const InitialData d2 = make_initial_data(su.s, "shear", 2e-3, su.law);
    const InitialJet j1 = build_jet(su.s, su.ext, su.law, d1.v0, d1.R0, d1.w1);
    const InitialJet j2 = build_jet(su.s, su.ext, su.law, d2.v0, d2.R0, d2.w1);
    const InitialData d0 = make_initial_data(su.s, "steady", 0.0, su.law);
    const InitialJet j0 = build_jet(su.s, su.ext, su.law, d0.v0, d0.R0, d0.w1);
    const double e0 = total_energy_E0(su.s, j0);
    const double e1 = total_energy_E0(su.s, j1) - e0;
    const double e2 = total_energy_E0(su.s, j2) - e0;
    CHECK(e2 / e1 == doctest::Approx(4.0).epsilon(1e-4));
}

TEST_CASE("incompatible and out-of-range data are rejected") {
    Setup su(8, 8, 9);
    InitialData d = make_initial_data(su.s, "steady", 0.0, su.law);
    // break compatibility: w1 nonzero while v0 = 0
    for (std::size_t i = 0; i < d.w1.size(); ++i) d.w1[i] = 1e-3;
    CHECK_THROWS_AS(build_jet(su.s, su.ext, su.law, d.v0, d.R0, d.w1), InitDataError);

    InitialData d2 = make_initial_data(su.s, "steady", 0.0, su.law);
    d2.R0.fill(0.1); // below m0
    CHECK_THROWS_AS(build_jet(su.s, su.ext, su.law, d2.v0, d2.R0, d2.w1), InitDataError);

    CHECK_THROWS_AS(make_initial_data(su.s, "no-such-family", 0.1, su.law), InitDataError);
}

TEST_CASE("Rt0 trace report value") {
    Setup su(12, 12, 17);
    const InitialData d = make_initial_data(su.s, "mixed", 1e-3, su.law);
    const InitialJet jet = build_jet(su.s, su.ext, su.law, d.v0, d.R0, d.w1);
    const double v = Rt0_trace_H2(su.s, jet);
    CHECK(std::isfinite(v));
    CHECK(v >= 0.0);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ape/space.hpp"

#include <cmath>
#include <random>

using namespace ape;

namespace {

const double PI = Grid::pi();

ScalarField sample(const Space& s, const std::function<double(double, double, double)>& f) {
    const Grid& g = s.grid();
    ScalarField out(g);
    for (int i3 = 0; i3 < g.n3(); ++i3)
        for (int i2 = 0; i2 < g.n2(); ++i2)
            for (int i1 = 0; i1 < g.n1(); ++i1)
                out[g.idx(i3, i2, i1)] = f(g.x1(i1), g.x2(i2), g.x3(i3));
    return out;
}

BoundaryField bsample(const Space& s, Boundary b,
                      const std::function<double(double, double)>& f) {
    const Grid& g = s.grid();
    BoundaryField out(g, b);
    for (int i2 = 0; i2 < g.n2(); ++i2)
        for (int i1 = 0; i1 < g.n1(); ++i1)
            out[static_cast<std::size_t>(i2) * g.n1() + i1] = f(g.x1(i1), g.x2(i2));
    return out;
}

double max_diff(const ScalarField& a, const ScalarField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

ScalarField random_bandlimited(const Space& s, std::mt19937_64& rng, int kmax = 3) {
    const Grid& g = s.grid();
    ScalarField out(g);
    std::vector<double> amp;
    auto rnd = [&] { return (static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5); };
    for (int k1 = 0; k1 <= kmax; ++k1)
        for (int k2 = -kmax; k2 <= kmax; ++k2) {
            const double ac = rnd(), as = rnd(), vc = rnd();
            for (int i3 = 0; i3 < g.n3(); ++i3)
                for (int i2 = 0; i2 < g.n2(); ++i2)
                    for (int i1 = 0; i1 < g.n1(); ++i1) {
                        const double ph = k1 * g.x1(i1) + k2 * g.x2(i2);
                        const double vert = 1.0 + vc * g.x3(i3) * g.x3(i3);
                        out[g.idx(i3, i2, i1)] += (ac * std::cos(ph) + as * std::sin(ph)) * vert;
                    }
        }
    return out;
}

} // namespace

TEST_CASE("grid invariants") {
    CHECK_THROWS_AS(Grid(3, 8, 9), GridError);
    CHECK_THROWS_AS(Grid(8, 7, 9), GridError);
    CHECK_THROWS_AS(Grid(8, 8, 4), GridError);
    const Grid g(8, 8, 9);
    CHECK(g.x3(0) == 0.0);
    CHECK(g.x3(8) == 1.0);
    double acc = 0.0;
    for (double w : g.vweights()) acc += w;
    CHECK(acc == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("tangential spectral derivatives are exact on band-limited fields") {
    Space s(Grid(16, 16, 9));
    const auto f1 = sample(s, [](double x1, double, double) { return std::sin(x1); });
    const auto d1 = s.d_tan(f1, 1);
    const auto c1 = sample(s, [](double x1, double, double) { return std::cos(x1); });
    CHECK(max_diff(d1, c1) < 1e-13);

    const auto f2 = sample(s, [](double, double x2, double) { return std::cos(2 * x2); });
    const auto d2 = s.d_tan(f2, 2, 2);
    const auto c2 = sample(s, [](double, double x2, double) { return -4.0 * std::cos(2 * x2); });
    CHECK(max_diff(d2, c2) < 1e-12);

    // mixed partials commute exactly
    std::mt19937_64 rng(7);
    const auto f = random_bandlimited(s, rng);
    const auto d12 = s.d_tan(s.d_tan(f, 1), 2);
    const auto d21 = s.d_tan(s.d_tan(f, 2), 1);
    CHECK(max_diff(d12, d21) < 1e-12);
}

TEST_CASE("vertical derivatives: polynomial reproduction and convergence order") {
    Space s(Grid(4, 4, 17));
    const auto f = sample(s, [](double, double, double x3) { return x3 * x3; });
    const auto d = s.d3(f);
    const auto ex = sample(s, [](double, double, double x3) { return 2.0 * x3; });
    CHECK(max_diff(d, ex) < 1e-12);

    const auto c = sample(s, [](double, double, double) { return 3.5; });
    CHECK(max_diff(s.d3(c), sample(s, [](double, double, double) { return 0.0; })) < 1e-13);

    // second derivative of sin(pi x3): observed order ~4 via two resolutions
    auto err_at = [&](int n3) {
        Space ss(Grid(4, 4, n3));
        const auto g = sample(ss, [](double, double, double x3) { return std::sin(PI * x3); });
        const auto d2 = ss.d3(g, 2);
        const auto ex2 = sample(
            ss, [](double, double, double x3) { return -PI * PI * std::sin(PI * x3); });
        double m = 0.0;
        for (std::size_t i = 0; i < d2.size(); ++i) m = std::max(m, std::fabs(d2[i] - ex2[i]));
        return m;
    };
    const double e1 = err_at(17), e2 = err_at(33);
    const double order = std::log2(e1 / e2);
    CHECK(order > 3.5);
}

TEST_CASE("tangential and vertical derivatives commute") {
    Space s(Grid(8, 8, 17));
    std::mt19937_64 rng(13);
    const auto f = random_bandlimited(s, rng);
    const auto a = s.d3(s.d_tan(f, 1));
    const auto b = s.d_tan(s.d3(f), 1);
    CHECK(max_diff(a, b) < 1e-11);
}

TEST_CASE("sobolev norms: frozen closed-form values") {
    Space s(Grid(16, 16, 17));
    // ||sin x1||_{L2(Omega)} = sqrt(2 pi^2)
    const auto f = sample(s, [](double x1, double, double) { return std::sin(x1); });
    CHECK(s.sobolev(f, 0.0) == doctest::Approx(std::sqrt(2.0) * PI).epsilon(1e-12));
    // H1: sqrt(4 pi^2) = 2 pi
    CHECK(s.sobolev(f, 1.0) == doctest::Approx(2.0 * PI).epsilon(1e-12));
    // constant 1 on Gamma1 in H3: sqrt(4 pi^2) = 2 pi
    const auto one = bsample(s, Boundary::Top, [](double, double) { return 1.0; });
    CHECK(s.sobolev(one, 3.0) == doctest::Approx(2.0 * PI).epsilon(1e-12));
    // unsupported exponents rejected
    CHECK_THROWS_AS(s.sobolev(one, 6.5), GridError);
    CHECK_THROWS_AS(s.sobolev(f, 5.6), GridError);
}

TEST_CASE("Parseval: spectral L2 equals quadrature L2") {
    Space s(Grid(16, 16, 17));
    std::mt19937_64 rng(3);
    const auto f = random_bandlimited(s, rng);
    const double spec = s.sobolev(f, 0.0);
    const double quad = std::sqrt(s.l2_sq(f));
    CHECK(spec == doctest::Approx(quad).epsilon(1e-13));
}

TEST_CASE("norm monotonicity in s and triangle inequality") {
    Space s(Grid(8, 8, 9));
    std::mt19937_64 rng(17);
    const auto f = random_bandlimited(s, rng);
    const auto g = random_bandlimited(s, rng);
    double prev = s.sobolev(f, 0.0);
    for (double sv : {0.5, 1.0, 1.5, 2.0, 3.0, 4.0}) {
        const double cur = s.sobolev(f, sv);
        CHECK(cur >= prev * (1.0 - 1e-12));
        prev = cur;
    }
    ScalarField fg(s.grid());
    for (std::size_t i = 0; i < fg.size(); ++i) fg[i] = f[i] + g[i];
    for (double sv : {0.0, 1.0, 2.5}) {
        CHECK(s.sobolev(fg, sv) <= s.sobolev(f, sv) + s.sobolev(g, sv) + 1e-12);
    }
}

TEST_CASE("trace restriction") {
    Space s(Grid(8, 8, 9));
    const auto f = sample(s, [](double x1, double, double x3) { return std::cos(x1) * x3; });
    const auto t1 = s.trace(f, Boundary::Top);
    const auto t0 = s.trace(f, Boundary::Bottom);
    const auto ex = bsample(s, Boundary::Top, [](double x1, double) { return std::cos(x1); });
    double m = 0.0;
    for (std::size_t i = 0; i < t1.size(); ++i) m = std::max(m, std::fabs(t1[i] - ex[i]));
    CHECK(m == 0.0);
    CHECK(s.max_abs(t0) == 0.0);

    // trace(fg) = trace(f) trace(g), pointwise restriction
    const auto g = sample(s, [](double, double x2, double x3) { return std::sin(x2) + x3; });
    const auto tfg = s.trace(s.mul(f, g), Boundary::Top);
    const auto tf = s.trace(f, Boundary::Top);
    const auto tg = s.trace(g, Boundary::Top);
    for (std::size_t i = 0; i < tfg.size(); ++i) CHECK(tfg[i] == tf[i] * tg[i]);
}

TEST_CASE("cutoff profiles") {
    Space s(Grid(4, 4, 33));
    const auto top = s.cutoff(Boundary::Top);
    const auto bot = s.cutoff(Boundary::Bottom);
    const Grid& g = s.grid();
    // top: 1 at x3=1, 0 for x3 <= 1/2
    CHECK(top[g.idx(g.n3() - 1, 0, 0)] == 1.0);
    for (int i3 = 0; i3 <= (g.n3() - 1) / 2; ++i3) CHECK(top[g.idx(i3, 0, 0)] == 0.0);
    CHECK(bot[g.idx(0, 0, 0)] == 1.0);
    for (int i3 = (g.n3() - 1) / 2; i3 < g.n3(); ++i3) CHECK(bot[g.idx(i3, 0, 0)] == 0.0);
    // integral of the derivative = endpoint difference (+1 top, -1 bottom)
    const auto dtop = s.d3(top);
    const auto dbot = s.d3(bot);
    double itop = 0.0, ibot = 0.0;
    for (int i3 = 0; i3 < g.n3(); ++i3) {
        itop += g.vweights()[i3] * dtop[g.idx(i3, 0, 0)];
        ibot += g.vweights()[i3] * dbot[g.idx(i3, 0, 0)];
    }
    CHECK(itop == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(ibot == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("dealiasing removes the upper third") {
    Space s(Grid(12, 12, 9));
    auto f = sample(s, [](double x1, double, double) { return std::cos(5.0 * x1); });
    s.spectral().dealias(s.grid(), f);
    CHECK(s.max_abs(f) < 1e-13); // |k| = 5 > 12/3
    auto g = sample(s, [](double x1, double, double) { return std::cos(3.0 * x1); });
    const auto gcopy = g;
    s.spectral().dealias(s.grid(), g);
    CHECK(max_diff(g, gcopy) < 1e-13); // |k| = 3 <= 4 kept
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ape/kernels.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace ape;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n, double lo = -1.0,
                               double hi = 1.0) {
    std::vector<double> v(n);
    for (auto& x : v) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        x = lo + (hi - lo) * u;
    }
    return v;
}

// sizes that exercise the vector tail paths
const std::size_t kSizes[] = {1, 2, 3, 4, 5, 7, 8, 15, 64, 67, 256, 1001};

} // namespace

TEST_CASE("scalar and avx2 backends agree") {
    if (!kernels::avx2_supported()) {
        MESSAGE("avx2 not available; skipping equivalence");
        return;
    }
    const auto& S = kernels::scalar_ops();
    const auto& V = kernels::avx2_ops();
    std::mt19937_64 rng(98765);

    for (const std::size_t n : kSizes) {
        auto x = random_vec(rng, n), y = random_vec(rng, n), z = random_vec(rng, n);
        const double a = 1.7, b = -0.3;

        auto ys = y, yv = y;
        S.axpby(n, a, x.data(), b, ys.data());
        V.axpby(n, a, x.data(), b, yv.data());
        for (std::size_t i = 0; i < n; ++i)
            CHECK(ys[i] == doctest::Approx(yv[i]).epsilon(1e-15));

        ys = y;
        yv = y;
        S.axpy(n, a, x.data(), ys.data());
        V.axpy(n, a, x.data(), yv.data());
        for (std::size_t i = 0; i < n; ++i)
            CHECK(ys[i] == doctest::Approx(yv[i]).epsilon(1e-15));

        auto zs = z, zv = z;
        S.vfma(n, x.data(), y.data(), zs.data());
        V.vfma(n, x.data(), y.data(), zv.data());
        for (std::size_t i = 0; i < n; ++i)
            CHECK(zs[i] == doctest::Approx(zv[i]).epsilon(1e-15));

        zs = z;
        zv = z;
        S.vfma_scaled(n, a, x.data(), y.data(), zs.data());
        V.vfma_scaled(n, a, x.data(), y.data(), zv.data());
        for (std::size_t i = 0; i < n; ++i)
            CHECK(zs[i] == doctest::Approx(zv[i]).epsilon(1e-15));

        S.vmul(n, x.data(), y.data(), zs.data());
        V.vmul(n, x.data(), y.data(), zv.data());
        for (std::size_t i = 0; i < n; ++i) CHECK(zs[i] == zv[i]);

        auto yd = random_vec(rng, n, 0.5, 2.0);
        S.vdiv(n, x.data(), yd.data(), zs.data());
        V.vdiv(n, x.data(), yd.data(), zv.data());
        for (std::size_t i = 0; i < n; ++i) CHECK(zs[i] == zv[i]);

        CHECK(S.dot(n, x.data(), y.data()) ==
              doctest::Approx(V.dot(n, x.data(), y.data())).epsilon(1e-13));
        CHECK(S.wdot(n, z.data(), x.data(), y.data()) ==
              doctest::Approx(V.wdot(n, z.data(), x.data(), y.data())).epsilon(1e-13));
        CHECK(S.sum(n, x.data()) == doctest::Approx(V.sum(n, x.data())).epsilon(1e-13));
        CHECK(S.max_abs(n, x.data()) == V.max_abs(n, x.data()));
        CHECK(S.min_val(n, x.data()) == V.min_val(n, x.data()));
        CHECK(S.max_val(n, x.data()) == V.max_val(n, x.data()));

        // complex kernels need even storage
        const std::size_t nc = n;
        auto zc1 = random_vec(rng, 2 * nc), zc2 = zc1;
        auto mult = random_vec(rng, nc);
        S.cmul_real(nc, zc1.data(), mult.data());
        V.cmul_real(nc, zc2.data(), mult.data());
        for (std::size_t i = 0; i < 2 * nc; ++i) CHECK(zc1[i] == zc2[i]);

        zc1 = random_vec(rng, 2 * nc);
        zc2 = zc1;
        S.cmul_imag(nc, zc1.data(), mult.data());
        V.cmul_imag(nc, zc2.data(), mult.data());
        for (std::size_t i = 0; i < 2 * nc; ++i) CHECK(zc1[i] == zc2[i]);
    }
}

TEST_CASE("reference kernel semantics") {
    const auto& K = kernels::scalar_ops();
    std::vector<double> x = {1.0, 2.0, 3.0};
    std::vector<double> y = {4.0, 5.0, 6.0};
    K.axpby(3, 2.0, x.data(), -1.0, y.data());
    CHECK(y[0] == -2.0);
    CHECK(y[1] == -1.0);
    CHECK(y[2] == 0.0);
    CHECK(K.dot(3, x.data(), x.data()) == 14.0);
    CHECK(K.max_abs(3, y.data()) == 2.0);
    CHECK(K.min_val(3, x.data()) == 1.0);

    // cmul_imag rotates: (1, 0) * i*k = (0, k)
    std::vector<double> z = {1.0, 0.0};
    std::vector<double> m = {3.0};
    K.cmul_imag(1, z.data(), m.data());
    CHECK(z[0] == 0.0);
    CHECK(z[1] == 3.0);
}

TEST_CASE("active backend is one of the two and deterministic") {
    const auto& A = kernels::active();
    CHECK((std::string(A.name) == "scalar" || std::string(A.name) == "avx2"));
    std::mt19937_64 rng(11);
    auto x = random_vec(rng, 1003);
    const double s1 = A.sum(x.size(), x.data());
    const double s2 = A.sum(x.size(), x.data());
    CHECK(s1 == s2);
}

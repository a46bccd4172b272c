#include "ape/vderiv.hpp"

#include "ape/kernels.hpp"

#include <algorithm>

namespace ape {

std::vector<double> fornberg_weights(double xi, const std::vector<double>& x, int m) {
    const int n = static_cast<int>(x.size());
    std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
    double c1 = 1.0;
    double c4 = x[0] - xi;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - xi;
        for (int j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (int j = 0; j < n; ++j) w[j] = c[j][m];
    return w;
}

VDeriv::VDeriv(const Grid& g) : n3_(g.n3()) {
    const double h = g.h3();
    auto make_rows = [&](int order, int width) {
        std::vector<Row> rows(n3_);
        for (int i = 0; i < n3_; ++i) {
            int start = std::clamp(i - width / 2, 0, n3_ - width);
            std::vector<double> nodes(width);
            for (int s = 0; s < width; ++s) nodes[s] = (start + s) * h;
            rows[i].start = start;
            rows[i].w = fornberg_weights(i * h, nodes, order);
        }
        return rows;
    };
    r1_ = make_rows(1, std::min(5, n3_));
    // centered 5-point is 4th order for the second derivative; one-sided rows
    // need 6 nodes to keep the order
    const int w2 = std::min(6, n3_);
    r2_ = make_rows(2, w2);
    if (n3_ >= 6) {
        const double h2 = h;
        for (int i = 2; i < n3_ - 2; ++i) {
            std::vector<double> nodes(5);
            const int start = i - 2;
            for (int s = 0; s < 5; ++s) nodes[s] = (start + s) * h2;
            r2_[i].start = start;
            r2_[i].w = fornberg_weights(i * h2, nodes, 2);
        }
    }
}

void VDeriv::apply(const Grid& g, const ScalarField& f, int order, ScalarField& out) const {
    if (order != 1 && order != 2) throw GridError("vertical derivative order must be 1 or 2");
    const auto& rows = (order == 1) ? r1_ : r2_;
    const std::size_t ps = g.plane_size();
    const auto& K = kernels::active();
    for (int i3 = 0; i3 < n3_; ++i3) {
        double* dst = out.data() + static_cast<std::size_t>(i3) * ps;
        std::fill(dst, dst + ps, 0.0);
        const Row& r = rows[i3];
        for (std::size_t s = 0; s < r.w.size(); ++s)
            K.axpy(ps, r.w[s], f.data() + static_cast<std::size_t>(r.start + s) * ps, dst);
    }
}

void VDeriv::apply_profile(const std::vector<double>& f, int order,
                           std::vector<double>& out) const {
    const auto& rows = (order == 1) ? r1_ : r2_;
    out.assign(n3_, 0.0);
    for (int i3 = 0; i3 < n3_; ++i3) {
        const Row& r = rows[i3];
        for (std::size_t s = 0; s < r.w.size(); ++s) out[i3] += r.w[s] * f[r.start + s];
    }
}

} // namespace ape

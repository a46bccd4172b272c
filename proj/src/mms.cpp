#include "ape/mms.hpp"

#include "ape/initdata.hpp"
#include "ape/io.hpp"
#include "ape/run.hpp"

#include <cmath>

namespace ape {

namespace {

constexpr double kFlatAmp = 0.1;   // density amplitude of the flat-fluid case
constexpr double kPlateAmp = 0.01; // plate amplitude of the plate-only case
constexpr double kCoupledAmp = 1e-3;

void for_nodes(const Space& s, const std::function<void(std::size_t, double, double, double)>& f) {
    const Grid& g = s.grid();
    for (int i3 = 0; i3 < g.n3(); ++i3)
        for (int i2 = 0; i2 < g.n2(); ++i2)
            for (int i1 = 0; i1 < g.n1(); ++i1)
                f(g.idx(i3, i2, i1), g.x1(i1), g.x2(i2), g.x3(i3));
}

void for_plane(const Space& s, const std::function<void(std::size_t, double, double)>& f) {
    const Grid& g = s.grid();
    for (int i2 = 0; i2 < g.n2(); ++i2)
        for (int i1 = 0; i1 < g.n1(); ++i1)
            f(static_cast<std::size_t>(i2) * g.n1() + i1, g.x1(i1), g.x2(i2));
}

// the pressure law used by every mms run (config defaults)
PressureLaw mms_law() { return PressureLaw{1.4, 1.0, 0.5, 2.0}; }

} // namespace

Forcing MmsCase::make_forcing() const {
    Forcing f;
    f.freeze_fluid = freeze_fluid;
    f.fluid = fluid_forcing;
    f.plate = plate_forcing;
    return f;
}

std::function<BoundaryField(const Space&, double)> MmsCase::plate_source() const {
    auto pf = plate_forcing;
    return [pf](const Space& s, double t) {
        BoundaryField f(s.grid(), Boundary::Top);
        if (pf) pf(s, t, f);
        return f;
    };
}

State MmsCase::initial_state(const Space& s, const HarmonicExtension& ext) const {
    State st(s);
    st.t = 0.0;
    for_nodes(s, [&](std::size_t at, double x1, double x2, double x3) {
        st.v[0][at] = v1(x1, x2, x3, 0.0);
        st.v[1][at] = v2(x1, x2, x3, 0.0);
        st.v[2][at] = v3(x1, x2, x3, 0.0);
        st.R[at] = R(x1, x2, x3, 0.0);
    });
    for_plane(s, [&](std::size_t p, double x1, double x2) {
        st.w[p] = w(x1, x2, 0.0);
        st.w_t[p] = w_t(x1, x2, 0.0);
    });
    st.refresh_maps(s, ext);
    return st;
}

MmsCase::Errors MmsCase::error_at(const Space& s, const State& st) const {
    const Grid& g = s.grid();
    Errors e;
    VectorField dv(g);
    ScalarField dR(g);
    for_nodes(s, [&](std::size_t at, double x1, double x2, double x3) {
        dv[0][at] = st.v[0][at] - v1(x1, x2, x3, st.t);
        dv[1][at] = st.v[1][at] - v2(x1, x2, x3, st.t);
        dv[2][at] = st.v[2][at] - v3(x1, x2, x3, st.t);
        dR[at] = st.R[at] - R(x1, x2, x3, st.t);
    });
    BoundaryField dw(g, Boundary::Top), dwt(g, Boundary::Top);
    for_plane(s, [&](std::size_t p, double x1, double x2) {
        dw[p] = st.w[p] - w(x1, x2, st.t);
        dwt[p] = st.w_t[p] - w_t(x1, x2, st.t);
    });
    double l2 = 0.0, h1 = 0.0;
    for (int i = 0; i < 3; ++i) {
        l2 += s.l2_sq(dv[i]);
        const double h = s.sobolev(dv[i], 1.0);
        h1 += h * h;
    }
    e.fluid_l2 = std::sqrt(l2 + s.l2_sq(dR));
    const double hr = s.sobolev(dR, 1.0);
    e.fluid_h1 = std::sqrt(h1 + hr * hr);
    e.plate_l2 = std::sqrt(s.l2_sq(dw) + s.l2_sq(dwt));
    e.total_l2 = std::sqrt(e.fluid_l2 * e.fluid_l2 + e.plate_l2 * e.plate_l2);
    e.total_h1 = std::sqrt(e.fluid_h1 * e.fluid_h1 + e.plate_l2 * e.plate_l2);
    return e;
}

MmsCase build_case(const std::string& name) {
    MmsCase c;
    c.name = name;
    const PressureLaw law = mms_law();

    if (name == "flat_fluid") {
        const double A = kFlatAmp;
        c.v1 = [](double, double x2, double, double t) { return std::sin(x2) * std::cos(t); };
        c.v2 = [](double, double, double, double) { return 0.0; };
        c.v3 = [](double, double, double, double) { return 0.0; };
        c.R = [A](double x1, double, double, double t) {
            return 1.0 + A * std::cos(x1) * std::sin(t);
        };
        c.w = [](double, double, double) { return 0.0; };
        c.w_t = [](double, double, double) { return 0.0; };
        c.fluid_forcing = [A, law](const Space& s, double t, VectorField& fv, ScalarField& fR) {
            for_nodes(s, [&](std::size_t at, double x1, double x2, double) {
                const double R = 1.0 + A * std::cos(x1) * std::sin(t);
                const double d1R = -A * std::sin(x1) * std::sin(t);
                const double v1 = std::sin(x2) * std::cos(t);
                // d_t v1 + (1/R) q'(R) d1 R
                fv[0][at] += -std::sin(x2) * std::sin(t) + law.qp(R) / R * d1R;
                // continuity: d_t R + v1 d1 R (solenoidal v*, flat geometry)
                fR[at] += A * std::cos(x1) * std::cos(t) + v1 * d1R;
            });
        };
        c.plate_forcing = [A, law](const Space& s, double t, BoundaryField& fw) {
            for_plane(s, [&](std::size_t p, double x1, double) {
                fw[p] += -law.q(1.0 + A * std::cos(x1) * std::sin(t));
            });
        };
        return c;
    }

    if (name == "flat_fluid_z") {
        // same class as flat_fluid (w* = 0, v3* = 0 on both boundaries) with
        // genuine vertical structure so the x3 scheme order is observable
        const double A = kFlatAmp, B = 0.05;
        auto mu = [](double x3) { return x3 * x3 * (1.0 - x3) * (1.0 - x3); };
        auto mup = [](double x3) { return 2.0 * x3 * (1.0 - x3) * (1.0 - 2.0 * x3); };
        c.v1 = [](double, double x2, double, double t) { return std::sin(x2) * std::cos(t); };
        c.v2 = [](double, double, double, double) { return 0.0; };
        c.v3 = [mu](double x1, double, double x3, double t) {
            return std::sin(t) * std::cos(x1) * mu(x3);
        };
        c.R = [A, B](double x1, double x2, double x3, double t) {
            return 1.0 + A * std::cos(x1) * std::sin(t) + B * std::cos(x2) * std::cos(t) * x3 * x3;
        };
        c.w = [](double, double, double) { return 0.0; };
        c.w_t = [](double, double, double) { return 0.0; };
        c.fluid_forcing = [=](const Space& s, double t, VectorField& fv, ScalarField& fR) {
            for_nodes(s, [&](std::size_t at, double x1, double x2, double x3) {
                const double st_ = std::sin(t), ct = std::cos(t);
                const double R = 1.0 + A * std::cos(x1) * st_ + B * std::cos(x2) * ct * x3 * x3;
                const double dtR = A * std::cos(x1) * ct - B * std::cos(x2) * st_ * x3 * x3;
                const double d1R = -A * std::sin(x1) * st_;
                const double d2R = -B * std::sin(x2) * ct * x3 * x3;
                const double d3R = 2.0 * B * std::cos(x2) * ct * x3;
                const double v1 = std::sin(x2) * ct;
                const double v3 = st_ * std::cos(x1) * mu(x3);
                const double qp = law.qp(R);
                // momentum
                fv[0][at] += -std::sin(x2) * st_ + qp / R * d1R;
                fv[1][at] += qp / R * d2R;
                const double dtv3 = ct * std::cos(x1) * mu(x3);
                const double adv3 = v1 * (-st_ * std::sin(x1) * mu(x3)) +
                                    v3 * (st_ * std::cos(x1) * mup(x3));
                fv[2][at] += dtv3 + adv3 + qp / R * d3R;
                // continuity
                const double divv = st_ * std::cos(x1) * mup(x3);
                fR[at] += dtR + R * divv + v1 * d1R + v3 * d3R;
            });
        };
        c.plate_forcing = [=](const Space& s, double t, BoundaryField& fw) {
            for_plane(s, [&](std::size_t p, double x1, double x2) {
                const double Rtop = 1.0 + A * std::cos(x1) * std::sin(t) +
                                    B * std::cos(x2) * std::cos(t);
                fw[p] += -law.q(Rtop);
            });
        };
        return c;
    }

    if (name == "plate_only") {
        const double A = kPlateAmp;
        c.freeze_fluid = true;
        c.v1 = c.v2 = c.v3 = [](double, double, double, double) { return 0.0; };
        c.R = [](double, double, double, double) { return 1.0; };
        c.w = [A](double x1, double, double t) { return A * std::cos(x1 + t); };
        c.w_t = [A](double x1, double, double t) { return -A * std::sin(x1 + t); };
        c.plate_forcing = [A](const Space& s, double t, BoundaryField& fw) {
            // w_tt + Lap^2 w - Lap w_t - q = -A sin(x1 + t) for the |k| = 1 wave
            for_plane(s, [&](std::size_t p, double x1, double) {
                fw[p] += -A * std::sin(x1 + t);
            });
        };
        return c;
    }

    if (name == "coupled") {
        const double e = kCoupledAmp;
        const double sh1 = std::sinh(1.0);
        auto S = [sh1](double x3) { return std::sinh(x3) / sh1; };
        auto Sp = [sh1](double x3) { return std::cosh(x3) / sh1; };
        auto V = [e](double x1, double x2, double t) {
            return -e * std::sin(x1 + t) * (1.0 + e * std::cos(t) * std::sin(x2));
        };
        c.v1 = [e](double, double x2, double, double t) {
            return e * std::cos(t) * std::sin(x2);
        };
        c.v2 = [e](double x1, double, double, double t) {
            return e * std::sin(t) * std::sin(x1);
        };
        c.v3 = [V](double x1, double x2, double x3, double t) {
            return x3 * x3 * V(x1, x2, t);
        };
        c.R = [e](double x1, double x2, double x3, double t) {
            return 1.0 + e * std::sin(t) * (std::cos(x2) + 0.5 * std::cos(x1) * x3 * x3);
        };
        c.w = [e](double x1, double, double t) { return e * std::cos(x1 + t); };
        c.w_t = [e](double x1, double, double t) { return -e * std::sin(x1 + t); };

        c.fluid_forcing = [=](const Space& s, double t, VectorField& fv, ScalarField& fR) {
            for_nodes(s, [&](std::size_t at, double x1, double x2, double x3) {
                const double th = x1 + t;
                const double sth = std::sin(th), cth = std::cos(th);
                const double st_ = std::sin(t), ct = std::cos(t);
                // geometry (analytic)
                const double d1psi = -e * sth * S(x3);
                const double d3psi = 1.0 + e * cth * Sp(x3);
                const double psi_t = -e * sth * S(x3);
                const double J = d3psi;
                const double a31 = -d1psi / J, a33 = 1.0 / J;
                // fields + derivatives
                const double v1 = e * ct * std::sin(x2);
                const double v2 = e * st_ * std::sin(x1);
                const double Vv = V(x1, x2, t);
                const double v3 = x3 * x3 * Vv;
                const double d2v1 = e * ct * std::cos(x2);
                const double dtv1 = -e * st_ * std::sin(x2);
                const double d1v2 = e * st_ * std::cos(x1);
                const double dtv2 = e * ct * std::sin(x1);
                const double d1V = -e * cth * (1.0 + e * ct * std::sin(x2));
                const double d2V = -e * sth * e * ct * std::cos(x2);
                const double dtV = -e * cth * (1.0 + e * ct * std::sin(x2)) +
                                   e * e * sth * st_ * std::sin(x2);
                const double d1v3 = x3 * x3 * d1V;
                const double d2v3 = x3 * x3 * d2V;
                const double d3v3 = 2.0 * x3 * Vv;
                const double dtv3 = x3 * x3 * dtV;
                const double R_ = 1.0 + e * st_ * (std::cos(x2) + 0.5 * std::cos(x1) * x3 * x3);
                const double dtR = e * ct * (std::cos(x2) + 0.5 * std::cos(x1) * x3 * x3);
                const double d1R = -0.5 * e * st_ * std::sin(x1) * x3 * x3;
                const double d2R = -e * st_ * std::sin(x2);
                const double d3R = e * st_ * std::cos(x1) * x3;
                // advective coefficient
                const double c3 = a31 * v1 + a33 * (v3 - psi_t);
                // momentum forcing; grad_a q = (d1q + a31 d3q, d2q, a33 d3q) since a32 = 0
                const double qp = law.qp(R_);
                const double d1q = qp * d1R, d2q = qp * d2R, d3q = qp * d3R;
                const double ga1 = d1q + a31 * d3q;
                const double ga2 = d2q;
                const double ga3 = a33 * d3q;
                fv[0][at] += dtv1 + (v1 * 0.0 + v2 * d2v1 + c3 * 0.0) + ga1 / R_;
                fv[1][at] += dtv2 + (v1 * d1v2 + v2 * 0.0 + c3 * 0.0) + ga2 / R_;
                fv[2][at] += dtv3 + (v1 * d1v3 + v2 * d2v3 + c3 * d3v3) + ga3 / R_;
                // continuity forcing
                const double diva = 0.0 + a31 * 0.0 + 0.0 + a33 * d3v3;
                fR[at] += dtR + R_ * diva + (v1 * d1R + v2 * d2R + c3 * d3R);
            });
        };
        c.plate_forcing = [=](const Space& s, double t, BoundaryField& fw) {
            for_plane(s, [&](std::size_t p, double x1, double x2) {
                const double Rtop =
                    1.0 + e * std::sin(t) * (std::cos(x2) + 0.5 * std::cos(x1));
                fw[p] += -e * std::sin(x1 + t) - law.q(Rtop);
            });
        };
        return c;
    }

    throw ConfigError("unknown mms case: " + name);
}

std::vector<ConvergenceRow> convergence_study(const MmsCase& mc, const std::vector<int>& n3_list,
                                              DtRule rule, double T, int n_tan) {
    std::vector<ConvergenceRow> rows;
    int level = 0;
    for (const int n3 : n3_list) {
        Config cfg;
        cfg.N1 = cfg.N2 = n_tan;
        cfg.N3 = n3;
        cfg.T = T;
        cfg.write_snapshots = false;
        const double h3 = 1.0 / (n3 - 1);
        switch (rule.kind) {
            case DtRule::Kind::Fixed: cfg.dt = rule.value; break;
            case DtRule::Kind::ProportionalH3: cfg.dt = rule.value * h3; break;
            case DtRule::Kind::Halving: cfg.dt = rule.value / std::pow(2.0, level); break;
        }
        cfg.snap_every = 1 << 20; // only first/last samples collected
        cfg.sample_every = 1 << 20;
        cfg.monitor_aI = 0.5; // verification runs, not monitor-regime runs

        const Grid grid(cfg.N1, cfg.N2, cfg.N3);
        Space space(grid);
        HarmonicExtension ext(space);
        const State init = mc.initial_state(space, ext);
        const Forcing forcing = mc.make_forcing();
        std::vector<State> collect;
        const RunResult rr = run(cfg, "", &collect, &forcing, &init);
        if (rr.status != RunStatus::Completed)
            throw GridError(std::string("mms run did not complete: ") + mc.name);
        const MmsCase::Errors err = mc.error_at(space, collect.back());

        ConvergenceRow row;
        row.h3 = h3;
        row.dt = rr.dt;
        row.err_l2 = err.total_l2;
        row.err_h1 = err.total_h1;
        if (!rows.empty()) {
            const ConvergenceRow& prev = rows.back();
            const double ratio = (rule.kind == DtRule::Kind::Halving && prev.h3 == row.h3)
                                     ? prev.dt / row.dt
                                     : prev.h3 / row.h3;
            row.order_l2 = std::log(prev.err_l2 / row.err_l2) / std::log(ratio);
        }
        rows.push_back(row);
        ++level;
    }
    return rows;
}

void write_study_csv(const std::string& path, const std::vector<ConvergenceRow>& rows) {
    CsvWriter csv(path, {"h3", "dt", "err_l2", "err_h1", "order_l2"});
    for (const auto& r : rows) csv.row({r.h3, r.dt, r.err_l2, r.err_h1, r.order_l2});
}

} // namespace ape

#include "ape/stepper.hpp"

#include "ape/kernels.hpp"

#include <cmath>
#include <complex>

namespace ape {

namespace {

struct PlateSpec {
    std::vector<std::complex<double>> w, wt;
};

void plate_to_spec(const Space& s, const BoundaryField& w, const BoundaryField& wt,
                   PlateSpec& p) {
    const auto& sp = s.spectral();
    p.w.resize(sp.cplane_size());
    p.wt.resize(sp.cplane_size());
    sp.forward_plane(w.data(), p.w.data());
    sp.forward_plane(wt.data(), p.wt.data());
}

void plate_to_phys(const Space& s, const PlateSpec& p, BoundaryField& w, BoundaryField& wt) {
    const auto& sp = s.spectral();
    sp.inverse_plane(p.w.data(), w.data());
    sp.inverse_plane(p.wt.data(), wt.data());
}

void apply_exp(const std::vector<double>& tab, PlateSpec& p) {
    const std::size_t n = p.w.size();
    for (std::size_t m = 0; m < n; ++m) {
        const double e11 = tab[4 * m], e12 = tab[4 * m + 1];
        const double e21 = tab[4 * m + 2], e22 = tab[4 * m + 3];
        const std::complex<double> w = p.w[m], wt = p.wt[m];
        p.w[m] = e11 * w + e12 * wt;
        p.wt[m] = e21 * w + e22 * wt;
    }
}

} // namespace

Stepper::Stepper(const Space& s, const HarmonicExtension& ext, const PressureLaw& law,
                 StepperOptions opt, const Forcing* forcing)
    : s_(s), ext_(ext), law_(law), opt_(opt), forcing_(forcing) {}

void Stepper::build_exp_tables(double dt) {
    const auto& sp = s_.spectral();
    const Grid& g = s_.grid();
    const std::size_t n = sp.cplane_size();
    exp_full_.resize(4 * n);
    exp_half_.resize(4 * n);
    auto fill = [&](std::vector<double>& tab, double t) {
        for (int i2 = 0; i2 < g.n2(); ++i2)
            for (int ic = 0; ic < sp.nc1(); ++ic) {
                const std::size_t m = static_cast<std::size_t>(i2) * sp.nc1() + ic;
                const double k2 = sp.ksq(i2, ic);
                double e11, e12, e21, e22;
                if (k2 == 0.0) {
                    e11 = 1.0; e12 = t; e21 = 0.0; e22 = 1.0;
                } else {
                    // A = [[0,1],[-k^4,-k^2]], eigenvalues -k^2/2 +/- i beta
                    const double alpha = -0.5 * k2;
                    const double beta = 0.5 * std::sqrt(3.0) * k2;
                    const double ea = std::exp(alpha * t);
                    const double c = std::cos(beta * t), si = std::sin(beta * t) / beta;
                    // exp(At) = e^{alpha t} [ cos I + sin/beta (A - alpha I) ]
                    e11 = ea * (c + si * (-alpha));
                    e12 = ea * si;
                    e21 = ea * si * (-k2 * k2);
                    e22 = ea * (c + si * (-k2 - alpha));
                }
                tab[4 * m] = e11; tab[4 * m + 1] = e12;
                tab[4 * m + 2] = e21; tab[4 * m + 3] = e22;
            }
    };
    fill(exp_full_, dt);
    fill(exp_half_, dt / 2.0);
    table_dt_ = dt;
}

void Stepper::step(State& st, double dt) {
    if (dt != table_dt_) build_exp_tables(dt);
    const Grid& g = s_.grid();
    const auto& K = kernels::active();
    const std::size_t n = g.size();

    struct Stage {
        VectorField v;
        ScalarField R;
        PlateSpec p;
        double t;
    };
    struct Deriv {
        VectorField dv;
        ScalarField dR;
        std::vector<std::complex<double>> qhat; // plate acceleration source
    };

    BoundaryField slip(g, Boundary::Top);
    const bool has_slip = forcing_ && forcing_->kinematic_slip;

    auto eval = [&](Stage& u, Deriv& d, bool enforce) {
        State stage(s_);
        stage.t = u.t;
        stage.v = u.v;
        stage.R = u.R;
        plate_to_phys(s_, u.p, stage.w, stage.w_t);
        stage.refresh_maps(s_, ext_, opt_.jmin_breakdown);
        if (enforce && !(forcing_ && forcing_->freeze_fluid)) {
            if (has_slip) forcing_->kinematic_slip(s_, u.t, slip);
            enforce_boundary_conditions(s_, stage, has_slip ? &slip : nullptr);
        }
        d.dv = VectorField(g);
        d.dR = ScalarField(g);
        if (forcing_ && forcing_->freeze_fluid) {
            // fluid held fixed; plate still sees its pressure trace
        } else {
            rhs_fluid(s_, law_, stage, d.dv, d.dR, opt_.dealias_rhs, forcing_);
        }
        // plate source: q(R) trace (+ manufactured forcing), dealiased
        BoundaryField qtr(g, Boundary::Top);
        {
            const int top = g.n3() - 1;
            for (std::size_t p = 0; p < g.plane_size(); ++p)
                qtr[p] = law_.q(stage.R[g.idx(top, 0, 0) + p]);
        }
        if (forcing_ && forcing_->plate) forcing_->plate(s_, u.t, qtr);
        d.qhat.resize(s_.spectral().cplane_size());
        s_.spectral().forward_plane(qtr.data(), d.qhat.data());
        s_.spectral().dealias_spec(d.qhat.data());
        if (forcing_ && forcing_->freeze_plate)
            std::fill(d.qhat.begin(), d.qhat.end(), std::complex<double>(0.0));
        // write the enforced stage velocity back (stage states are corrected)
        u.v = stage.v;
        u.R = stage.R;
    };

    // exp(A s) applied to a derivative contribution (0, qhat)
    auto exp_on_q = [&](const std::vector<double>& tab,
                        const std::vector<std::complex<double>>& qhat, PlateSpec& out) {
        const std::size_t nm = qhat.size();
        out.w.resize(nm);
        out.wt.resize(nm);
        for (std::size_t m = 0; m < nm; ++m) {
            out.w[m] = tab[4 * m + 1] * qhat[m];
            out.wt[m] = tab[4 * m + 3] * qhat[m];
        }
    };

    Stage u1;
    u1.t = st.t;
    u1.v = st.v;
    u1.R = st.R;
    plate_to_spec(s_, st.w, st.w_t, u1.p);

    Deriv k1;
    eval(u1, k1, true);
    const PlateSpec pn = u1.p; // spectral plate state at t_n

    // U2 = E_half (u_n + dt/2 k1)
    Stage u2;
    u2.t = st.t + dt / 2.0;
    u2.v = u1.v;
    u2.R = u1.R;
    for (int i = 0; i < 3; ++i) K.axpy(n, dt / 2.0, k1.dv[i].data(), u2.v[i].data());
    K.axpy(n, dt / 2.0, k1.dR.data(), u2.R.data());
    u2.p = pn;
    for (std::size_t m = 0; m < k1.qhat.size(); ++m) u2.p.wt[m] += dt / 2.0 * k1.qhat[m];
    apply_exp(exp_half_, u2.p);

    Deriv k2;
    eval(u2, k2, opt_.enforce_stages);

    // U3 = E_half u_n + dt/2 k2
    Stage u3;
    u3.t = st.t + dt / 2.0;
    u3.v = u1.v;
    u3.R = u1.R;
    for (int i = 0; i < 3; ++i) K.axpy(n, dt / 2.0, k2.dv[i].data(), u3.v[i].data());
    K.axpy(n, dt / 2.0, k2.dR.data(), u3.R.data());
    u3.p = pn;
    apply_exp(exp_half_, u3.p);
    for (std::size_t m = 0; m < k2.qhat.size(); ++m) u3.p.wt[m] += dt / 2.0 * k2.qhat[m];

    Deriv k3;
    eval(u3, k3, opt_.enforce_stages);

    // U4 = E_full u_n + dt E_half k3
    Stage u4;
    u4.t = st.t + dt;
    u4.v = u1.v;
    u4.R = u1.R;
    for (int i = 0; i < 3; ++i) K.axpy(n, dt, k3.dv[i].data(), u4.v[i].data());
    K.axpy(n, dt, k3.dR.data(), u4.R.data());
    u4.p = pn;
    apply_exp(exp_full_, u4.p);
    {
        PlateSpec tmp;
        exp_on_q(exp_half_, k3.qhat, tmp);
        for (std::size_t m = 0; m < tmp.w.size(); ++m) {
            u4.p.w[m] += dt * tmp.w[m];
            u4.p.wt[m] += dt * tmp.wt[m];
        }
    }

    Deriv k4;
    eval(u4, k4, opt_.enforce_stages);

    // combine: u_{n+1} = E u_n + dt/6 (E k1 + 2 E_half k2 + 2 E_half k3 + k4)
    for (int i = 0; i < 3; ++i) {
        st.v[i] = u1.v[i];
        K.axpy(n, dt / 6.0, k1.dv[i].data(), st.v[i].data());
        K.axpy(n, dt / 3.0, k2.dv[i].data(), st.v[i].data());
        K.axpy(n, dt / 3.0, k3.dv[i].data(), st.v[i].data());
        K.axpy(n, dt / 6.0, k4.dv[i].data(), st.v[i].data());
    }
    st.R = u1.R;
    K.axpy(n, dt / 6.0, k1.dR.data(), st.R.data());
    K.axpy(n, dt / 3.0, k2.dR.data(), st.R.data());
    K.axpy(n, dt / 3.0, k3.dR.data(), st.R.data());
    K.axpy(n, dt / 6.0, k4.dR.data(), st.R.data());

    PlateSpec pout = pn;
    apply_exp(exp_full_, pout);
    {
        PlateSpec t1, t2, t3;
        exp_on_q(exp_full_, k1.qhat, t1);
        exp_on_q(exp_half_, k2.qhat, t2);
        exp_on_q(exp_half_, k3.qhat, t3);
        for (std::size_t m = 0; m < pout.w.size(); ++m) {
            pout.w[m] += dt / 6.0 * (t1.w[m] + 2.0 * t2.w[m] + 2.0 * t3.w[m]);
            pout.wt[m] += dt / 6.0 * (t1.wt[m] + 2.0 * t2.wt[m] + 2.0 * t3.wt[m] + k4.qhat[m]);
        }
    }
    plate_to_phys(s_, pout, st.w, st.w_t);

    st.t += dt;
    st.refresh_maps(s_, ext_, opt_.jmin_breakdown);
    if (!(forcing_ && forcing_->freeze_fluid)) {
        if (has_slip) forcing_->kinematic_slip(s_, st.t, slip);
        last_corr_ = enforce_boundary_conditions(s_, st, has_slip ? &slip : nullptr);
    } else {
        last_corr_ = 0.0;
    }
}

double cfl_dt(const Space& s, const PressureLaw& law, const State& st, double safety) {
    const Grid& g = s.grid();
    const ScalarField c3 = advective_c3(s, st);
    const double dx1 = 2.0 * Grid::pi() / g.n1();
    const double dx2 = 2.0 * Grid::pi() / g.n2();
    const double dx3 = g.h3();
    double dt = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double cs = std::sqrt(law.qp(st.R[i]));
        const double a3n = std::sqrt(st.maps.a31[i] * st.maps.a31[i] +
                                     st.maps.a32[i] * st.maps.a32[i] +
                                     st.maps.a33[i] * st.maps.a33[i]);
        const double s1 = std::fabs(st.v[0][i]) + cs;
        const double s2 = std::fabs(st.v[1][i]) + cs;
        const double s3 = std::fabs(c3[i]) + cs * a3n;
        dt = std::min(dt, dx1 / s1);
        dt = std::min(dt, dx2 / s2);
        dt = std::min(dt, dx3 / s3);
    }
    return safety * dt;
}

} // namespace ape

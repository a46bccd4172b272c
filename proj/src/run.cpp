#include "ape/run.hpp"

#include "ape/diagnostics.hpp"
#include "ape/initdata.hpp"
#include "ape/io.hpp"
#include "ape/ledger.hpp"
#include "ape/stepper.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>

namespace ape {

namespace {

Snapshot to_snapshot(const Grid& g, const State& st) {
    Snapshot s;
    s.n1 = g.n1();
    s.n2 = g.n2();
    s.n3 = g.n3();
    s.time = st.t;
    auto put = [&](const char* name, const double* p, std::size_t n) {
        s.fields.emplace_back(name, std::vector<double>(p, p + n));
    };
    put("v1", st.v[0].data(), g.size());
    put("v2", st.v[1].data(), g.size());
    put("v3", st.v[2].data(), g.size());
    put("R", st.R.data(), g.size());
    put("w", st.w.data(), g.plane_size());
    put("w_t", st.w_t.data(), g.plane_size());
    return s;
}

// mass of the moving domain, integral of J R
double mass_of(const Space& s, const State& st) {
    return s.integral(s.mul(st.maps.jac, st.R));
}

std::string snap_name(int idx) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "snap_%06d.apev", idx);
    return buf;
}

} // namespace

int run_exit_code(RunStatus s) {
    switch (s) {
        case RunStatus::Completed: return 0;
        case RunStatus::MonitorTripped: return 3;
        case RunStatus::Blowup: return 4;
    }
    return 1;
}

RunResult run(const Config& cfg, const std::string& outdir, std::vector<State>* collect,
              const Forcing* forcing, const State* initial_override) {
    const Grid grid(cfg.N1, cfg.N2, cfg.N3);
    Space space(grid);
    HarmonicExtension ext(space);
    PressureLaw law{cfg.gamma, cfg.Rbar, cfg.m0, cfg.M0};

    State st(space);
    if (initial_override) {
        st = *initial_override;
    } else {
        const InitialData data = make_initial_data(space, cfg.init_family, cfg.init_amplitude,
                                                   law);
        // jet construction validates the data (range + compatibility)
        build_jet(space, ext, law, data.v0, data.R0, data.w1);
        st = state_from_initial(space, ext, data);
    }

    StepperOptions opt;
    Stepper stepper(space, ext, law, opt, forcing);

    double dt = cfg.dt > 0.0 ? cfg.dt : cfl_dt(space, law, st, cfg.cfl_safety);
    int nsteps = std::max(1, static_cast<int>(std::ceil(cfg.T / dt - 1e-12)));
    dt = cfg.T / nsteps;

    RunResult res;
    res.dt = dt;
    res.mass_initial = mass_of(space, st);

    const bool files = !outdir.empty();
    std::unique_ptr<CsvWriter> mon_csv, norms_csv;
    std::unique_ptr<CsvWriter> ledger_csv[4];
    const LedgerKind kinds[4] = {LedgerKind::Momentum, LedgerKind::Plate,
                                 LedgerKind::PlateWeighted, LedgerKind::Density};
    if (files) {
        std::filesystem::create_directories(outdir);
        mon_csv = std::make_unique<CsvWriter>(
            outdir + "/monitors.csv",
            std::vector<std::string>{"t", "J_min", "J_max", "R_min", "R_max", "qp_min", "qp_max",
                                     "aI_H2", "kin_res", "kin_corr", "tan_g0", "tan_g1"});
    }

    JetWindow win(cfg.window, cfg.snap_every * dt);
    int snap_idx = 0;
    auto emit_sample = [&](const State& s0) {
        if (collect) collect->push_back(s0);
        if (files && cfg.write_snapshots)
            write_snapshot(outdir + "/" + snap_name(snap_idx), to_snapshot(grid, s0));
        ++snap_idx;
        win.push(s0);
        if (win.full()) {
            // norms at the window center
            const MonitorReport mr = monitor(space, law, win.center(), &win);
            if (files) {
                if (!norms_csv) {
                    std::vector<std::string> cols{"t"};
                    for (const auto& [k, v] : mr.norms) cols.push_back(k);
                    norms_csv = std::make_unique<CsvWriter>(outdir + "/norms.csv", cols);
                }
                std::vector<double> row{win.center().t};
                for (const auto& [k, v] : mr.norms) row.push_back(v);
                norms_csv->row(row);
                for (int L = 0; L < 4; ++L) {
                    const LedgerRow lr = energy_ledger(space, law, win, kinds[L], cfg.ledger_m);
                    if (!ledger_csv[L]) {
                        std::vector<std::string> cols{"t", "dEdt", "rhs_sum", "residual"};
                        for (const auto& nm : lr.names) cols.push_back(nm);
                        ledger_csv[L] = std::make_unique<CsvWriter>(
                            outdir + "/ledger_" + ledger_name(kinds[L]) + ".csv", cols);
                    }
                    std::vector<double> row2{lr.t, lr.dEdt, lr.rhs_sum, lr.identity_residual};
                    for (const double v : lr.values) row2.push_back(v);
                    ledger_csv[L]->row(row2);
                }
            }
        }
    };

    auto monitor_row = [&](const State& s0, double corr) {
        const MonitorReport mr = monitor(space, law, s0, nullptr);
        res.max_kinematic_residual = std::max(res.max_kinematic_residual, mr.kinematic_residual);
        res.max_tangency_g0 = std::max(res.max_tangency_g0, mr.tangency_g0);
        res.max_tangency_g1 = std::max(res.max_tangency_g1, mr.tangency_g1);
        if (mon_csv)
            mon_csv->row({s0.t, mr.J_min, mr.J_max, mr.R_min, mr.R_max, mr.qp_min, mr.qp_max,
                          mr.a_minus_I_H2, mr.kinematic_residual, corr, mr.tangency_g0,
                          mr.tangency_g1});
        return mr.first_violation(law, cfg.monitor_aI);
    };

    auto write_status = [&](const RunResult& r) {
        if (!files) return;
        std::ofstream f(outdir + "/run_status.txt");
        f << "status=";
        switch (r.status) {
            case RunStatus::Completed: f << "completed"; break;
            case RunStatus::MonitorTripped: f << "monitor-tripped"; break;
            case RunStatus::Blowup: f << "numerical-blowup"; break;
        }
        f << "\ntripped=" << r.tripped << "\nt_end=" << format_double(r.t_end)
          << "\ndt=" << format_double(r.dt) << "\nsteps=" << r.steps
          << "\nmass_initial=" << format_double(r.mass_initial)
          << "\nmass_final=" << format_double(r.mass_final)
          << "\nmax_kin_res=" << format_double(r.max_kinematic_residual) << "\n";
    };

    emit_sample(st);
    {
        const std::string bad = monitor_row(st, 0.0);
        if (!bad.empty()) {
            res.status = RunStatus::MonitorTripped;
            res.tripped = bad;
            res.t_end = st.t;
            res.mass_final = mass_of(space, st);
            write_status(res);
            return res;
        }
    }

    for (int step = 1; step <= nsteps; ++step) {
        try {
            stepper.step(st, dt);
        } catch (const GeometryBreakdown&) {
            res.status = RunStatus::MonitorTripped;
            res.tripped = "J-breakdown";
            break;
        } catch (const PressureRangeError&) {
            res.status = RunStatus::MonitorTripped;
            res.tripped = "R-range";
            break;
        }
        res.steps = step;
        res.t_end = st.t;

        // blowup check
        double big = 0.0;
        for (int i = 0; i < 3; ++i) big = std::max(big, space.max_abs(st.v[i]));
        big = std::max(big, space.max_abs(st.R));
        if (!std::isfinite(big) || big > cfg.blowup_max) {
            res.status = RunStatus::Blowup;
            break;
        }

        if (step % cfg.sample_every == 0 || step == nsteps) {
            const std::string bad = monitor_row(st, stepper.last_correction());
            if (!bad.empty()) {
                res.status = RunStatus::MonitorTripped;
                res.tripped = bad;
                break;
            }
        }
        if (step % cfg.snap_every == 0 || step == nsteps) emit_sample(st);
    }

    res.t_end = st.t;
    res.mass_final = mass_of(space, st);
    write_status(res);
    return res;
}

} // namespace ape

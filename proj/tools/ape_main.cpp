// ape: ALE plate-Euler channel solver and verification harness.
//
// Subcommands:
//   run      --config FILE --out DIR        integrate and write outputs
//   diagnose --traj DIR --out DIR           residuals/ledgers from snapshots
//   mms      --case NAME --levels K --out DIR   convergence study
//   initdata --config FILE [--out DIR]      build and report the initial jet
//   norms    --snap FILE                    Sobolev norm table of a snapshot
//   report   --run DIR [--out DIR]          summary text + SVG plots
//
// Exit codes: 0 success, 2 config error, 3 monitor trip, 4 blowup, 5 I/O.

#include "ape/diagnostics.hpp"
#include "ape/initdata.hpp"
#include "ape/io.hpp"
#include "ape/kernels.hpp"
#include "ape/ledger.hpp"
#include "ape/mms.hpp"
#include "ape/report.hpp"
#include "ape/run.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <memory>

namespace fs = std::filesystem;
using namespace ape;

namespace {

int cmd_run(const std::string& config_path, const std::string& out) {
    const Config cfg = parse_config(config_path);
    const RunResult r = run(cfg, out);
    std::cout << "steps=" << r.steps << " t_end=" << format_double(r.t_end)
              << " dt=" << format_double(r.dt) << " status=";
    switch (r.status) {
        case RunStatus::Completed: std::cout << "completed"; break;
        case RunStatus::MonitorTripped: std::cout << "monitor-tripped(" << r.tripped << ")"; break;
        case RunStatus::Blowup: std::cout << "numerical-blowup"; break;
    }
    std::cout << "\n";
    return run_exit_code(r.status);
}

std::vector<Snapshot> load_traj(const std::string& dir) {
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(dir)) {
        const std::string n = e.path().filename().string();
        if (n.rfind("snap_", 0) == 0 && n.size() > 5 && n.find(".apev") != std::string::npos)
            names.push_back(e.path().string());
    }
    std::sort(names.begin(), names.end());
    std::vector<Snapshot> out;
    for (const auto& n : names) out.push_back(read_snapshot(n));
    if (out.size() < 2) throw IoError("trajectory needs at least 2 snapshots: " + dir);
    return out;
}

State state_from_snapshot(const Space& s, const HarmonicExtension& ext, const Snapshot& snap) {
    State st(s);
    st.t = snap.time;
    auto get = [&](const char* name, double* dst, std::size_t n) {
        const auto& v = snap.field(name);
        if (v.size() != n) throw IoError(std::string("bad field size: ") + name);
        std::copy(v.begin(), v.end(), dst);
    };
    get("v1", st.v[0].data(), s.grid().size());
    get("v2", st.v[1].data(), s.grid().size());
    get("v3", st.v[2].data(), s.grid().size());
    get("R", st.R.data(), s.grid().size());
    get("w", st.w.data(), s.grid().plane_size());
    get("w_t", st.w_t.data(), s.grid().plane_size());
    st.refresh_maps(s, ext);
    return st;
}

int cmd_diagnose(const std::string& traj, const std::string& out, int window_len, int ledger_m) {
    const auto snaps = load_traj(traj);
    const Grid grid(snaps[0].n1, snaps[0].n2, snaps[0].n3);
    Space space(grid);
    HarmonicExtension ext(space);
    PressureLaw law; // default law; runs record no law, defaults match config defaults

    const double spacing = snaps[1].time - snaps[0].time;
    JetWindow win(window_len, spacing);

    fs::create_directories(out);
    CsvWriter gres(out + "/gresidual.csv", {"t", "interior_l2", "gamma1_l2", "gamma0_l2"});
    CsvWriter vort(out + "/vorticity.csv", {"t", "residual_l2"});
    CsvWriter divi(out + "/divergence.csv", {"t", "residual_l2"});
    CsvWriter dcv(out + "/divcurl.csv", {"t", "err_l2", "err_h1", "aI_H2"});
    CsvWriter mon(out + "/monitors.csv",
                  {"t", "J_min", "J_max", "R_min", "R_max", "qp_min", "qp_max", "aI_H2",
                   "kin_res", "tan_g0", "tan_g1"});
    std::unique_ptr<CsvWriter> led[4];
    const LedgerKind kinds[4] = {LedgerKind::Momentum, LedgerKind::Plate,
                                 LedgerKind::PlateWeighted, LedgerKind::Density};

    for (const auto& snap : snaps) {
        win.push(state_from_snapshot(space, ext, snap));
        const State& st = win.full() ? win.center() : win.at(0);
        {
            const MonitorReport r = monitor(space, law, st, nullptr);
            mon.row({st.t, r.J_min, r.J_max, r.R_min, r.R_max, r.qp_min, r.qp_max, r.a_minus_I_H2,
                     r.kinematic_residual, r.tangency_g0, r.tangency_g1});
        }
        if (!win.full()) continue;
        const GResidual gr = g_equation_residual(space, ext, law, win);
        gres.row({win.center().t, gr.interior_l2, gr.gamma1_l2, gr.gamma0_l2});
        const VorticityResidual vr = vorticity_residual(space, win);
        vort.row({win.center().t, vr.residual_l2});
        const ScalarField dres = divergence_identity_residual(space, win);
        divi.row({win.center().t, std::sqrt(space.l2_sq(dres))});
        try {
            const DivCurlResult dc = divcurl_reconstruct(space, win.center());
            dcv.row({win.center().t, dc.err_l2, dc.err_h1, dc.a_minus_I_h2});
        } catch (const GridError&) {
            dcv.row({win.center().t, -1.0, -1.0, a_minus_identity_h2(space, win.center())});
        }
        for (int L = 0; L < 4; ++L) {
            const LedgerRow lr = energy_ledger(space, law, win, kinds[L], ledger_m);
            if (!led[L]) {
                std::vector<std::string> cols{"t", "dEdt", "rhs_sum", "residual"};
                for (const auto& nm : lr.names) cols.push_back(nm);
                led[L] = std::make_unique<CsvWriter>(
                    out + "/ledger_" + ledger_name(kinds[L]) + ".csv", cols);
            }
            std::vector<double> row{lr.t, lr.dEdt, lr.rhs_sum, lr.identity_residual};
            for (const double v : lr.values) row.push_back(v);
            led[L]->row(row);
        }
    }
    std::cout << "diagnosed " << snaps.size() << " snapshots\n";
    return 0;
}

int cmd_mms(const std::string& name, int levels, const std::string& out,
            const std::string& study) {
    const MmsCase mc = build_case(name);
    std::vector<int> n3;
    for (int l = 0; l < levels; ++l) n3.push_back(16 * (1 << l) + 1);
    DtRule rule;
    double T = 0.5;
    if (study == "vertical") {
        rule.kind = DtRule::Kind::Fixed;
        rule.value = 1e-3;
        T = 0.25;
    } else if (study == "temporal") {
        rule.kind = DtRule::Kind::Halving;
        rule.value = T / 40.0;
        n3.assign(levels, 17);
    } else { // joint
        rule.kind = DtRule::Kind::ProportionalH3;
        rule.value = 0.2;
    }
    const auto rows = convergence_study(mc, n3, rule, T);
    fs::create_directories(out);
    write_study_csv(out + "/study.csv", rows);
    std::cout << "case " << name << " (" << study << ")\n";
    std::cout << "h3\tdt\terr_l2\torder\n";
    for (const auto& r : rows)
        std::cout << format_double(r.h3) << "\t" << format_double(r.dt) << "\t"
                  << format_double(r.err_l2) << "\t" << format_double(r.order_l2) << "\n";
    return 0;
}

int cmd_initdata(const std::string& config_path, const std::string& out) {
    const Config cfg = parse_config(config_path);
    const Grid grid(cfg.N1, cfg.N2, cfg.N3);
    Space space(grid);
    HarmonicExtension ext(space);
    PressureLaw law{cfg.gamma, cfg.Rbar, cfg.m0, cfg.M0};
    const InitialData data = make_initial_data(space, cfg.init_family, cfg.init_amplitude, law);
    const InitialJet jet = build_jet(space, ext, law, data.v0, data.R0, data.w1);
    const double e0 = total_energy_E0(space, jet);
    std::cout << "E0=" << format_double(e0) << "\n";
    std::cout << "Rt0_trace_H2=" << format_double(Rt0_trace_H2(space, jet)) << "\n";
    for (int j = 0; j <= 3; ++j) {
        double vn = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double nn = space.sobolev(jet.v_jet[j][i], 3.0 - j);
            vn += nn * nn;
        }
        std::cout << "v_jet" << j << "_H" << (3 - j) << "=" << format_double(std::sqrt(vn))
                  << "  R_jet" << j << "_H" << (3 - j) << "="
                  << format_double(space.sobolev(jet.R_jet[j], 3.0 - j)) << "\n";
    }
    if (!out.empty()) {
        fs::create_directories(out);
        Snapshot s;
        s.n1 = grid.n1();
        s.n2 = grid.n2();
        s.n3 = grid.n3();
        s.time = 0.0;
        auto put = [&](const std::string& nm, const double* p, std::size_t n) {
            s.fields.emplace_back(nm, std::vector<double>(p, p + n));
        };
        for (int j = 0; j <= 3; ++j) {
            for (int i = 0; i < 3; ++i)
                put("v" + std::to_string(i + 1) + "_t" + std::to_string(j),
                    jet.v_jet[j][i].data(), grid.size());
            put("R_t" + std::to_string(j), jet.R_jet[j].data(), grid.size());
        }
        for (int j = 0; j <= 4; ++j)
            put("w_t" + std::to_string(j), jet.w_jet[j].data(), grid.plane_size());
        write_snapshot(out + "/initial_jet.apev", s);
    }
    return 0;
}

int cmd_norms(const std::string& snap_path) {
    const Snapshot snap = read_snapshot(snap_path);
    const Grid grid(snap.n1, snap.n2, snap.n3);
    Space space(grid);
    HarmonicExtension ext(space);
    const State st = state_from_snapshot(space, ext, snap);
    std::cout << "t=" << format_double(st.t) << "\n";
    for (int i = 0; i < 3; ++i)
        std::cout << "v" << i + 1 << "_H3=" << format_double(space.sobolev(st.v[i], 3.0)) << "\n";
    std::cout << "R_H3=" << format_double(space.sobolev(st.R, 3.0)) << "\n";
    std::cout << "w_H5=" << format_double(space.sobolev(st.w, 5.0)) << "\n";
    std::cout << "wt_H4=" << format_double(space.sobolev(st.w_t, 4.0)) << "\n";
    std::cout << "J_min=" << format_double(kernels::active().min_val(st.maps.jac.size(),
                                                                      st.maps.jac.data()))
              << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ALE plate-Euler channel solver and verification harness"};
    app.require_subcommand(1);

    std::string config_path, out_dir, traj_dir, snap_path, run_dir;
    std::string case_name = "flat_fluid", study = "joint";
    int levels = 3, window_len = 9, ledger_m = 0;

    auto* c_run = app.add_subcommand("run", "integrate a configuration");
    c_run->add_option("--config", config_path)->required();
    c_run->add_option("--out", out_dir)->required();

    auto* c_diag = app.add_subcommand("diagnose", "residuals and ledgers from a trajectory");
    c_diag->add_option("--traj", traj_dir)->required();
    c_diag->add_option("--out", out_dir)->required();
    c_diag->add_option("--window", window_len);
    c_diag->add_option("--ledger-m", ledger_m);

    auto* c_mms = app.add_subcommand("mms", "manufactured-solution convergence study");
    c_mms->add_option("--case", case_name);
    c_mms->add_option("--levels", levels);
    c_mms->add_option("--study", study)->check(CLI::IsMember({"joint", "vertical", "temporal"}));
    c_mms->add_option("--out", out_dir)->required();

    auto* c_init = app.add_subcommand("initdata", "build and report the initial jet");
    c_init->add_option("--config", config_path)->required();
    c_init->add_option("--out", out_dir);

    auto* c_norms = app.add_subcommand("norms", "norm table of a snapshot");
    c_norms->add_option("--snap", snap_path)->required();

    auto* c_rep = app.add_subcommand("report", "summary and plots for a run directory");
    c_rep->add_option("--run", run_dir)->required();
    c_rep->add_option("--out", out_dir);

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_run->parsed()) return cmd_run(config_path, out_dir);
        if (c_diag->parsed()) return cmd_diagnose(traj_dir, out_dir, window_len, ledger_m);
        if (c_mms->parsed()) return cmd_mms(case_name, levels, out_dir, study);
        if (c_init->parsed()) return cmd_initdata(config_path, out_dir);
        if (c_norms->parsed()) return cmd_norms(snap_path);
        if (c_rep->parsed()) {
            emit_report(run_dir, out_dir.empty() ? run_dir : out_dir);
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const InitDataError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

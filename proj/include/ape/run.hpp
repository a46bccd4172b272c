#pragma once

// Run orchestration: integrates a configuration to its final time, writes
// snapshots, monitors.csv, norms.csv and the four ledger CSVs, and reports
// how the run ended.

#include "ape/config.hpp"
#include "ape/state.hpp"

#include <optional>
#include <vector>

namespace ape {

enum class RunStatus { Completed, MonitorTripped, Blowup };

struct RunResult {
    RunStatus status = RunStatus::Completed;
    std::string tripped;  // violated monitor, when status == MonitorTripped
    double t_end = 0.0;
    double dt = 0.0;
    int steps = 0;
    double max_kinematic_residual = 0.0;
    double max_tangency_g0 = 0.0, max_tangency_g1 = 0.0;
    double mass_initial = 0.0, mass_final = 0.0;
};

struct Forcing; // ape/rhs.hpp

// outdir may be empty (no files written); collect, when non-null, receives
// the state at snapshot cadence (including t = 0).
RunResult run(const Config& cfg, const std::string& outdir,
              std::vector<State>* collect = nullptr, const Forcing* forcing = nullptr,
              const State* initial_override = nullptr);

int run_exit_code(RunStatus s);

} // namespace ape

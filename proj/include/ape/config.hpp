#pragma once

// Plain-text key = value run configuration ('#' comments). Unknown and
// duplicate keys are rejected with their line number.

#include <stdexcept>
#include <string>

namespace ape {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Config {
    int N1 = 32, N2 = 32, N3 = 33;
    double T = 1.0;
    double dt = 0.0; // 0: use the CFL formula
    double cfl_safety = 0.5;
    double gamma = 1.4, m0 = 0.5, M0 = 2.0, Rbar = 1.0;
    std::string init_family = "steady";
    double init_amplitude = 1e-3;
    unsigned long seed = 1234;
    int snap_every = 8;
    int sample_every = 4;
    int window = 9;
    int ledger_m = 0;
    double enforce_tol = 1e-10;
    double monitor_aI = 0.1;
    double blowup_max = 1e6;
    bool write_snapshots = true;
    std::string mms_case; // set by the mms driver, not by config files
};

Config parse_config(const std::string& path);
Config parse_config_text(const std::string& text, const std::string& origin = "<memory>");
void validate_config(const Config& c);

} // namespace ape

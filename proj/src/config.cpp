#include "ape/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace ape {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

} // namespace

Config parse_config_text(const std::string& text, const std::string& origin) {
    Config c;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key or value");
        if (!seen.insert(key).second)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key +
                              "'");
        auto as_int = [&] {
            try {
                std::size_t pos;
                const int v = std::stoi(val, &pos);
                if (pos != val.size()) throw std::invalid_argument("");
                return v;
            } catch (...) {
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": '" + key +
                                  "' expects an integer, got '" + val + "'");
            }
        };
        auto as_double = [&] {
            try {
                std::size_t pos;
                const double v = std::stod(val, &pos);
                if (pos != val.size()) throw std::invalid_argument("");
                return v;
            } catch (...) {
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": '" + key +
                                  "' expects a number, got '" + val + "'");
            }
        };
        if (key == "N1") c.N1 = as_int();
        else if (key == "N2") c.N2 = as_int();
        else if (key == "N3") c.N3 = as_int();
        else if (key == "T") c.T = as_double();
        else if (key == "dt") c.dt = as_double();
        else if (key == "cfl_safety") c.cfl_safety = as_double();
        else if (key == "gamma") c.gamma = as_double();
        else if (key == "m0") c.m0 = as_double();
        else if (key == "M0") c.M0 = as_double();
        else if (key == "Rbar") c.Rbar = as_double();
        else if (key == "init_family") c.init_family = val;
        else if (key == "init_amplitude") c.init_amplitude = as_double();
        else if (key == "seed") c.seed = static_cast<unsigned long>(as_int());
        else if (key == "snap_every") c.snap_every = as_int();
        else if (key == "sample_every") c.sample_every = as_int();
        else if (key == "window") c.window = as_int();
        else if (key == "ledger_m") c.ledger_m = as_int();
        else if (key == "enforce_tol") c.enforce_tol = as_double();
        else if (key == "monitor_aI") c.monitor_aI = as_double();
        else if (key == "blowup_max") c.blowup_max = as_double();
        else if (key == "write_snapshots") c.write_snapshots = as_int() != 0;
        else
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": unknown key '" + key +
                              "'");
    }
    validate_config(c);
    return c;
}

Config parse_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str(), path);
}

void validate_config(const Config& c) {
    if (!(c.m0 > 0.0))
        throw ConfigError("m0 must be > 0: the density needs a positive lower bound");
    if (!(c.M0 > c.m0)) throw ConfigError("M0 must exceed m0");
    if (!(c.gamma > 1.0)) throw ConfigError("gamma must be > 1");
    if (!(c.T > 0.0)) throw ConfigError("T must be positive");
    if (!(c.Rbar >= c.m0 && c.Rbar <= c.M0)) throw ConfigError("Rbar must lie in [m0, M0]");
    if (c.N1 < 4 || c.N1 % 2 || c.N2 < 4 || c.N2 % 2)
        throw ConfigError("N1, N2 must be even and >= 4");
    if (c.N3 < 5) throw ConfigError("N3 must be >= 5");
    if (c.dt < 0.0) throw ConfigError("dt must be >= 0 (0 selects the CFL formula)");
    if (!(c.cfl_safety > 0.0 && c.cfl_safety <= 1.0))
        throw ConfigError("cfl_safety must be in (0, 1]");
    if (c.snap_every < 1 || c.sample_every < 1)
        throw ConfigError("snap_every and sample_every must be >= 1");
    if (c.window < 3 || c.window % 2 == 0) throw ConfigError("window must be odd and >= 3");
    if (c.ledger_m < 0 || c.ledger_m > 3) throw ConfigError("ledger_m must be in 0..3");
    if (!(c.enforce_tol > 0.0)) throw ConfigError("enforce_tol must be positive");
}

} // namespace ape

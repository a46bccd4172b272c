#pragma once

// Manufactured-solution cases with hand-coded analytic derivatives:
//  flat_fluid: fluid on the identity geometry (w* = 0), time-periodic
//  plate_only: forced traveling plate wave, fluid frozen
//  coupled:    small-amplitude fully coupled triple, kinematically exact
// Each case carries closed-form fields and the forcing that makes the
// triple an exact solution of the forced system.

#include "ape/config.hpp"
#include "ape/rhs.hpp"

#include <functional>
#include <string>
#include <vector>

namespace ape {

struct MmsCase {
    std::string name;
    bool freeze_fluid = false;
    // analytic fields
    std::function<double(double, double, double, double)> v1, v2, v3, R;
    std::function<double(double, double, double)> w, w_t;

    Forcing make_forcing() const;
    State initial_state(const Space& s, const HarmonicExtension& ext) const;
    // the case's plate forcing as a sampled boundary field (for ledgers)
    std::function<BoundaryField(const Space&, double)> plate_source() const;

    struct Errors {
        double fluid_l2 = 0.0, fluid_h1 = 0.0;
        double plate_l2 = 0.0;
        double total_l2 = 0.0, total_h1 = 0.0;
    };
    Errors error_at(const Space& s, const State& st) const;

  private:
    friend MmsCase build_case(const std::string&);
    std::function<void(const Space&, double, VectorField&, ScalarField&)> fluid_forcing;
    std::function<void(const Space&, double, BoundaryField&)> plate_forcing;
};

MmsCase build_case(const std::string& name);

struct ConvergenceRow {
    double h3 = 0.0, dt = 0.0;
    double err_l2 = 0.0, err_h1 = 0.0;
    double order_l2 = 0.0; // vs the previous row
};

struct DtRule {
    enum class Kind { Fixed, ProportionalH3, Halving } kind = Kind::ProportionalH3;
    double value = 0.2; // fixed dt, dt/h3 ratio, or the base dt for halving
};

// one solver run per resolution; errors at the final time
std::vector<ConvergenceRow> convergence_study(const MmsCase& mc, const std::vector<int>& n3_list,
                                              DtRule rule, double T, int n_tan = 16);

void write_study_csv(const std::string& path, const std::vector<ConvergenceRow>& rows);

} // namespace ape

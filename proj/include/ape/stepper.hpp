#pragma once

// One-step integrator: the plate's linear dynamics (stiff biharmonic +
// damping) are integrated exactly per tangential mode through the 2x2
// matrix exponential of [[0,1],[-|k|^4,-|k|^2]]; transport and the pressure
// coupling ride on classical RK4 through the integrating-factor (Lawson)
// construction. Geometry is refreshed from the plate state at every stage,
// and the kinematic/bottom boundary conditions are re-enforced at every
// stage and after the combination.

#include "ape/rhs.hpp"

#include <vector>

namespace ape {

struct StepperOptions {
    bool dealias_rhs = true;
    double jmin_breakdown = 0.1;
    // Re-enforce the boundary conditions at every stage (and after the
    // combination). The correction is spread over a smooth boundary layer;
    // stage-level projection keeps each derivative evaluation on the
    // kinematic manifold so the correction stays at the drift scale.
    bool enforce_stages = true;
};

class Stepper {
  public:
    Stepper(const Space& s, const HarmonicExtension& ext, const PressureLaw& law,
            StepperOptions opt = {}, const Forcing* forcing = nullptr);

    // advance by dt; st.maps is fresh on return
    void step(State& st, double dt);

    // max-norm of the top-layer kinematic correction applied in the last step
    double last_correction() const { return last_corr_; }

    const PressureLaw& law() const { return law_; }
    const Space& space() const { return s_; }
    const HarmonicExtension& extension() const { return ext_; }

  private:
    const Space& s_;
    const HarmonicExtension& ext_;
    PressureLaw law_;
    StepperOptions opt_;
    const Forcing* forcing_;
    double last_corr_ = 0.0;

    double table_dt_ = -1.0;
    // per-mode 2x2 exponentials at dt and dt/2, entries (e11,e12,e21,e22)
    std::vector<double> exp_full_, exp_half_;
    void build_exp_tables(double dt);
};

// dt = safety * min over nodes and directions of dx_d / s_d with
// s_d = |c_d| + sqrt(q'(R)) * ||a_{d,.}||_2 (acoustic speed in ALE units).
double cfl_dt(const Space& s, const PressureLaw& law, const State& st, double safety);

} // namespace ape

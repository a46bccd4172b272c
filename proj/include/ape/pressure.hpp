#pragma once

// Barotropic pressure law q(R) = (R^gamma - Rbar^gamma)/gamma, normalized so
// q(Rbar) = 0. q' = R^(gamma-1) is uniformly positive on [m0/2, 2*M0].

#include "ape/grid.hpp"

#include <string>

namespace ape {

struct PressureRangeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PressureLaw {
    double gamma = 1.4;
    double Rbar = 1.0;
    double m0 = 0.5;
    double M0 = 2.0;

    double q(double R) const;
    double qp(double R) const;   // q'
    double qpp(double R) const;  // q''
    double qppp(double R) const; // q'''

    double c1() const; // min of q' on [m0/2, 2 M0]
    double c2() const; // max of q' on [m0/2, 2 M0]

    // admissible evaluation range [m0/2, 2 M0]
    bool admissible(double R) const;
};

// Pointwise evaluation of (q, q', q'') over a field; reports the first
// out-of-range node by grid index.
void pressure_eval(const PressureLaw& law, const Grid& g, const ScalarField& R, ScalarField* q,
                   ScalarField* qp, ScalarField* qpp);

} // namespace ape

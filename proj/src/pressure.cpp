#include "ape/pressure.hpp"

#include <cmath>

namespace ape {

double PressureLaw::q(double R) const {
    return (std::pow(R, gamma) - std::pow(Rbar, gamma)) / gamma;
}

double PressureLaw::qp(double R) const { return std::pow(R, gamma - 1.0); }

double PressureLaw::qpp(double R) const { return (gamma - 1.0) * std::pow(R, gamma - 2.0); }

double PressureLaw::qppp(double R) const {
    return (gamma - 1.0) * (gamma - 2.0) * std::pow(R, gamma - 3.0);
}

double PressureLaw::c1() const { return qp(m0 / 2.0); }
double PressureLaw::c2() const { return qp(2.0 * M0); }

bool PressureLaw::admissible(double R) const { return R >= m0 / 2.0 && R <= 2.0 * M0; }

void pressure_eval(const PressureLaw& law, const Grid& g, const ScalarField& R, ScalarField* q,
                   ScalarField* qp, ScalarField* qpp) {
    for (int i3 = 0; i3 < g.n3(); ++i3)
        for (int i2 = 0; i2 < g.n2(); ++i2)
            for (int i1 = 0; i1 < g.n1(); ++i1) {
                const std::size_t at = g.idx(i3, i2, i1);
                const double r = R[at];
                if (!law.admissible(r))
                    throw PressureRangeError(
                        "density outside the admissible pressure range at node (" +
                        std::to_string(i3) + "," + std::to_string(i2) + "," + std::to_string(i1) +
                        "): R = " + std::to_string(r));
                if (q) (*q)[at] = law.q(r);
                if (qp) (*qp)[at] = law.qp(r);
                if (qpp) (*qpp)[at] = law.qpp(r);
            }
}

} // namespace ape

#pragma once

// Energy-identity ledgers: each evaluates every labeled term of one exact
// identity satisfied by the coupled system (with d_t^3 generalized to
// d_t^m) and reports the identity defect. m = 3 reproduces the identities
// as derived; m = 0 is the numerically robust default.

#include "ape/pressure.hpp"
#include "ape/window.hpp"

#include <string>
#include <vector>

namespace ape {

enum class LedgerKind { Momentum, Plate, PlateWeighted, Density };

struct LedgerRow {
    double t = 0.0;
    std::vector<std::string> names;
    std::vector<double> values;
    double dEdt = 0.0;
    double rhs_sum = 0.0;           // signed sum of the labeled terms
    double identity_residual = 0.0; // |dEdt - rhs_sum| (incl. dissipation)
    double value(const std::string& name) const;
};

// optional extra plate pressure source (manufactured forcing), evaluated
// per window sample; added to the q trace when forming I_B terms
using PlateSource = std::function<BoundaryField(const Space&, double)>;

LedgerRow energy_ledger(const Space& s, const PressureLaw& law, const JetWindow& win,
                        LedgerKind which, int m, const PlateSource* plate_src = nullptr);

const char* ledger_name(LedgerKind k);

} // namespace ape

#include "ape/state.hpp"

#include <cmath>

namespace ape {

BoundaryField State::kinematic_residual(const Space& s) const {
    const Grid& g = s.grid();
    BoundaryField res(g, Boundary::Top);
    const int top = g.n3() - 1;
    for (std::size_t p = 0; p < g.plane_size(); ++p) {
        const std::size_t at = g.idx(top, 0, 0) + p;
        const double bv = -maps.d1psi[at] * v[0][at] - maps.d2psi[at] * v[1][at] + v[2][at];
        res[p] = bv - w_t[p];
    }
    return res;
}

double State::kinematic_residual_l2(const Space& s) const {
    return std::sqrt(s.l2_sq(kinematic_residual(s)));
}

} // namespace ape

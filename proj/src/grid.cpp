#include "ape/grid.hpp"

#include <cmath>
#include <string>

namespace ape {

double Grid::pi() { return 3.14159265358979323846; }

Grid::Grid(int n1, int n2, int n3) : n1_(n1), n2_(n2), n3_(n3) {
    if (n1 < 4 || n1 % 2 != 0 || n2 < 4 || n2 % 2 != 0)
        throw GridError("tangential sizes must be even and >= 4");
    if (n3 < 5) throw GridError("need at least 5 vertical nodes");
    h3_ = 1.0 / (n3 - 1);
    tanw_ = (2.0 * pi()) * (2.0 * pi()) / (static_cast<double>(n1) * n2);

    // Composite Simpson for odd n3, 4th-order Gregory end-corrected
    // trapezoid otherwise. Both sum to (n3-1) exactly.
    vw_.assign(n3, 0.0);
    if (n3 % 2 == 1) {
        vw_[0] = vw_[n3 - 1] = 1.0 / 3.0;
        for (int j = 1; j < n3 - 1; ++j) vw_[j] = (j % 2 == 1) ? 4.0 / 3.0 : 2.0 / 3.0;
    } else {
        if (n3 < 8) throw GridError("even vertical node counts need n3 >= 8");
        for (int j = 0; j < n3; ++j) vw_[j] = 1.0;
        const double c[3] = {3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0};
        for (int j = 0; j < 3; ++j) {
            vw_[j] = c[j];
            vw_[n3 - 1 - j] = c[j];
        }
    }
    for (double& w : vw_) w *= h3_;
}

void check_finite(const double* x, std::size_t n, const char* what) {
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(x[i]))
            throw GridError(std::string("non-finite value in ") + what);
}

} // namespace ape

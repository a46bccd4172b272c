#pragma once

// Vertical finite differences on the uniform x3 grid: 4th-order centered
// stencils with one-sided closures of the same order at the endpoints.
// Stencil weights come from Fornberg's algorithm.

#include "ape/grid.hpp"

#include <vector>

namespace ape {

// Fornberg weights for the m-th derivative at point xi from nodes x.
std::vector<double> fornberg_weights(double xi, const std::vector<double>& x, int m);

class VDeriv {
  public:
    explicit VDeriv(const Grid& g);

    // out = d^order f / dx3^order, order 1 or 2
    void apply(const Grid& g, const ScalarField& f, int order, ScalarField& out) const;
    // same stencils applied to a single vertical profile
    void apply_profile(const std::vector<double>& f, int order, std::vector<double>& out) const;

    struct Row {
        int start;
        std::vector<double> w;
    };
    const std::vector<Row>& rows(int order) const { return order == 1 ? r1_ : r2_; }

  private:
    int n3_;
    std::vector<Row> r1_, r2_;
};

} // namespace ape

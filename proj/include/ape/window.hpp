#pragma once

// Ring buffer of consecutive states at uniform spacing with centered
// finite-difference weights in time. Supplies every d_t^j a diagnostic
// needs without re-deriving right-hand-side cascades.

#include "ape/state.hpp"

#include <deque>
#include <functional>

namespace ape {

class JetWindow {
  public:
    JetWindow(int length, double spacing);

    void push(State st);
    bool full() const { return static_cast<int>(buf_.size()) == len_; }
    int length() const { return len_; }
    double spacing() const { return dt_; }

    const State& at(int i) const { return buf_[i]; }
    const State& center() const { return buf_[len_ / 2]; }

    // Fornberg weights for d_t^j evaluated at sample i (default: center).
    std::vector<double> weights(int j, int at = -1) const;

    // d_t^j of a per-sample scalar sequence at the center
    double ddt(int j, const std::vector<double>& samples) const;

    // d_t^j at sample `at` of a field-valued sampler (called once per sample)
    ScalarField ddt_field(const Space& s, int j,
                          const std::function<ScalarField(const State&)>& sample,
                          int at = -1) const;
    BoundaryField ddt_boundary(const Space& s, int j,
                               const std::function<BoundaryField(const State&)>& sample,
                               int at = -1) const;

  private:
    int len_;
    double dt_;
    std::deque<State> buf_;
};

} // namespace ape

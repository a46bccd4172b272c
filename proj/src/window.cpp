#include "ape/window.hpp"

#include "ape/kernels.hpp"
#include "ape/vderiv.hpp"

namespace ape {

JetWindow::JetWindow(int length, double spacing) : len_(length), dt_(spacing) {
    if (length < 3 || length % 2 == 0) throw GridError("window length must be odd and >= 3");
    if (!(spacing > 0.0)) throw GridError("window spacing must be positive");
}

void JetWindow::push(State st) {
    buf_.push_back(std::move(st));
    if (static_cast<int>(buf_.size()) > len_) buf_.pop_front();
}

std::vector<double> JetWindow::weights(int j, int at) const {
    if (!full()) throw GridError("window underfilled");
    if (2 * j + 1 > len_) throw GridError("window too short for requested derivative order");
    if (at < 0) at = len_ / 2;
    std::vector<double> nodes(len_);
    for (int i = 0; i < len_; ++i) nodes[i] = i * dt_;
    return fornberg_weights(at * dt_, nodes, j);
}

double JetWindow::ddt(int j, const std::vector<double>& samples) const {
    const auto w = weights(j);
    double acc = 0.0;
    for (int i = 0; i < len_; ++i) acc += w[i] * samples[i];
    return acc;
}

ScalarField JetWindow::ddt_field(const Space& s, int j,
                                 const std::function<ScalarField(const State&)>& sample,
                                 int at) const {
    const auto w = weights(j, at);
    ScalarField acc(s.grid());
    const auto& K = kernels::active();
    for (int i = 0; i < len_; ++i) {
        const ScalarField f = sample(buf_[i]);
        K.axpy(acc.size(), w[i], f.data(), acc.data());
    }
    return acc;
}

BoundaryField JetWindow::ddt_boundary(const Space& s, int j,
                                      const std::function<BoundaryField(const State&)>& sample,
                                      int at) const {
    const auto w = weights(j, at);
    BoundaryField acc(s.grid(), Boundary::Top);
    const auto& K = kernels::active();
    for (int i = 0; i < len_; ++i) {
        const BoundaryField f = sample(buf_[i]);
        K.axpy(acc.size(), w[i], f.data(), acc.data());
    }
    return acc;
}

} // namespace ape

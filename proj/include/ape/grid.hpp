#pragma once

// Tensor-product grid on Omega = T^2 x [0,1]: Fourier collocation in x1, x2
// (period 2*pi) and a uniform vertical node set including both endpoints.
// Fields are flat double arrays indexed (i3, i2, i1) with x1 fastest.

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <vector>

namespace ape {

struct GridError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Boundary { Bottom, Top }; // Gamma_0 (x3=0) and Gamma_1 (x3=1)

class Grid {
  public:
    Grid(int n1, int n2, int n3);

    int n1() const { return n1_; }
    int n2() const { return n2_; }
    int n3() const { return n3_; }
    std::size_t plane_size() const { return static_cast<std::size_t>(n1_) * n2_; }
    std::size_t size() const { return plane_size() * n3_; }
    double h3() const { return h3_; }

    double x1(int i1) const { return 2.0 * pi() * i1 / n1_; }
    double x2(int i2) const { return 2.0 * pi() * i2 / n2_; }
    double x3(int i3) const { return i3 * h3_; }

    std::size_t idx(int i3, int i2, int i1) const {
        return (static_cast<std::size_t>(i3) * n2_ + i2) * n1_ + i1;
    }

    // Composite vertical quadrature weights (4th order), sum = 1.
    const std::vector<double>& vweights() const { return vw_; }
    // Uniform tangential quadrature weight per node, (2*pi)^2 / (n1*n2).
    double tan_weight() const { return tanw_; }

    static double pi();

  private:
    int n1_, n2_, n3_;
    double h3_, tanw_;
    std::vector<double> vw_;
};

class ScalarField {
  public:
    ScalarField() = default;
    explicit ScalarField(const Grid& g) : v_(g.size(), 0.0) {}
    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }
    std::size_t size() const { return v_.size(); }
    double& operator[](std::size_t i) { return v_[i]; }
    double operator[](std::size_t i) const { return v_[i]; }
    void fill(double a) { std::fill(v_.begin(), v_.end(), a); }

  private:
    std::vector<double> v_;
};

struct VectorField {
    VectorField() = default;
    explicit VectorField(const Grid& g) : c{ScalarField(g), ScalarField(g), ScalarField(g)} {}
    ScalarField c[3];
    ScalarField& operator[](int i) { return c[i]; }
    const ScalarField& operator[](int i) const { return c[i]; }
};

// Field on one of the boundary tori; remembers which one.
class BoundaryField {
  public:
    BoundaryField() = default;
    BoundaryField(const Grid& g, Boundary b) : where_(b), v_(g.plane_size(), 0.0) {}
    Boundary where() const { return where_; }
    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }
    std::size_t size() const { return v_.size(); }
    double& operator[](std::size_t i) { return v_[i]; }
    double operator[](std::size_t i) const { return v_[i]; }
    void fill(double a) { std::fill(v_.begin(), v_.end(), a); }

  private:
    Boundary where_ = Boundary::Top;
    std::vector<double> v_;
};

void check_finite(const double* x, std::size_t n, const char* what);

} // namespace ape

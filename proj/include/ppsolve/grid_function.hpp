#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>

namespace ppsolve {

// An omega-periodic real function represented by N samples at t_j = j*omega/N.
// N must be a power of two, at least 64, so grids refine into each other.
class GridFunction {
  public:
    GridFunction(Eigen::ArrayXd values, double omega);

    static GridFunction constant(double value, int n, double omega);
    static GridFunction from_function(const std::function<double(double)>& f, int n, double omega);

    int size() const { return static_cast<int>(values_.size()); }
    double omega() const { return omega_; }
    double node(int j) const { return omega_ * j / size(); }

    const Eigen::ArrayXd& values() const { return values_; }
    Eigen::ArrayXd& values() { return values_; }
    double operator[](int j) const { return values_[j]; }

    double max() const { return values_.maxCoeff(); }
    double min() const { return values_.minCoeff(); }
    double sup_norm() const { return values_.abs().maxCoeff(); }

  private:
    Eigen::ArrayXd values_;
    double omega_;
};

// Trigonometric interpolant through the samples of a GridFunction. Exact on
// band-limited data (frequencies below N/2); used for all off-node evaluation
// of operator iterates. Evaluation is Horner's scheme in
// z = exp(2*pi*i*t/omega), O(N) per point.
class TrigInterpolant {
  public:
    explicit TrigInterpolant(const GridFunction& f);

    double operator()(double t) const;

    /// d/dt of the interpolant.
    double derivative(double t) const;

  private:
    double omega_;
    int n_;
    double a0_;
    double nyquist_;                         // coefficient of cos(N/2 * theta)
    Eigen::ArrayXcd coeff_;                  // c_k = a_k - i b_k, k = 1 .. N/2-1
};

/// Samples of the spectral derivative at the grid nodes.
GridFunction spectral_derivative(const GridFunction& f);

}  // namespace ppsolve

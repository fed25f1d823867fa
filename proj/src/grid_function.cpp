#include "ppsolve/grid_function.hpp"

#include <cmath>
#include <stdexcept>

namespace ppsolve {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

GridFunction::GridFunction(Eigen::ArrayXd values, double omega)
    : values_(std::move(values)), omega_(omega) {
    const int n = static_cast<int>(values_.size());
    if (n < 64 || !power_of_two(n))
        throw std::invalid_argument("grid size must be a power of two >= 64");
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw std::invalid_argument("period must be positive and finite");
    if (!values_.isFinite().all())
        throw std::invalid_argument("grid function has non-finite samples");
}

GridFunction GridFunction::constant(double value, int n, double omega) {
    return GridFunction(Eigen::ArrayXd::Constant(n, value), omega);
}

GridFunction GridFunction::from_function(const std::function<double(double)>& f, int n,
                                         double omega) {
    Eigen::ArrayXd v(n);
    for (int j = 0; j < n; ++j) v[j] = f(omega * j / n);
    return GridFunction(std::move(v), omega);
}

TrigInterpolant::TrigInterpolant(const GridFunction& f)
    : omega_(f.omega()), n_(f.size()) {
    const int half = n_ / 2;
    const Eigen::ArrayXd& v = f.values();
    a0_ = 2.0 * v.mean();
    coeff_.resize(half - 1);
    // Plain O(N^2) DFT; N is a few hundred in practice.
    for (int k = 1; k < half; ++k) {
        double ak = 0.0, bk = 0.0;
        for (int j = 0; j < n_; ++j) {
            const double ang = 2.0 * M_PI * k * j / n_;
            ak += v[j] * std::cos(ang);
            bk += v[j] * std::sin(ang);
        }
        coeff_[k - 1] = std::complex<double>(2.0 * ak / n_, -2.0 * bk / n_);
    }
    double any = 0.0;
    for (int j = 0; j < n_; ++j) any += (j % 2 == 0 ? v[j] : -v[j]);
    nyquist_ = any / n_;
}

double TrigInterpolant::operator()(double t) const {
    const double theta = 2.0 * M_PI * t / omega_;
    const std::complex<double> z(std::cos(theta), std::sin(theta));
    // sum_{k=1}^{half-1} c_k z^k, evaluated as z*(c_1 + z*(c_2 + ...)).
    std::complex<double> acc(0.0, 0.0);
    for (int k = static_cast<int>(coeff_.size()) - 1; k >= 0; --k) acc = acc * z + coeff_[k];
    acc *= z;
    return 0.5 * a0_ + acc.real() + nyquist_ * std::cos(0.5 * n_ * theta);
}

double TrigInterpolant::derivative(double t) const {
    const double theta = 2.0 * M_PI * t / omega_;
    const std::complex<double> z(std::cos(theta), std::sin(theta));
    const std::complex<double> i(0.0, 1.0);
    std::complex<double> acc(0.0, 0.0);
    for (int k = static_cast<int>(coeff_.size()) - 1; k >= 0; --k)
        acc = acc * z + i * double(k + 1) * coeff_[k];
    acc *= z;
    const double dtheta = acc.real() - nyquist_ * 0.5 * n_ * std::sin(0.5 * n_ * theta);
    return dtheta * 2.0 * M_PI / omega_;
}

GridFunction spectral_derivative(const GridFunction& f) {
    TrigInterpolant interp(f);
    Eigen::ArrayXd d(f.size());
    for (int j = 0; j < f.size(); ++j) d[j] = interp.derivative(f.node(j));
    return GridFunction(std::move(d), f.omega());
}

}  // namespace ppsolve

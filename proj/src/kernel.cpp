#include "ppsolve/kernel.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ppsolve/quadrature.hpp"

namespace ppsolve {

CumulativeIntegral::CumulativeIntegral(PeriodicExpr a, int panels, int order)
    : a_(std::move(a)), omega_(a_.period()), panels_(panels), order_(order) {
    if (panels_ < 8) throw std::invalid_argument("cumulative integral needs at least 8 panels");
    h_ = omega_ / panels_;
    nodes_.resize(panels_ + 1);
    nodes_[0] = 0.0;
    const QuadratureRule& rule = gauss_legendre(order_);
    double abs_total = 0.0;
    for (int j = 0; j < panels_; ++j) {
        nodes_[j + 1] = nodes_[j] + gl_panel([&](double x) { return a_(x); }, j * h_, (j + 1) * h_, rule);
        abs_total += gl_panel([&](double x) { return std::abs(a_(x)); }, j * h_, (j + 1) * h_, rule);
    }
    total_ = nodes_[panels_];
    // Positive beyond quadrature roundoff; a zero-mean coefficient like sin(t)
    // integrates to ~1e-17 and must be rejected.
    if (!(total_ > 1e-12 * (1.0 + abs_total)))
        throw std::domain_error("coefficient has nonpositive total integral over one period");
}

double CumulativeIntegral::local(double tau) const {
    int j = static_cast<int>(tau / h_);
    if (j >= panels_) j = panels_ - 1;
    if (j < 0) j = 0;
    const double left = j * h_;
    const QuadratureRule& rule = gauss_legendre(order_);
    if (tau - left <= 0.5 * h_)
        return nodes_[j] + gl_panel([&](double x) { return a_(x); }, left, tau, rule);
    return nodes_[j + 1] - gl_panel([&](double x) { return a_(x); }, tau, left + h_, rule);
}

double CumulativeIntegral::operator()(double t) const {
    if (t >= 0.0 && t <= omega_) return local(t);
    double k = std::floor(t / omega_);
    double tau = t - k * omega_;
    if (tau < 0.0) {  // floating-point guard
        tau += omega_;
        k -= 1.0;
    } else if (tau >= omega_) {
        tau -= omega_;
        k += 1.0;
    }
    return k * total_ + local(tau);
}

double kernel_H(const CumulativeIntegral& ca, double t, double s) {
    const double omega = ca.omega();
    const double slack = 1e-9 * omega;
    if (s < t - slack || s > t + omega + slack)
        throw std::invalid_argument("kernel_H arguments outside the strip t <= s <= t+omega");
    return std::exp(ca(s) - ca(t)) / std::expm1(ca.total());
}

double weighted_period_integral(const CumulativeIntegral& ca,
                                const std::function<double(double)>& g, double t, double tol) {
    const double omega = ca.omega();
    const double h = omega / ca.panels();
    const double prefactor = std::exp(-ca(t)) / std::expm1(ca.total());

    // Panel boundaries: t, every antiderivative grid node inside (t, t+omega), t+omega.
    std::vector<double> bounds;
    bounds.push_back(t);
    for (double n = std::floor(t / h) + 1.0; n * h < t + omega - 1e-12 * omega; n += 1.0)
        bounds.push_back(n * h);
    bounds.push_back(t + omega);

    const QuadratureRule& rule = gauss_legendre(ca.order());
    auto level_sum = [&](int splits) {
        double sum = 0.0;
        for (std::size_t p = 0; p + 1 < bounds.size(); ++p) {
            const double width = (bounds[p + 1] - bounds[p]) / splits;
            for (int m = 0; m < splits; ++m) {
                const double a = bounds[p] + m * width;
                sum += gl_panel([&](double s) { return std::exp(ca(s)) * g(s); }, a, a + width, rule);
            }
        }
        return sum;
    };

    double prev = level_sum(1);
    for (int level = 1; level <= 5; ++level) {
        const double cur = level_sum(1 << level);
        if (std::abs(cur - prev) * std::abs(prefactor) <= tol) return prefactor * cur;
        prev = cur;
    }
    throw std::runtime_error("weighted period integral: tolerance not reached within refinement budget");
}

PeriodicLinearSolver::PeriodicLinearSolver(const CumulativeIntegral& ca, int n, int order)
    : n_(n), order_(order), omega_(ca.omega()) {
    const double h = omega_ / n_;
    const QuadratureRule& rule = gauss_legendre(order_);
    s_.resize(n_ * order_);
    w_exp_.resize(n_ * order_);
    exp_neg_node_.resize(n_);
    for (int j = 0; j < n_; ++j) {
        const double left = j * h;
        exp_neg_node_[j] = std::exp(-ca(left));
        for (int q = 0; q < order_; ++q) {
            const double s = left + 0.5 * h * (rule.nodes[q] + 1.0);
            s_[j * order_ + q] = s;
            w_exp_[j * order_ + q] = 0.5 * h * rule.weights[q] * std::exp(ca(s));
        }
    }
    denom_ = std::expm1(ca.total());
}

GridFunction PeriodicLinearSolver::solve(const Eigen::ArrayXd& g_at_quad) const {
    if (g_at_quad.size() != s_.size())
        throw std::invalid_argument("integrand sample count does not match quadrature points");
    Eigen::ArrayXd integrand = w_exp_ * g_at_quad;
    Eigen::ArrayXd x(n_);
    double prefix = 0.0;
    Eigen::ArrayXd prefix_at(n_);
    for (int j = 0; j < n_; ++j) {
        prefix_at[j] = prefix;
        prefix += integrand.segment(j * order_, order_).sum();
    }
    const double full = prefix;  // F(omega)
    for (int j = 0; j < n_; ++j) x[j] = exp_neg_node_[j] * (full / denom_ + prefix_at[j]);
    return GridFunction(std::move(x), omega_);
}

GridFunction PeriodicLinearSolver::solve_fn(const std::function<double(double)>& f) const {
    Eigen::ArrayXd g(s_.size());
    for (int i = 0; i < s_.size(); ++i) g[i] = f(s_[i]);
    return solve(g);
}

GridFunction periodic_linear_solve(const PeriodicExpr& a, const std::function<double(double)>& f,
                                   int n) {
    CumulativeIntegral ca(a);
    return PeriodicLinearSolver(ca, n).solve_fn(f);
}

namespace {

// Local refinement of an extremum of Delta(u, v) = A(u+v) - A(u) over
// [0, omega]^2, starting from an incumbent grid cell.
template <class Better>
double polish(const CumulativeIntegral& ca, double u, double v, double window, Better better) {
    const double omega = ca.omega();
    auto delta = [&](double uu, double vv) { return ca(uu + vv) - ca(uu); };
    double best = delta(u, v);
    for (int round = 0; round < 6; ++round) {
        const int m = 16;
        double bu = u, bv = v;
        for (int i = 0; i <= m; ++i) {
            for (int j = 0; j <= m; ++j) {
                const double uu = std::clamp(u - window + 2.0 * window * i / m, 0.0, omega);
                const double vv = std::clamp(v - window + 2.0 * window * j / m, 0.0, omega);
                const double d = delta(uu, vv);
                if (better(d, best)) {
                    best = d;
                    bu = uu;
                    bv = vv;
                }
            }
        }
        u = bu;
        v = bv;
        window /= 8.0;
    }
    return best;
}

}  // namespace

double gamma_grid(const CumulativeIntegral& ca, int k) {
    const double omega = ca.omega();
    // A on the refined node set; u = i*omega/k, v = j*omega/k, u+v on the same set.
    Eigen::ArrayXd a_nodes(2 * k + 1);
    for (int i = 0; i <= 2 * k; ++i) a_nodes[i] = ca(omega * i / k);

    double dmax = 0.0, dmin = 0.0;
    int max_i = 0, max_j = 0, min_i = 0, min_j = 0;
    for (int i = 0; i <= k; ++i) {
        for (int j = 0; j <= k; ++j) {
            const double d = a_nodes[i + j] - a_nodes[i];
            if (d > dmax) {
                dmax = d;
                max_i = i;
                max_j = j;
            }
            if (d < dmin) {
                dmin = d;
                min_i = i;
                min_j = j;
            }
        }
    }
    const double cell = omega / k;
    dmax = polish(ca, omega * max_i / k, omega * max_j / k, cell,
                  [](double a, double b) { return a > b; });
    dmin = polish(ca, omega * min_i / k, omega * min_j / k, cell,
                  [](double a, double b) { return a < b; });
    return std::exp(dmin - dmax);
}

double gamma_of(const CumulativeIntegral& ca) {
    const PeriodicExpr& a = ca.source();
    const double omega = ca.omega();
    constexpr int kSamples = 4096;
    double min_v = std::numeric_limits<double>::infinity();
    double max_abs = 0.0;
    for (int j = 0; j < kSamples; ++j) {
        const double v = a(omega * j / kSamples);
        min_v = std::min(min_v, v);
        max_abs = std::max(max_abs, std::abs(v));
    }
    if (min_v >= -1e-12 * (1.0 + max_abs)) return std::exp(-ca.total());
    return gamma_grid(ca, 256);
}

}  // namespace ppsolve

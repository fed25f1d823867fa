#include "ppsolve/shooting.hpp"

#include <cmath>
#include <stdexcept>

namespace ppsolve {

rk::Vec2 rhs(const CoefficientSet& coeffs, double t, const State& s) {
    if (!(s.x > 0.0)) throw std::domain_error("right-hand side requires x > 0");
    const double x = s.x, y = s.y;
    double p = 0.0;
    switch (coeffs.variant()) {
        case SystemVariant::S1: p = coeffs.mu()(t) * x; break;
        case SystemVariant::S2: p = coeffs.mu()(t) * x / (coeffs.alpha()(t) + x); break;
        case SystemVariant::S3:
            p = coeffs.mu()(t) * x * x / ((coeffs.alpha()(t) + x) * (coeffs.beta()(t) + x));
            break;
    }
    rk::Vec2 d;
    d[0] = coeffs.rho()(t) * x * (1.0 - x / coeffs.kappa()(t)) - y * p;
    d[1] = coeffs.sigma()(t) * y * (1.0 - coeffs.eta()(t) * y / x);
    return d;
}

rk::Trajectory integrate(const CoefficientSet& coeffs, const State& s0, double t0, double t1,
                         double rtol, double atol) {
    if (!(s0.x > 0.0 && s0.y > 0.0))
        throw std::invalid_argument("initial state must be strictly positive");
    rk::IntegratorOptions opts;
    opts.rtol = rtol;
    opts.atol = atol;
    opts.stage_guard = [](const rk::Vec2& v) { return v[0] > 0.0 && v[1] > 0.0; };
    auto f = [&](double t, const rk::Vec2& v) { return rhs(coeffs, t, State{v[0], v[1]}); };
    return rk::integrate(f, t0, t1, rk::Vec2(s0.x, s0.y), opts);
}

double poincare_defect(const CoefficientSet& coeffs, const State& s0, double rtol, double atol) {
    rk::Trajectory traj = integrate(coeffs, s0, 0.0, coeffs.omega(), rtol, atol);
    return std::abs(traj.final()[0] - s0.x) + std::abs(traj.final()[1] - s0.y);
}

State averaged_seed(const CoefficientSet& coeffs) {
    const double omega = coeffs.omega();
    auto mean = [&](const PeriodicExpr& e) { return mean_integral(e) / omega; };
    const double rho_m = mean(coeffs.rho());
    const double kappa_m = mean(coeffs.kappa());
    const double mu_m = mean(coeffs.mu());
    const double eta_m = mean(coeffs.eta());
    const double alpha_m = coeffs.variant() != SystemVariant::S1 ? mean(coeffs.alpha()) : 0.0;
    const double beta_m = coeffs.variant() == SystemVariant::S3 ? mean(coeffs.beta()) : 0.0;
    if (!(rho_m > 0.0 && kappa_m > 0.0 && eta_m > 0.0))
        throw std::domain_error("averaged system needs positive rho, kappa, eta means");

    // Prey balance with y = x/eta: rho (1 - x/kappa) = p(x)/eta, strictly
    // decreasing minus strictly increasing, so the root in (0, kappa] is unique.
    auto imbalance = [&](double x) {
        double p = 0.0;
        switch (coeffs.variant()) {
            case SystemVariant::S1: p = mu_m * x; break;
            case SystemVariant::S2: p = mu_m * x / (alpha_m + x); break;
            case SystemVariant::S3: p = mu_m * x * x / ((alpha_m + x) * (beta_m + x)); break;
        }
        return rho_m * (1.0 - x / kappa_m) - p / eta_m;
    };
    double lo = kappa_m * 1e-12, hi = kappa_m;
    if (!(imbalance(lo) > 0.0) || !(imbalance(hi) < 0.0))
        throw std::runtime_error("no positive equilibrium in (0, kappa]");
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (imbalance(mid) > 0.0 ? lo : hi) = mid;
        if (hi - lo <= 1e-16 * kappa_m) break;
    }
    const double x = 0.5 * (lo + hi);
    return State{x, x / eta_m};
}

OrbitResult find_periodic(const CoefficientSet& coeffs, const State& seed, double rtol,
                          double atol, double newton_tol) {
    if (!(seed.x > 0.0 && seed.y > 0.0))
        throw std::invalid_argument("seed must be strictly positive");
    const double omega = coeffs.omega();

    auto period_map = [&](const rk::Vec2& u, double rt, double at) {
        return integrate(coeffs, State{u[0], u[1]}, 0.0, omega, rt, at).final();
    };

    // Jacobian columns at a relaxed tolerance; the displacement G itself at
    // full tolerance, so Newton converges to the fixed point of the accurate map.
    const double rtol_jac = std::max(rtol, 1e-10);
    const double atol_jac = std::max(atol, 1e-12);

    rk::Vec2 u(seed.x, seed.y);
    int steps = 0;
    bool converged = false;
    for (; steps < 50; ++steps) {
        const rk::Vec2 g = period_map(u, rtol, atol) - u;
        if (std::abs(g[0]) + std::abs(g[1]) <= newton_tol) {
            converged = true;
            break;
        }
        Eigen::Matrix2d jac_phi;
        for (int i = 0; i < 2; ++i) {
            const double step = std::max(1e-7, 1e-7 * std::abs(u[i]));
            rk::Vec2 up = u, um = u;
            up[i] += step;
            um[i] -= step;
            if (!(um[0] > 0.0 && um[1] > 0.0))
                throw std::runtime_error("Newton iterate too close to the axes for differencing");
            jac_phi.col(i) = (period_map(up, rtol_jac, atol_jac) -
                              period_map(um, rtol_jac, atol_jac)) /
                             (2.0 * step);
        }
        Eigen::Matrix2d jac_g = jac_phi - Eigen::Matrix2d::Identity();
        const double det = jac_g.determinant();
        if (std::abs(det) < 1e-14 * (1.0 + jac_g.cwiseAbs().maxCoeff()))
            throw std::runtime_error("singular Jacobian of the period-map displacement");
        u += jac_g.partialPivLu().solve(-g);
        if (!(u[0] > 0.0 && u[1] > 0.0))
            throw std::runtime_error("Newton iteration left the positive quadrant");
    }
    if (!converged)
        throw std::runtime_error("Newton iteration on the period map did not converge in 50 steps");

    // Re-measure the defect at the reporting tolerance.
    const double rtol_measure = 1e-13;
    const double atol_measure = std::min(atol, 1e-15);
    rk::Trajectory traj =
        integrate(coeffs, State{u[0], u[1]}, 0.0, omega, rtol_measure, atol_measure);
    const double defect =
        std::abs(traj.final()[0] - u[0]) + std::abs(traj.final()[1] - u[1]);

    OrbitResult result{State{u[0], u[1]}, defect, std::move(traj), steps, rtol_measure};
    return result;
}

}  // namespace ppsolve

#include "ppsolve/cone_operator.hpp"

#include <cmath>
#include <stdexcept>

namespace ppsolve {

namespace {

void check_nonnegative_nonzero(const GridFunction& x) {
    if (x.max() <= 0.0)
        throw std::invalid_argument("operator input is identically zero");
    if (x.min() < -1e-12 * (1.0 + x.sup_norm()))
        throw std::invalid_argument("operator input has negative samples");
}

Eigen::ArrayXd eval_at(const TrigInterpolant& interp, const Eigen::ArrayXd& points,
                       double shift = 0.0) {
    Eigen::ArrayXd out(points.size());
    for (int i = 0; i < points.size(); ++i) out[i] = interp(points[i] - shift);
    return out;
}

Eigen::ArrayXd response_values(const OperatorContext& ctx, const Eigen::ArrayXd& xq,
                               const Eigen::ArrayXd& yq) {
    if ((yq <= 0.0).any())
        throw std::domain_error("response term: denominator integral is not strictly positive");
    switch (ctx.coeffs().variant()) {
        case SystemVariant::S1: return ctx.mu_q() * xq / yq;
        case SystemVariant::S2: return ctx.mu_q() * xq.square() / ((ctx.alpha_q() * xq + 1.0) * yq);
        case SystemVariant::S3:
            return ctx.mu_q() * xq.square() /
                   ((ctx.alpha_q() * xq + 1.0) * (ctx.beta_q() * xq + 1.0) * yq);
    }
    throw std::logic_error("unreachable variant");
}

}  // namespace

OperatorContext::OperatorContext(CoefficientSet coeffs, ConeDomain dom, int n)
    : coeffs_(std::move(coeffs)),
      dom_(std::move(dom)),
      n_(n),
      ca_rho_(coeffs_.rho()),
      ca_sigma_(coeffs_.sigma()),
      rho_solver_(ca_rho_, n_),
      sigma_solver_(ca_sigma_, n_) {
    const Eigen::ArrayXd& s = rho_solver_.quad_points();
    const auto q = s.size();
    rho_over_kappa_q_.resize(q);
    mu_q_.resize(q);
    sigma_eta_q_.resize(q);
    const bool has_alpha = coeffs_.variant() != SystemVariant::S1;
    const bool has_beta = coeffs_.variant() == SystemVariant::S3;
    alpha_q_ = Eigen::ArrayXd::Zero(has_alpha ? q : 0);
    beta_q_ = Eigen::ArrayXd::Zero(has_beta ? q : 0);
    for (int i = 0; i < q; ++i) {
        const double t = s[i];
        rho_over_kappa_q_[i] = coeffs_.rho()(t) / coeffs_.kappa()(t);
        mu_q_[i] = coeffs_.mu()(t);
        sigma_eta_q_[i] = coeffs_.sigma()(t) * coeffs_.eta()(t);
        if (has_alpha) alpha_q_[i] = coeffs_.alpha()(t);
        if (has_beta) beta_q_[i] = coeffs_.beta()(t);
    }
}

GridFunction compute_Y(const OperatorContext& ctx, const GridFunction& x) {
    check_nonnegative_nonzero(x);
    TrigInterpolant interp(x);
    const Eigen::ArrayXd xq = eval_at(interp, ctx.quad_points());
    // Interpolation of a nonnegative function may dip below zero between
    // nodes; clamp so the integrand keeps the sign the kernel argument needs.
    GridFunction y = ctx.sigma_solver().solve(ctx.sigma_eta_q() * xq.max(0.0));
    if (y.min() <= 0.0)
        throw std::runtime_error("compute_Y produced a nonpositive value; "
                                 "sigma*eta hypothesis must hold");
    return y;
}

double response_term(const OperatorContext& ctx, double s, double xs, double ys) {
    if (!(ys > 0.0)) throw std::domain_error("response term requires a positive Y value");
    if (xs < 0.0) throw std::domain_error("response term requires a nonnegative X value");
    const double mu = ctx.coeffs().mu()(s);
    switch (ctx.coeffs().variant()) {
        case SystemVariant::S1: return mu * xs / ys;
        case SystemVariant::S2: return mu * xs * xs / ((ctx.coeffs().alpha()(s) * xs + 1.0) * ys);
        case SystemVariant::S3:
            return mu * xs * xs /
                   ((ctx.coeffs().alpha()(s) * xs + 1.0) * (ctx.coeffs().beta()(s) * xs + 1.0) * ys);
    }
    throw std::logic_error("unreachable variant");
}

GridFunction apply_T(const OperatorContext& ctx, const GridFunction& x) {
    check_nonnegative_nonzero(x);
    TrigInterpolant x_interp(x);
    const Eigen::ArrayXd xq = eval_at(x_interp, ctx.quad_points());

    GridFunction y = ctx.sigma_solver().solve(ctx.sigma_eta_q() * xq.max(0.0));
    TrigInterpolant y_interp(y);
    const Eigen::ArrayXd yq = eval_at(y_interp, ctx.quad_points());

    const Eigen::ArrayXd resp = response_values(ctx, xq.max(0.0), yq);
    return ctx.rho_solver().solve(ctx.rho_over_kappa_q() + resp);
}

GridFunction apply_T_delay(const OperatorContext& ctx, const GridFunction& x, double tau_x,
                           double tau_y) {
    if (ctx.coeffs().variant() != SystemVariant::S2)
        throw std::invalid_argument("delayed operator is defined for S2 only");
    if (tau_x < 0.0 || tau_y < 0.0) throw std::invalid_argument("delays must be nonnegative");
    check_nonnegative_nonzero(x);

    TrigInterpolant x_interp(x);
    const Eigen::ArrayXd xq = eval_at(x_interp, ctx.quad_points());
    const Eigen::ArrayXd xq_shift = eval_at(x_interp, ctx.quad_points(), tau_x);

    // Z(u) = \int_u^{u+omega} H(u,theta;sigma) sigma eta X(theta - tau_x) dtheta
    GridFunction z = ctx.sigma_solver().solve(ctx.sigma_eta_q() * xq_shift.max(0.0));
    TrigInterpolant z_interp(z);
    const Eigen::ArrayXd y_delayed = eval_at(z_interp, ctx.quad_points(), tau_y);

    const Eigen::ArrayXd resp = response_values(ctx, xq.max(0.0), y_delayed);
    return ctx.rho_solver().solve(ctx.rho_over_kappa_q() + resp);
}

std::pair<GridFunction, IterationTrace> damped_picard(const OperatorContext& ctx, GridFunction x0,
                                                      double lambda, double tol, int max_iter) {
    if (!(lambda > 0.0 && lambda <= 1.0))
        throw std::invalid_argument("damping factor must lie in (0, 1]");
    check_nonnegative_nonzero(x0);
    const ConeDomain& dom = ctx.dom();
    const double norm0 = x0.max();
    if (norm0 < dom.r * (1.0 - 1e-12) || norm0 > dom.R * (1.0 + 1e-12))
        throw std::invalid_argument("starting iterate lies outside the shell domain");
    if (x0.min() < dom.gamma * x0.max() - 1e-9 * (1.0 + norm0))
        throw std::invalid_argument("starting iterate is not in the cone");

    const std::optional<Delays>& delays = ctx.coeffs().delays();
    auto step = [&](const GridFunction& x) {
        return delays ? apply_T_delay(ctx, x, delays->tau_x, delays->tau_y) : apply_T(ctx, x);
    };

    IterationTrace trace;
    trace.lambda = lambda;
    GridFunction x = std::move(x0);
    for (int k = 0; k < max_iter; ++k) {
        GridFunction tx = step(x);
        const double residual = (x.values() - tx.values()).abs().maxCoeff();
        trace.residuals.push_back(residual);
        trace.steps = k + 1;
        if (residual <= tol) {
            trace.converged = true;
            return {std::move(x), std::move(trace)};
        }
        x.values() = (1.0 - lambda) * x.values() + lambda * tx.values();
        const double norm = x.max();
        if (norm < dom.r / 10.0 || norm > 10.0 * dom.R)
            throw std::runtime_error("damped Picard iterate escaped [r/10, 10R]: diverging");
    }
    return {std::move(x), std::move(trace)};
}

GridFunction default_seed(const OperatorContext& ctx) {
    GridFunction seed = ctx.dom().baseline;
    if (seed.size() != ctx.grid_size()) {
        TrigInterpolant interp(seed);
        seed = GridFunction::from_function([&](double t) { return interp(t); }, ctx.grid_size(),
                                           ctx.omega());
    }
    const double norm = seed.max();
    if (norm < ctx.dom().r)
        seed.values() *= ctx.dom().r / norm;
    else if (norm > ctx.dom().R)
        seed.values() *= ctx.dom().R / norm;
    return seed;
}

std::pair<GridFunction, GridFunction> reconstruct_xy(const OperatorContext& ctx,
                                                     const GridFunction& x_big) {
    if (x_big.min() <= 0.0)
        throw std::domain_error("reconstruction requires strictly positive X");
    GridFunction y_big = compute_Y(ctx, x_big);
    GridFunction x(Eigen::ArrayXd(1.0 / x_big.values()), x_big.omega());
    GridFunction y(Eigen::ArrayXd(1.0 / y_big.values()), y_big.omega());
    return {std::move(x), std::move(y)};
}

double ode_residual(const OperatorContext& ctx, const GridFunction& x, const GridFunction& y) {
    if (x.min() <= 0.0 || y.min() <= 0.0)
        throw std::domain_error("ode_residual requires strictly positive (x, y)");
    const CoefficientSet& c = ctx.coeffs();
    GridFunction dx = spectral_derivative(x);
    GridFunction dy = spectral_derivative(y);
    double worst = 0.0;
    for (int j = 0; j < x.size(); ++j) {
        const double t = x.node(j);
        const double xv = x[j], yv = y[j];
        double p = 0.0;
        switch (c.variant()) {
            case SystemVariant::S1: p = c.mu()(t) * xv; break;
            case SystemVariant::S2: p = c.mu()(t) * xv / (c.alpha()(t) + xv); break;
            case SystemVariant::S3:
                p = c.mu()(t) * xv * xv / ((c.alpha()(t) + xv) * (c.beta()(t) + xv));
                break;
        }
        const double rhs_x = c.rho()(t) * xv * (1.0 - xv / c.kappa()(t)) - yv * p;
        const double rhs_y = c.sigma()(t) * yv * (1.0 - c.eta()(t) * yv / xv);
        worst = std::max(worst, std::abs(dx[j] - rhs_x));
        worst = std::max(worst, std::abs(dy[j] - rhs_y));
    }
    return worst;
}

}  // namespace ppsolve

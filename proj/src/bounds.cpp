#include "ppsolve/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "ppsolve/cone_operator.hpp"

namespace ppsolve {

namespace {

GridFunction baseline_grid(const CoefficientSet& coeffs, int n) {
    return periodic_linear_solve(
        coeffs.rho(), [&](double s) { return coeffs.rho()(s) / coeffs.kappa()(s); }, n);
}

GridFunction denominator_grid(const CoefficientSet& coeffs, int n) {
    return periodic_linear_solve(
        coeffs.sigma(), [&](double s) { return coeffs.sigma()(s) * coeffs.eta()(s); }, n);
}

}  // namespace

double r_upper(const CoefficientSet& coeffs, int n) { return baseline_grid(coeffs, n).max(); }

double denominator_min(const CoefficientSet& coeffs, int n) {
    const double min = denominator_grid(coeffs, n).min();
    if (!(min > 0.0))
        throw std::domain_error("inner denominator integral is not strictly positive; "
                                "sigma*eta hypothesis violated");
    return min;
}

double R_lower(const CoefficientSet& coeffs, double gamma, int n) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0, 1)");
    CumulativeIntegral ca_rho(coeffs.rho());
    PeriodicLinearSolver solver(ca_rho, n);

    const GridFunction d = denominator_grid(coeffs, n);
    TrigInterpolant d_interp(d);

    auto bracket_max = [&](const std::function<double(double)>& extra) {
        return solver
            .solve_fn([&](double s) { return coeffs.rho()(s) / coeffs.kappa()(s) + extra(s); })
            .max();
    };

    switch (coeffs.variant()) {
        case SystemVariant::S1:
            return bracket_max(
                [&](double s) { return coeffs.mu()(s) / (gamma * d_interp(s)); });
        case SystemVariant::S2:
            return bracket_max([&](double s) {
                return coeffs.mu()(s) / (coeffs.alpha()(s) * gamma * gamma * d_interp(s));
            });
        case SystemVariant::S3: {
            // R > A(R) with A(R) = max_t (b(t) + c(t)/R); A decreasing in R,
            // so the root of R = A(R) is unique and brackets cleanly.
            const GridFunction b = baseline_grid(coeffs, n);
            const double g3 = gamma * gamma * gamma;
            const GridFunction c = solver.solve_fn([&](double s) {
                return coeffs.mu()(s) / (coeffs.alpha()(s) * coeffs.beta()(s) * g3 * d_interp(s));
            });
            auto a_of = [&](double r_val) { return (b.values() + c.values() / r_val).maxCoeff(); };
            double lo = 0.5 * b.max();
            double hi = std::max(2.0 * b.max(), 1.0);
            while (a_of(hi) >= hi) {
                hi *= 2.0;
                if (hi > 1e300) throw std::runtime_error("R bisection bracket failure");
            }
            if (a_of(lo) <= lo) lo = std::min(lo, 1e-12);
            for (int iter = 0; iter < 200; ++iter) {
                const double mid = 0.5 * (lo + hi);
                if (a_of(mid) > mid)
                    lo = mid;
                else
                    hi = mid;
                if (hi - lo <= 1e-12 * std::max(1.0, hi)) break;
            }
            return 0.5 * (lo + hi);
        }
    }
    throw std::logic_error("unreachable variant");
}

ConeDomain choose_radii(const CoefficientSet& coeffs, int n) {
    CumulativeIntegral ca_rho(coeffs.rho());
    const double gamma = gamma_of(ca_rho);
    GridFunction baseline = baseline_grid(coeffs, n);
    const double r = 0.5 * baseline.max();
    const double R = 2.0 * R_lower(coeffs, gamma, n);
    if (!(0.0 < r && r < R))
        throw std::runtime_error("degenerate cone domain: radii are not ordered");
    return ConeDomain{gamma, r, R, coeffs.omega(), std::move(baseline)};
}

GridFunction random_cone_element(const ConeDomain& dom, double target_norm, std::mt19937_64& rng,
                                 int n) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> pos(0.1, 1.0);
    const double omega = dom.omega;
    TrigInterpolant base(dom.baseline);

    for (int attempt = 0; attempt < 100; ++attempt) {
        // Random trig polynomial of low degree, shifted positive.
        constexpr int kDegree = 8;
        Eigen::ArrayXd ak(kDegree + 1), bk(kDegree + 1);
        for (int k = 0; k <= kDegree; ++k) {
            ak[k] = unit(rng);
            bk[k] = unit(rng);
        }
        Eigen::ArrayXd q(n);
        for (int j = 0; j < n; ++j) {
            const double t = omega * j / n;
            double v = 0.0;
            for (int k = 0; k <= kDegree; ++k)
                v += ak[k] * std::cos(2.0 * M_PI * k * t / omega) +
                     bk[k] * std::sin(2.0 * M_PI * k * t / omega);
            q[j] = v;
        }
        q -= q.minCoeff();
        q += 0.1 * (q.maxCoeff() + 1e-12);

        Eigen::ArrayXd candidate(n);
        const double scale = pos(rng) * dom.baseline.max() / q.maxCoeff();
        for (int j = 0; j < n; ++j) candidate[j] = base(omega * j / n) + scale * q[j];

        // Lift into the cone when the min/max ratio falls short.
        const double cmin = candidate.minCoeff();
        const double cmax = candidate.maxCoeff();
        if (cmin < dom.gamma * cmax) {
            const double lift = (dom.gamma * cmax - cmin) / (1.0 - dom.gamma);
            candidate += lift;
        }
        candidate *= target_norm / candidate.maxCoeff();

        if (candidate.minCoeff() >= dom.gamma * candidate.maxCoeff() - 1e-12 * target_norm)
            return GridFunction(std::move(candidate), omega);
    }
    throw std::runtime_error("failed to sample a cone element");
}

ProofStepReport check_proof_steps(const CoefficientSet& coeffs, const ConeDomain& dom, int trials,
                                  std::uint64_t seed) {
    OperatorContext ctx(coeffs, dom);
    std::mt19937_64 rng(seed);
    const double max_b = dom.baseline.max();
    const int n = ctx.grid_size();

    ProofStepReport report;
    report.trials = trials;
    report.worst_inner_margin = std::numeric_limits<double>::infinity();
    report.worst_outer_margin = std::numeric_limits<double>::infinity();
    report.min_operator_norm = std::numeric_limits<double>::infinity();

    const double tol = 1e-10 * (1.0 + max_b);
    for (int trial = 0; trial < trials; ++trial) {
        // Inner shell ||X|| = r: the operator norm must dominate max b, which
        // strictly exceeds r and is independent of X.
        {
            GridFunction x = random_cone_element(dom, dom.r, rng, n);
            GridFunction tx = apply_T(ctx, x);
            const double norm = tx.max();
            report.worst_inner_margin = std::min(report.worst_inner_margin, norm - max_b);
            report.min_operator_norm = std::min(report.min_operator_norm, norm);
            if (norm < max_b - tol || max_b <= dom.r) ++report.inner_shell_failures;
            if (!(norm > 0.0)) ++report.positivity_failures;
            if (tx.min() < dom.gamma * tx.max() - 1e-10) ++report.cone_failures;
        }
        // Outer shell ||X|| = R: the operator must map strictly inside.
        {
            GridFunction x = random_cone_element(dom, dom.R, rng, n);
            GridFunction tx = apply_T(ctx, x);
            const double norm = tx.max();
            report.worst_outer_margin = std::min(report.worst_outer_margin, dom.R - norm);
            if (norm >= dom.R) ++report.outer_shell_failures;
            if (tx.min() < dom.gamma * tx.max() - 1e-10) ++report.cone_failures;
        }
    }
    report.pass = report.inner_shell_failures == 0 && report.outer_shell_failures == 0 &&
                  report.positivity_failures == 0 && report.cone_failures == 0;
    return report;
}

}  // namespace ppsolve

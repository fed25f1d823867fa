#pragma once

#include <utility>
#include <vector>

#include "ppsolve/bounds.hpp"
#include "ppsolve/coefficients.hpp"
#include "ppsolve/kernel.hpp"

namespace ppsolve {

// Precomputed quadrature state for the resolving operator
//
//   T(X)(t) = \int_t^{t+omega} H(t,s;rho) ( rho(s)/kappa(s) + Term(s, X, Y) ) ds,
//   Y(t)    = \int_t^{t+omega} H(t,s;sigma) sigma(s) eta(s) X(s) ds,
//
// whose fixed points X give positive periodic solutions x = 1/X, y = 1/Y.
// The response term per variant:
//
//   S1  mu X / Y
//   S2  mu X^2 / ((alpha X + 1) Y)
//   S3  mu X^2 / ((alpha X + 1)(beta X + 1) Y)
//
// Kernel antiderivatives and all coefficient samples at the quadrature points
// are fixed per context, so one operator application costs two interpolant
// sweeps and two prefix passes. Immutable and shareable across threads.
class OperatorContext {
  public:
    OperatorContext(CoefficientSet coeffs, ConeDomain dom, int n = 512);

    const CoefficientSet& coeffs() const { return coeffs_; }
    const ConeDomain& dom() const { return dom_; }
    int grid_size() const { return n_; }
    double omega() const { return coeffs_.omega(); }
    const CumulativeIntegral& ca_rho() const { return ca_rho_; }
    const CumulativeIntegral& ca_sigma() const { return ca_sigma_; }

    // Internals shared by the free operator functions.
    const PeriodicLinearSolver& rho_solver() const { return rho_solver_; }
    const PeriodicLinearSolver& sigma_solver() const { return sigma_solver_; }
    const Eigen::ArrayXd& quad_points() const { return rho_solver_.quad_points(); }
    const Eigen::ArrayXd& rho_over_kappa_q() const { return rho_over_kappa_q_; }
    const Eigen::ArrayXd& mu_q() const { return mu_q_; }
    const Eigen::ArrayXd& alpha_q() const { return alpha_q_; }
    const Eigen::ArrayXd& beta_q() const { return beta_q_; }
    const Eigen::ArrayXd& sigma_eta_q() const { return sigma_eta_q_; }

  private:
    CoefficientSet coeffs_;
    ConeDomain dom_;
    int n_;
    CumulativeIntegral ca_rho_;
    CumulativeIntegral ca_sigma_;
    PeriodicLinearSolver rho_solver_;
    PeriodicLinearSolver sigma_solver_;
    Eigen::ArrayXd rho_over_kappa_q_, mu_q_, alpha_q_, beta_q_, sigma_eta_q_;
};

/// Y(t) from X: the sigma-kernel integral of sigma*eta*X. Requires X >= 0 and
/// X not identically zero; the output is strictly positive.
GridFunction compute_Y(const OperatorContext& ctx, const GridFunction& x);

/// Pointwise response term of the context's variant; requires Xs >= 0, Ys > 0.
double response_term(const OperatorContext& ctx, double s, double xs, double ys);

/// One application of the resolving operator.
GridFunction apply_T(const OperatorContext& ctx, const GridFunction& x);

/// Delayed Holling-Tanner variant: the response denominator becomes
/// Z(s - tau_y) with Z(u) = \int_u^{u+omega} H(u,theta;sigma) sigma eta
/// X(theta - tau_x) dtheta, using the periodic extension of X. S2 only;
/// tau_x = tau_y = 0 reproduces apply_T exactly.
GridFunction apply_T_delay(const OperatorContext& ctx, const GridFunction& x, double tau_x,
                           double tau_y);

struct IterationTrace {
    std::vector<double> residuals;  // sup norm of X_k - T(X_k) per step
    double lambda = 1.0;
    bool converged = false;
    int steps = 0;
};

/// Damped Picard iteration X_{k+1} = (1-lambda) X_k + lambda T(X_k) from a
/// starting point inside the shell domain. Uses the delayed operator when the
/// context's coefficients carry delays. Throws if the iterate norm escapes
/// [r/10, 10R].
std::pair<GridFunction, IterationTrace> damped_picard(const OperatorContext& ctx,
                                                      GridFunction x0, double lambda, double tol,
                                                      int max_iter);

/// Baseline b(t), rescaled into [r, R] if necessary — the default seed.
GridFunction default_seed(const OperatorContext& ctx);

/// x = 1/X and y = 1/Y(X), both strictly positive.
std::pair<GridFunction, GridFunction> reconstruct_xy(const OperatorContext& ctx,
                                                     const GridFunction& x);

/// Sup norm of the spectral-derivative residual of both equations of the
/// original system at the grid nodes.
double ode_residual(const OperatorContext& ctx, const GridFunction& x, const GridFunction& y);

}  // namespace ppsolve

#pragma once

#include <Eigen/Dense>
#include <functional>

#include "ppsolve/expr.hpp"
#include "ppsolve/grid_function.hpp"

namespace ppsolve {

// Cached antiderivative A(t) = \int_0^t a(tau) dtau of a periodic coefficient
// with positive period mean. Node values are composite Gauss-Legendre panel
// integrals; off-node values re-quadrature from the nearest node, so accuracy
// is uniform in t. A extends to all of R through A(t + omega) = A(t) + total.
class CumulativeIntegral {
  public:
    explicit CumulativeIntegral(PeriodicExpr a, int panels = 256, int order = 8);

    /// A(t) for any real t.
    double operator()(double t) const;

    double total() const { return total_; }
    double omega() const { return omega_; }
    int panels() const { return panels_; }
    int order() const { return order_; }
    const PeriodicExpr& source() const { return a_; }

  private:
    double local(double tau) const;  // A on [0, omega]

    PeriodicExpr a_;
    double omega_;
    int panels_;
    int order_;
    double h_;
    Eigen::ArrayXd nodes_;  // A(t_j), j = 0..panels
    double total_;
};

// Green kernel of the periodic linear problem x' = -a(t) x + f(t):
//
//     H(t, s; a) = exp(A(s) - A(t)) / (exp(A(omega)) - 1),   t <= s <= t+omega
//
// Strictly positive whenever the total integral of a is positive.
double kernel_H(const CumulativeIntegral& ca, double t, double s);

/// \int_t^{t+omega} H(t,s;a) g(s) ds by composite Gauss-Legendre with panels
/// aligned to the antiderivative grid, refined until successive levels agree
/// to `tol`. Throws when the refinement budget is exhausted.
double weighted_period_integral(const CumulativeIntegral& ca,
                                const std::function<double(double)>& g, double t,
                                double tol = 1e-12);

// Tables for evaluating the periodic solution of x' = -a x + f at all N grid
// nodes from one pass of quadrature values. With F(t) = \int_0^t e^{A(s)} f(s) ds,
//
//     x(t) = e^{-A(t)} ( F(omega) / (e^{A(omega)} - 1) + F(t) ),
//
// so a single prefix sum over the panel integrals yields every node value.
// Quadrature points are fixed per (ca, N): N panels of Gauss-Legendre `order`.
class PeriodicLinearSolver {
  public:
    PeriodicLinearSolver(const CumulativeIntegral& ca, int n, int order = 8);

    /// Quadrature abscissae, grouped panel-major: index j*order + q.
    const Eigen::ArrayXd& quad_points() const { return s_; }
    int grid_size() const { return n_; }
    double omega() const { return omega_; }

    /// Solve from integrand samples g(s_q) at quad_points().
    GridFunction solve(const Eigen::ArrayXd& g_at_quad) const;

    /// Solve for a callable f.
    GridFunction solve_fn(const std::function<double(double)>& f) const;

  private:
    int n_;
    int order_;
    double omega_;
    Eigen::ArrayXd s_;             // quad points
    Eigen::ArrayXd w_exp_;         // GL weight * exp(A(s_q))
    Eigen::ArrayXd exp_neg_node_;  // exp(-A(t_j))
    double denom_;                 // exp(A(omega)) - 1
};

/// Unique periodic solution of x' = -a(t) x + f(t) sampled on the N-grid.
GridFunction periodic_linear_solve(const PeriodicExpr& a, const std::function<double(double)>& f,
                                   int n = 512);

// Cone constant gamma_a = min_Omega H / max_Omega H over the strip
// Omega = { 0 <= t <= omega, t <= s <= t+omega }. For a >= 0 the exponent
// A(s)-A(t) sweeps exactly [0, total], so gamma = exp(-total); otherwise a
// dense scan of the strip with local refinement (diagnostics only).
double gamma_of(const CumulativeIntegral& ca);

/// Grid-search gamma: K x K strip scan plus local refinement around the
/// incumbent extrema. Valid for sign-changing coefficients.
double gamma_grid(const CumulativeIntegral& ca, int k);

}  // namespace ppsolve

#pragma once

#include "ppsolve/coefficients.hpp"
#include "ppsolve/dopri5.hpp"

namespace ppsolve {

/// Prey/predator amounts; the systems are singular at x = 0.
struct State {
    double x;
    double y;
};

// A periodic orbit certified by its closure defect at the period.
struct OrbitResult {
    State initial;                // state at t = 0
    double defect;                // |x(0)-x(omega)| + |y(0)-y(omega)|
    rk::Trajectory trajectory;    // dense output over [0, omega], at measure tolerance
    int newton_steps;
    double integrator_tolerance;  // rtol used for the final defect measurement
};

/// Right-hand side of the original (x, y) system at time t.
rk::Vec2 rhs(const CoefficientSet& coeffs, double t, const State& s);

/// Adaptive RK5(4) with dense output; internal stages are kept in the open
/// positive quadrant (step halved otherwise).
rk::Trajectory integrate(const CoefficientSet& coeffs, const State& s0, double t0, double t1,
                         double rtol, double atol);

/// |x(0)-x(omega)| + |y(0)-y(omega)| from a single period integration.
double poincare_defect(const CoefficientSet& coeffs, const State& s0, double rtol, double atol);

/// Positive equilibrium of the system with every coefficient replaced by its
/// period mean: y = x/eta_mean and the scalar prey balance solved by
/// bisection on (0, kappa_mean]. Used to seed the orbit search.
State averaged_seed(const CoefficientSet& coeffs);

/// Newton iteration on G(u) = Phi_omega(u) - u, the period-map displacement.
/// The Jacobian comes from central finite differences (step 1e-7, relative);
/// Jacobian integrations run at a relaxed tolerance, G at full tolerance.
/// The converged orbit's defect is re-measured at rtol = 1e-13.
OrbitResult find_periodic(const CoefficientSet& coeffs, const State& seed, double rtol = 1e-13,
                          double atol = 1e-15, double newton_tol = 1e-12);

}  // namespace ppsolve

#pragma once

#include <cstdint>
#include <random>

#include "ppsolve/coefficients.hpp"
#include "ppsolve/kernel.hpp"

namespace ppsolve {

// Shell domain D = { X in K_gamma : r <= ||X|| <= R } of the existence
// argument, together with the baseline
//
//     b(t) = \int_t^{t+omega} H(t,s;rho) rho(s)/kappa(s) ds,
//
// which bounds the resolving operator from below pointwise.
struct ConeDomain {
    double gamma;  // in (0, 1)
    double r;      // inner radius, < max b
    double R;      // outer radius
    double omega;
    GridFunction baseline;
};

/// max_t b(t): the strict upper bound for the inner radius r.
double r_upper(const CoefficientSet& coeffs, int n = 512);

/// min_s \int_s^{s+omega} H(s,theta;sigma) sigma(theta) eta(theta) dtheta.
/// Strictly positive under the hypotheses; throws when nonpositive.
double denominator_min(const CoefficientSet& coeffs, int n = 512);

/// Strict lower bound for the outer radius R. For S1/S2 this is the explicit
/// bracket maximum; for S3 the condition R > A(R) is implicit and the unique
/// positive root of R = A(R) is returned (A is decreasing in R, bisection).
double R_lower(const CoefficientSet& coeffs, double gamma, int n = 512);

/// gamma from the rho-kernel, r = r_upper/2, R = 2 R_lower — both strict
/// inequalities hold with a factor-of-two margin.
ConeDomain choose_radii(const CoefficientSet& coeffs, int n = 512);

struct ProofStepReport {
    int trials = 0;
    int inner_shell_failures = 0;   // ||T(X)|| >= max b violated at ||X|| = r
    int outer_shell_failures = 0;   // ||T(X)|| <  R     violated at ||X|| = R
    int positivity_failures = 0;    // inf ||T(X)|| > 0  violated at ||X|| = r
    int cone_failures = 0;          // min T >= gamma max T violated
    double worst_inner_margin = 0;  // min over trials of ||T(X)|| - max b
    double worst_outer_margin = 0;  // min over trials of R - ||T(X)||
    double min_operator_norm = 0;   // min over trials of ||T(X)|| at the r shell
    bool pass = false;
};

/// Samples `trials` random cone elements on each shell and checks the
/// norm inequalities the fixed-point theorem requires, plus cone invariance
/// of the operator output. Deterministic for a fixed seed.
ProofStepReport check_proof_steps(const CoefficientSet& coeffs, const ConeDomain& dom, int trials,
                                  std::uint64_t seed = 42);

/// Random element of K_gamma with sup norm `target_norm`: baseline plus a
/// positive random trigonometric polynomial, lifted into the cone if needed
/// and rescaled. Rejection-sampled until membership holds.
GridFunction random_cone_element(const ConeDomain& dom, double target_norm, std::mt19937_64& rng,
                                 int n);

}  // namespace ppsolve

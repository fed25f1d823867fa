#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "ppsolve/bounds.hpp"
#include "ppsolve/cone_operator.hpp"
#include "ppsolve/demo_systems.hpp"

using namespace ppsolve;

namespace {

const double kTwoPi = 2.0 * M_PI;

CoefficientSet all_ones(SystemVariant variant) {
    auto e = [](const char* s) { return PeriodicExpr::parse(s, kTwoPi); };
    switch (variant) {
        case SystemVariant::S1:
            return CoefficientSet(variant, kTwoPi, e("1"), e("1"), e("1"), e("1"), e("1"));
        case SystemVariant::S2:
            return CoefficientSet(variant, kTwoPi, e("1"), e("1"), e("1"), e("1"), e("1"), e("1"));
        case SystemVariant::S3:
            return CoefficientSet(variant, kTwoPi, e("1"), e("1"), e("1"), e("1"), e("1"), e("1"),
                                  e("1"));
    }
    throw std::logic_error("unreachable");
}

CoefficientSet scaled_kappa_ones() {
    auto e = [](const char* s) { return PeriodicExpr::parse(s, kTwoPi); };
    return CoefficientSet(SystemVariant::S1, kTwoPi, e("1"), e("2"), e("1"), e("1"), e("1"));
}

}  // namespace

TEST_CASE("r_upper for constant coefficients") {
    CHECK(r_upper(all_ones(SystemVariant::S1)) == doctest::Approx(1.0).epsilon(1e-13));
    // Doubling kappa halves the baseline.
    CHECK(r_upper(scaled_kappa_ones()) == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("r_upper matches the adaptive double-integral oracle") {
    CoefficientSet ex1 = demo_system("example1");
    const double ours = r_upper(ex1);
    // Oracle: evaluate the baseline at its argmax node independently.
    GridFunction b = periodic_linear_solve(
        ex1.rho(), [&](double s) { return ex1.rho()(s) / ex1.kappa()(s); }, 512);
    int argmax = 0;
    for (int j = 0; j < b.size(); ++j)
        if (b[j] > b[argmax]) argmax = j;
    const double t_star = b.node(argmax);
    const double oracle = oracles::weighted_integral_oracle(
        oracles::antiderivative::one_plus_sin5,
        [&](double s) { return ex1.rho()(s) / ex1.kappa()(s); }, kTwoPi, t_star);
    CHECK(ours == doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("denominator_min for constant coefficients") {
    CHECK(denominator_min(all_ones(SystemVariant::S2)) == doctest::Approx(1.0).epsilon(1e-13));
    // sigma = 2, eta = 1: the kernel coefficient is sigma itself, so the inner
    // integral is again 1.
    auto e = [](const char* s) { return PeriodicExpr::parse(s, kTwoPi); };
    CoefficientSet s2(SystemVariant::S2, kTwoPi, e("1"), e("1"), e("1"), e("2"), e("1"), e("1"));
    CHECK(denominator_min(s2) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("denominator_min flags a sign-violating inner integral") {
    // eta = sin(t) makes sigma*eta change sign, so the inner integral dips
    // below zero somewhere even though the sigma kernel itself is fine.
    auto e = [](const char* s) { return PeriodicExpr::parse(s, kTwoPi); };
    CoefficientSet bad(SystemVariant::S2, kTwoPi, e("1"), e("1"), e("1"), e("1"), e("sin(t)"),
                       e("1"));
    CHECK_THROWS_AS(denominator_min(bad), std::domain_error);
}

TEST_CASE("denominator_min on demo coefficients matches the oracle") {
    CoefficientSet ex1 = demo_system("example1");
    const double ours = denominator_min(ex1);
    GridFunction d = periodic_linear_solve(
        ex1.sigma(), [&](double s) { return ex1.sigma()(s) * ex1.eta()(s); }, 512);
    int argmin = 0;
    for (int j = 0; j < d.size(); ++j)
        if (d[j] < d[argmin]) argmin = j;
    const double oracle = oracles::weighted_integral_oracle(
        oracles::antiderivative::one_minus_cos7,
        [&](double s) { return ex1.sigma()(s) * ex1.eta()(s); }, kTwoPi, d.node(argmin));
    CHECK(ours == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(ours > 0.0);
}

TEST_CASE("R_lower closed forms for constant coefficients") {
    const double gamma = std::exp(-kTwoPi);
    // S2 bracket = 1 + 1/gamma^2, S1 bracket = 1 + 1/gamma; inner integrals are 1.
    CHECK(R_lower(all_ones(SystemVariant::S2), gamma) ==
          doctest::Approx(1.0 + std::exp(2.0 * kTwoPi)).epsilon(1e-10));
    CHECK(R_lower(all_ones(SystemVariant::S1), gamma) ==
          doctest::Approx(1.0 + std::exp(kTwoPi)).epsilon(1e-10));
}

TEST_CASE("S3 implicit radius: bisection root is self-consistent") {
    CoefficientSet ex2 = demo_system("example2");
    CumulativeIntegral ca(ex2.rho());
    const double gamma = gamma_of(ca);
    const double root = R_lower(ex2, gamma);

    // Independent evaluation of A(R) = max_t [ b(t) + c(t)/R ].
    GridFunction b = periodic_linear_solve(
        ex2.rho(), [&](double s) { return ex2.rho()(s) / ex2.kappa()(s); }, 512);
    GridFunction d = periodic_linear_solve(
        ex2.sigma(), [&](double s) { return ex2.sigma()(s) * ex2.eta()(s); }, 512);
    TrigInterpolant di(d);
    const double g3 = gamma * gamma * gamma;
    GridFunction c = periodic_linear_solve(
        ex2.rho(),
        [&](double s) { return ex2.mu()(s) / (ex2.alpha()(s) * ex2.beta()(s) * g3 * di(s)); },
        512);
    auto a_of = [&](double r) { return (b.values() + c.values() / r).maxCoeff(); };
    CHECK(std::abs(root - a_of(root)) < 1e-8);

    // Closed-form oracle: per node, R = b + c/R has root (b + sqrt(b^2+4c))/2;
    // the fixed point of the max is the max of the per-node roots.
    double closed = 0.0;
    for (int j = 0; j < b.size(); ++j)
        closed = std::max(closed,
                          0.5 * (b[j] + std::sqrt(b[j] * b[j] + 4.0 * c[j])));
    CHECK(root == doctest::Approx(closed).epsilon(1e-9));
    // Strict inequality with margin at 2 * root.
    CHECK(a_of(2.0 * root) < 2.0 * root);
}

TEST_CASE("choose_radii closed form for constant S2 and ordering on demos") {
    ConeDomain dom = choose_radii(all_ones(SystemVariant::S2));
    CHECK(dom.r == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(dom.R == doctest::Approx(2.0 * (1.0 + std::exp(2.0 * kTwoPi))).epsilon(1e-10));
    CHECK(dom.gamma == doctest::Approx(std::exp(-kTwoPi)).epsilon(1e-13));

    for (const char* id : {"example1", "example2", "example3"}) {
        CoefficientSet coeffs = demo_system(id);
        ConeDomain d = choose_radii(coeffs);
        CHECK(d.r > 0.0);
        CHECK(d.r < d.R);
        CHECK(d.r < d.baseline.max());
        // Margin of the strict inequality r < max b is r itself.
        CHECK(d.baseline.max() - d.r == doctest::Approx(d.r).epsilon(1e-12));
    }
}

TEST_CASE("random cone elements satisfy membership and norm") {
    CoefficientSet ex1 = demo_system("example1");
    ConeDomain dom = choose_radii(ex1);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
        GridFunction x = random_cone_element(dom, dom.r, rng, 256);
        CHECK(x.max() == doctest::Approx(dom.r).epsilon(1e-12));
        CHECK(x.min() >= dom.gamma * x.max() - 1e-12 * dom.r);
        CHECK(x.min() > 0.0);
    }
}

TEST_CASE("proof-step inequalities hold on random shell elements") {
    for (const char* id : {"example1", "example2"}) {
        CoefficientSet coeffs = demo_system(id);
        ConeDomain dom = choose_radii(coeffs);
        ProofStepReport report = check_proof_steps(coeffs, dom, 25, 42);
        CHECK(report.pass);
        CHECK(report.inner_shell_failures == 0);
        CHECK(report.outer_shell_failures == 0);
        CHECK(report.positivity_failures == 0);
        CHECK(report.cone_failures == 0);
        CHECK(report.worst_inner_margin >= 0.0);
        CHECK(report.min_operator_norm > 0.0);
    }
}

TEST_CASE("operator dominates the baseline for a constant iterate at the r shell") {
    CoefficientSet coeffs = all_ones(SystemVariant::S2);
    ConeDomain dom = choose_radii(coeffs);
    OperatorContext ctx(coeffs, dom, 128);
    GridFunction x = GridFunction::constant(dom.r, 128, kTwoPi);
    GridFunction tx = apply_T(ctx, x);
    // Baseline is identically 1 here and the response term is nonnegative.
    CHECK(tx.min() >= 1.0 - 1e-12);
}

TEST_CASE("proof-step report is deterministic for a fixed seed") {
    CoefficientSet coeffs = demo_system("example3");
    ConeDomain dom = choose_radii(coeffs);
    ProofStepReport a = check_proof_steps(coeffs, dom, 10, 7);
    ProofStepReport b = check_proof_steps(coeffs, dom, 10, 7);
    CHECK(a.worst_inner_margin == b.worst_inner_margin);
    CHECK(a.worst_outer_margin == b.worst_outer_margin);
    CHECK(a.min_operator_norm == b.min_operator_norm);
}

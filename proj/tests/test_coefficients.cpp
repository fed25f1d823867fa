#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ppsolve/coefficients.hpp"
#include "ppsolve/demo_systems.hpp"

using namespace ppsolve;

namespace {

bool has_failure(const HypothesisReport& report, const std::string& needle) {
    for (const auto& f : report.failures)
        if (f.find(needle) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST_CASE("all built-in demo systems satisfy the hypotheses") {
    for (const std::string& id : demo_ids()) {
        HypothesisReport report = verify_hypotheses(demo_system(id));
        CHECK(report.pass);
        CHECK(report.failures.empty());
        CHECK(report.product_positive);
        CHECK(report.sigma_eta_not_zero);
    }
}

TEST_CASE("sigma identically zero is rejected with a named diagnosis") {
    const double omega = 2.0 * M_PI;
    auto e = [omega](const char* s) { return PeriodicExpr::parse(s, omega); };
    CoefficientSet coeffs(SystemVariant::S2, omega, e("1+sin(5*t)"), e("2+sin(t)"),
                          e("1+cos(3*t)"), e("0"), e("1-sin(t)"), e("2-cos(3*t)"));
    HypothesisReport report = verify_hypotheses(coeffs);
    CHECK_FALSE(report.pass);
    CHECK(has_failure(report, "sigma"));
    CHECK(has_failure(report, "identically zero"));
}

TEST_CASE("sign-changing alpha fails nonnegativity and the product condition") {
    const double omega = 2.0 * M_PI;
    auto e = [omega](const char* s) { return PeriodicExpr::parse(s, omega); };
    CoefficientSet coeffs(SystemVariant::S2, omega, e("1+sin(5*t)"), e("2+sin(t)"),
                          e("1+cos(3*t)"), e("1-cos(7*t)"), e("1-sin(t)"), e("sin(t)"));
    HypothesisReport report = verify_hypotheses(coeffs);
    CHECK_FALSE(report.pass);
    CHECK(has_failure(report, "alpha: negative"));
    CHECK(has_failure(report, "product alpha*kappa"));
    // The worst offender lies in (pi, 2pi), where sin is negative.
    for (const auto& [name, check] : report.coefficients) {
        if (name == "alpha") {
            CHECK_FALSE(check.nonnegative);
            CHECK(check.min_value == doctest::Approx(-1.0).epsilon(1e-5));
            CHECK(check.min_t > M_PI);
            CHECK(check.min_t < 2.0 * M_PI);
        }
    }
}

TEST_CASE("kappa touching zero fails the strict product condition only") {
    const double omega = 2.0 * M_PI;
    auto e = [omega](const char* s) { return PeriodicExpr::parse(s, omega); };
    // kappa = 1-cos(t) is nonnegative, not identically zero, but vanishes at t=0.
    CoefficientSet coeffs(SystemVariant::S1, omega, e("1+sin(2*t)"), e("1-cos(t)"),
                          e("1+cos(3*t)"), e("1-cos(t)"), e("1-sin(t)"));
    HypothesisReport report = verify_hypotheses(coeffs);
    CHECK_FALSE(report.pass);
    CHECK(report.product_min == 0.0);
    CHECK(has_failure(report, "product kappa"));
    for (const auto& [name, check] : report.coefficients)
        if (name == "kappa") {
            CHECK(check.nonnegative);
            CHECK(check.not_identically_zero);
        }
}

TEST_CASE("system spec files parse with comments and pi expressions") {
    std::istringstream in(
        "# Holling-Tanner demo\n"
        "variant = S2\n"
        "omega = 2*pi\n"
        "rho = 1+sin(5*t)   # prey growth\n"
        "kappa = 2+sin(t)\n"
        "mu = 1+cos(3*t)\n"
        "alpha = 2-cos(3*t)\n"
        "sigma = 1-cos(7*t)\n"
        "\n"
        "eta = 1-sin(t)\n");
    CoefficientSet coeffs = parse_system_spec(in);
    CHECK(coeffs.variant() == SystemVariant::S2);
    CHECK(coeffs.omega() == 2.0 * M_PI);
    CHECK(coeffs.rho()(0.0) == doctest::Approx(1.0));
    CHECK(coeffs.alpha()(0.0) == doctest::Approx(1.0));
    CHECK_FALSE(coeffs.delays());
}

TEST_CASE("spec file errors") {
    CHECK_THROWS_WITH_AS(parse_system_spec(std::string("variant = S1\nomega = 2*pi\nrho = 1\n"
                                                       "kappa = 1\nmu = 1\nsigma = 1\neta = 1\n"
                                                       "frobnicate = 2\n")),
                         doctest::Contains("unknown key"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_system_spec(std::string("variant = S1\nomega = 2*pi\nrho = 1\n"
                                                       "kappa = 1\nmu = 1\nsigma = 1\n")),
                         doctest::Contains("missing required key"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_system_spec(std::string("variant = S4\nomega = 2*pi\n")),
                         doctest::Contains("variant"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_system_spec(std::string("variant = S1\nvariant = S2\n")),
                         doctest::Contains("duplicate"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_system_spec(std::string("variant = S1\nomega = 2*t\nrho = 1\n"
                                                       "kappa = 1\nmu = 1\nsigma = 1\neta = 1\n")),
                         doctest::Contains("constant"), std::invalid_argument);
    // beta only belongs to S3, alpha not to S1.
    CHECK_THROWS_AS(parse_system_spec(std::string("variant = S2\nomega = 2*pi\nrho = 1\n"
                                                  "kappa = 1\nmu = 1\nalpha = 1\nbeta = 1\n"
                                                  "sigma = 1\neta = 1\n")),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_system_spec(std::string("variant = S1\nomega = 2*pi\nrho = 1\n"
                                                  "kappa = 1\nmu = 1\nalpha = 1\n"
                                                  "sigma = 1\neta = 1\n")),
                    std::invalid_argument);
}

TEST_CASE("delays are accepted for S2 only") {
    const std::string base =
        "omega = 2*pi\nrho = 1\nkappa = 1\nmu = 1\nsigma = 1\neta = 1\ntau_x = 0.5\ntau_y = 0.25\n";
    CoefficientSet s2 = parse_system_spec("variant = S2\nalpha = 1\n" + base);
    REQUIRE(s2.delays());
    CHECK(s2.delays()->tau_x == 0.5);
    CHECK(s2.delays()->tau_y == 0.25);
    CHECK_THROWS_WITH_AS(parse_system_spec("variant = S1\n" + base),
                         doctest::Contains("S2 only"), std::invalid_argument);
}

TEST_CASE("coefficient sets demand matching periods and variant coverage") {
    auto e1 = PeriodicExpr::parse("1", 1.0);
    auto e2pi = PeriodicExpr::parse("1", 2.0 * M_PI);
    CHECK_THROWS_AS(CoefficientSet(SystemVariant::S1, 2.0 * M_PI, e1, e2pi, e2pi, e2pi, e2pi),
                    std::invalid_argument);
    // S2 without alpha.
    CHECK_THROWS_AS(CoefficientSet(SystemVariant::S2, 2.0 * M_PI, e2pi, e2pi, e2pi, e2pi, e2pi),
                    std::invalid_argument);
    // S1 with beta.
    CHECK_THROWS_AS(CoefficientSet(SystemVariant::S1, 2.0 * M_PI, e2pi, e2pi, e2pi, e2pi, e2pi,
                                   std::nullopt, e2pi),
                    std::invalid_argument);
}

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ppsolve/expr.hpp"

namespace ppsolve {

// Which functional response the system uses:
//   S1  p(x) = mu x                      (Leslie-Gower)
//   S2  p(x) = mu x / (alpha + x)        (Holling-Tanner)
//   S3  p(x) = mu x^2 / ((alpha + x)(beta + x))
enum class SystemVariant { S1, S2, S3 };

std::string_view to_string(SystemVariant v);

struct Delays {
    double tau_x = 0.0;
    double tau_y = 0.0;
};

// The named periodic coefficients of one system. alpha exists for S2/S3,
// beta for S3 only; constant delays are permitted only for S2. All member
// expressions carry the same declared period.
class CoefficientSet {
  public:
    CoefficientSet(SystemVariant variant, double omega, PeriodicExpr rho, PeriodicExpr kappa,
                   PeriodicExpr mu, PeriodicExpr sigma, PeriodicExpr eta,
                   std::optional<PeriodicExpr> alpha = std::nullopt,
                   std::optional<PeriodicExpr> beta = std::nullopt,
                   std::optional<Delays> delays = std::nullopt);

    SystemVariant variant() const { return variant_; }
    double omega() const { return omega_; }

    const PeriodicExpr& rho() const { return rho_; }
    const PeriodicExpr& kappa() const { return kappa_; }
    const PeriodicExpr& mu() const { return mu_; }
    const PeriodicExpr& sigma() const { return sigma_; }
    const PeriodicExpr& eta() const { return eta_; }
    const PeriodicExpr& alpha() const;  // throws for S1
    const PeriodicExpr& beta() const;   // throws for S1/S2
    const std::optional<Delays>& delays() const { return delays_; }

    /// Coefficients in declaration order with their names, for reporting.
    std::vector<std::pair<std::string, const PeriodicExpr*>> named_coefficients() const;

  private:
    SystemVariant variant_;
    double omega_;
    PeriodicExpr rho_, kappa_, mu_, sigma_, eta_;
    std::optional<PeriodicExpr> alpha_, beta_;
    std::optional<Delays> delays_;
};

struct CoefficientCheck {
    bool nonnegative = true;
    bool not_identically_zero = true;
    double min_value = 0.0;
    double min_t = 0.0;   // grid argmin, the worst offender for nonnegativity
    double mean = 0.0;    // period integral
};

// Outcome of the existence-theorem hypothesis checks. Nonnegativity and the
// strict product positivity (kappa for S1, alpha*kappa for S2,
// alpha*beta*kappa for S3) are decided on a 4096-point grid; "not identically
// zero" means the period integral exceeds 1e-9.
struct HypothesisReport {
    std::vector<std::pair<std::string, CoefficientCheck>> coefficients;
    std::string product_name;
    double product_min = 0.0;
    double product_min_t = 0.0;
    bool product_positive = false;
    double sigma_eta_mean = 0.0;
    bool sigma_eta_not_zero = false;
    bool pass = false;
    std::vector<std::string> failures;  // named diagnoses, empty iff pass
};

HypothesisReport verify_hypotheses(const CoefficientSet& coeffs);

// Plain-text system description, line oriented:
//
//   # comment
//   variant = S2
//   omega   = 2*pi
//   rho     = 1+sin(5*t)
//   ...
//   tau_x   = 0.5        (optional, S2 only)
//
// Unknown or duplicate keys are errors, as are missing coefficients for the
// declared variant.
CoefficientSet parse_system_spec(std::istream& in);
CoefficientSet parse_system_spec(const std::string& text);
CoefficientSet load_system_spec(const std::string& path);

}  // namespace ppsolve

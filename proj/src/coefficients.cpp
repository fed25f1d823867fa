#include "ppsolve/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace ppsolve {

std::string_view to_string(SystemVariant v) {
    switch (v) {
        case SystemVariant::S1: return "S1";
        case SystemVariant::S2: return "S2";
        case SystemVariant::S3: return "S3";
    }
    return "?";
}

CoefficientSet::CoefficientSet(SystemVariant variant, double omega, PeriodicExpr rho,
                               PeriodicExpr kappa, PeriodicExpr mu, PeriodicExpr sigma,
                               PeriodicExpr eta, std::optional<PeriodicExpr> alpha,
                               std::optional<PeriodicExpr> beta, std::optional<Delays> delays)
    : variant_(variant),
      omega_(omega),
      rho_(std::move(rho)),
      kappa_(std::move(kappa)),
      mu_(std::move(mu)),
      sigma_(std::move(sigma)),
      eta_(std::move(eta)),
      alpha_(std::move(alpha)),
      beta_(std::move(beta)),
      delays_(std::move(delays)) {
    const bool needs_alpha = variant_ != SystemVariant::S1;
    const bool needs_beta = variant_ == SystemVariant::S3;
    if (needs_alpha != alpha_.has_value())
        throw std::invalid_argument(needs_alpha ? "variant requires coefficient alpha"
                                                : "coefficient alpha is not part of this variant");
    if (needs_beta != beta_.has_value())
        throw std::invalid_argument(needs_beta ? "variant requires coefficient beta"
                                               : "coefficient beta is not part of this variant");
    if (delays_ && variant_ != SystemVariant::S2)
        throw std::invalid_argument("delays are supported for S2 only");
    if (delays_ && (delays_->tau_x < 0.0 || delays_->tau_y < 0.0))
        throw std::invalid_argument("delays must be nonnegative");
    for (const auto& [name, expr] : named_coefficients()) {
        if (expr->period() != omega_)
            throw std::invalid_argument("coefficient " + name +
                                        " does not share the declared period");
    }
}

const PeriodicExpr& CoefficientSet::alpha() const {
    if (!alpha_) throw std::logic_error("alpha requested for a variant without it");
    return *alpha_;
}

const PeriodicExpr& CoefficientSet::beta() const {
    if (!beta_) throw std::logic_error("beta requested for a variant without it");
    return *beta_;
}

std::vector<std::pair<std::string, const PeriodicExpr*>> CoefficientSet::named_coefficients()
    const {
    std::vector<std::pair<std::string, const PeriodicExpr*>> out;
    out.emplace_back("rho", &rho_);
    out.emplace_back("kappa", &kappa_);
    out.emplace_back("mu", &mu_);
    if (alpha_) out.emplace_back("alpha", &*alpha_);
    if (beta_) out.emplace_back("beta", &*beta_);
    out.emplace_back("sigma", &sigma_);
    out.emplace_back("eta", &eta_);
    return out;
}

namespace {

constexpr int kHypothesisGrid = 4096;
constexpr double kZeroMeanThreshold = 1e-9;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

HypothesisReport verify_hypotheses(const CoefficientSet& coeffs) {
    HypothesisReport report;
    const double omega = coeffs.omega();

    for (const auto& [name, expr] : coeffs.named_coefficients()) {
        CoefficientCheck check;
        double min_v = std::numeric_limits<double>::infinity();
        double min_t = 0.0, max_abs = 0.0;
        for (int j = 0; j < kHypothesisGrid; ++j) {
            const double t = omega * j / kHypothesisGrid;
            const double v = (*expr)(t);
            if (v < min_v) {
                min_v = v;
                min_t = t;
            }
            max_abs = std::max(max_abs, std::abs(v));
        }
        check.min_value = min_v;
        check.min_t = min_t;
        check.nonnegative = min_v >= -1e-12 * (1.0 + max_abs);
        check.mean = mean_integral(*expr);
        check.not_identically_zero = check.mean > kZeroMeanThreshold;
        if (!check.nonnegative)
            report.failures.push_back(name + ": negative value " + fmt(min_v) + " at t=" +
                                      fmt(min_t));
        if (!check.not_identically_zero)
            report.failures.push_back(name + ": identically zero (period integral " +
                                      fmt(check.mean) + " <= 1e-9)");
        report.coefficients.emplace_back(name, check);
    }

    // Strict positivity of the denominator product, everywhere on the grid.
    switch (coeffs.variant()) {
        case SystemVariant::S1: report.product_name = "kappa"; break;
        case SystemVariant::S2: report.product_name = "alpha*kappa"; break;
        case SystemVariant::S3: report.product_name = "alpha*beta*kappa"; break;
    }
    double pmin = std::numeric_limits<double>::infinity();
    double pmin_t = 0.0;
    for (int j = 0; j < kHypothesisGrid; ++j) {
        const double t = omega * j / kHypothesisGrid;
        double v = coeffs.kappa()(t);
        if (coeffs.variant() != SystemVariant::S1) v *= coeffs.alpha()(t);
        if (coeffs.variant() == SystemVariant::S3) v *= coeffs.beta()(t);
        if (v < pmin) {
            pmin = v;
            pmin_t = t;
        }
    }
    report.product_min = pmin;
    report.product_min_t = pmin_t;
    report.product_positive = pmin > 0.0;
    if (!report.product_positive)
        report.failures.push_back("product " + report.product_name + ": min " + fmt(pmin) +
                                  " at t=" + fmt(pmin_t) + " is not strictly positive");

    report.sigma_eta_mean = integrate_periodic(
        [&](double t) { return coeffs.sigma()(t) * coeffs.eta()(t); }, omega);
    report.sigma_eta_not_zero = report.sigma_eta_mean > kZeroMeanThreshold;
    if (!report.sigma_eta_not_zero)
        report.failures.push_back("sigma*eta: identically zero (period integral " +
                                  fmt(report.sigma_eta_mean) + " <= 1e-9)");

    report.pass = report.failures.empty();
    return report;
}

namespace {

struct SpecLine {
    std::string value;
    int line_no;
};

double parse_positive_constant(const std::string& text, const std::string& key) {
    // Constants may be written as expressions over pi (no dependence on t).
    try {
        PeriodicExpr e = PeriodicExpr::parse(text, 1.0);
        if (!e.is_constant())
            throw std::invalid_argument("key '" + key + "' must be a constant expression");
        return e(0.0);
    } catch (const PeriodicityError&) {
        throw std::invalid_argument("key '" + key + "' must be a constant expression");
    }
}

}  // namespace

CoefficientSet parse_system_spec(std::istream& in) {
    static const std::vector<std::string> known_keys = {
        "variant", "omega", "rho", "kappa", "mu", "alpha", "beta", "sigma", "eta",
        "tau_x", "tau_y"};

    std::map<std::string, SpecLine> entries;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r\n");
        if (first == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": expected 'key = value'");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r\n");
            const auto e = s.find_last_not_of(" \t\r\n");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (std::find(known_keys.begin(), known_keys.end(), key) == known_keys.end())
            throw std::invalid_argument("line " + std::to_string(line_no) + ": unknown key '" +
                                        key + "'");
        if (value.empty())
            throw std::invalid_argument("line " + std::to_string(line_no) + ": empty value for '" +
                                        key + "'");
        if (!entries.emplace(key, SpecLine{value, line_no}).second)
            throw std::invalid_argument("line " + std::to_string(line_no) + ": duplicate key '" +
                                        key + "'");
    }

    auto require = [&](const std::string& key) -> const std::string& {
        auto it = entries.find(key);
        if (it == entries.end())
            throw std::invalid_argument("missing required key '" + key + "'");
        return it->second.value;
    };

    const std::string variant_text = require("variant");
    SystemVariant variant;
    if (variant_text == "S1")
        variant = SystemVariant::S1;
    else if (variant_text == "S2")
        variant = SystemVariant::S2;
    else if (variant_text == "S3")
        variant = SystemVariant::S3;
    else
        throw std::invalid_argument("variant must be one of S1, S2, S3");

    const double omega = parse_positive_constant(require("omega"), "omega");
    if (!(omega > 0.0)) throw std::invalid_argument("omega must be positive");

    auto coeff = [&](const std::string& key) {
        return PeriodicExpr::parse(require(key), omega);
    };

    std::optional<PeriodicExpr> alpha, beta;
    if (variant != SystemVariant::S1)
        alpha = coeff("alpha");
    else if (entries.count("alpha"))
        throw std::invalid_argument("coefficient alpha is not part of variant S1");
    if (variant == SystemVariant::S3)
        beta = coeff("beta");
    else if (entries.count("beta"))
        throw std::invalid_argument("coefficient beta is only part of variant S3");

    std::optional<Delays> delays;
    if (entries.count("tau_x") || entries.count("tau_y")) {
        if (variant != SystemVariant::S2)
            throw std::invalid_argument("delays tau_x/tau_y are supported for S2 only");
        Delays d;
        if (entries.count("tau_x")) d.tau_x = parse_positive_constant(entries.at("tau_x").value, "tau_x");
        if (entries.count("tau_y")) d.tau_y = parse_positive_constant(entries.at("tau_y").value, "tau_y");
        if (d.tau_x < 0.0 || d.tau_y < 0.0) throw std::invalid_argument("delays must be nonnegative");
        delays = d;
    }

    return CoefficientSet(variant, omega, coeff("rho"), coeff("kappa"), coeff("mu"),
                          coeff("sigma"), coeff("eta"), std::move(alpha), std::move(beta),
                          delays);
}

CoefficientSet parse_system_spec(const std::string& text) {
    std::istringstream in(text);
    return parse_system_spec(in);
}

CoefficientSet load_system_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open system spec file: " + path);
    return parse_system_spec(in);
}

}  // namespace ppsolve

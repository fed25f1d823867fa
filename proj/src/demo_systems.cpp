#include "ppsolve/demo_systems.hpp"

#include <cmath>
#include <stdexcept>

namespace ppsolve {

namespace {

CoefficientSet build(const std::string& id) {
    const double omega = 2.0 * M_PI;
    auto e = [omega](const char* text) { return PeriodicExpr::parse(text, omega); };
    if (id == "example1") {
        return CoefficientSet(SystemVariant::S2, omega, e("1+sin(5*t)"), e("2+sin(t)"),
                              e("1+cos(3*t)"), e("1-cos(7*t)"), e("1-sin(t)"), e("2-cos(3*t)"));
    }
    if (id == "example2") {
        return CoefficientSet(SystemVariant::S3, omega, e("1+sin(t)"), e("2+sin(2*t)"),
                              e("2+cos(3*t)"), e("1+cos(t)"), e("1-sin(t)"), e("2+cos(2*t)"),
                              e("2-cos(3*t)"));
    }
    if (id == "example3") {
        return CoefficientSet(SystemVariant::S1, omega, e("1+sin(2*t)"), e("2+sin(5*t)"),
                              e("1+cos(3*t)"), e("1-cos(t)"), e("1-sin(t)"));
    }
    throw std::invalid_argument("unknown demo id '" + id + "' (expected example1|example2|example3)");
}

}  // namespace

CoefficientSet demo_system(const std::string& id) { return build(id); }

const std::vector<std::string>& demo_ids() {
    static const std::vector<std::string> ids = {"example1", "example2", "example3"};
    return ids;
}

}  // namespace ppsolve

#pragma once

#include <string>
#include <vector>

#include "ppsolve/coefficients.hpp"

namespace ppsolve {

/// Built-in demo systems: one per variant, with gently oscillating
/// coefficients of period 2*pi. Ids: example1 (S2), example2 (S3), example3 (S1).
CoefficientSet demo_system(const std::string& id);

const std::vector<std::string>& demo_ids();

}  // namespace ppsolve

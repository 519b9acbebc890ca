#pragma once

#include <string>
#include <vector>

#include "ccccta/element.hpp"

namespace ccccta {

struct CheckResult {
    std::string name;
    bool pass;
    std::string detail;
};

// Runs every stock verification criterion (design points, tuning laws, mode
// shapes, sensitivities, oscillator behavior, designer round-trips) at its
// pinned tolerance. All criteria use the given thermal voltage.
std::vector<CheckResult> run_acceptance_checks(double v_t = default_thermal_voltage);

}  // namespace ccccta

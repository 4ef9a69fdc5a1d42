#pragma once

#include <string>
#include <utility>
#include <vector>

#include "navsim/hydro_params.hpp"

namespace navsim {

struct ManeuverCheck {
    std::string name;
    bool passed = false;
    std::vector<std::pair<std::string, double>> measured;
};

struct ManeuverReport {
    std::vector<ManeuverCheck> checks;
    bool all_passed() const {
        for (const ManeuverCheck& c : checks) {
            if (!c.passed) return false;
        }
        return !checks.empty();
    }
};

// Acceptance gate for a coefficient set: self-propulsion calibration,
// straight-run speed holding, exact port/starboard mirror symmetry, RK4
// convergence order, steady turning circles at full rudder, a 20/20 zigzag,
// and decay of a sway perturbation (dynamic stability).
ManeuverReport validate_params(const HydroParams& params);

}  // namespace navsim

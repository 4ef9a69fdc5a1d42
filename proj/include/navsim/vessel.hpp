#pragma once

#include <array>

#include "navsim/geometry.hpp"
#include "navsim/hydro_params.hpp"

namespace navsim {

// Pose and velocities of the ownship, non-dimensional throughout:
// x, y in ship lengths, u, v in units of design speed, r in U/L,
// psi wrapped to (-pi, pi].
//
// Frame convention (fixed project-wide): the plane is viewed from above with
// psi measured counterclockwise from global +X; body y points to port.
// Positive rudder angle turns the bow to starboard, i.e. drives r negative.
struct VesselState {
    double x = 0.0;
    double y = 0.0;
    double psi = 0.0;
    double u = 0.0;
    double v = 0.0;
    double r = 0.0;
    double delta = 0.0;    // actual rudder angle (rad)
    double delta_c = 0.0;  // commanded rudder angle (rad)
    double n = 0.0;        // propeller rate, revolutions per non-dim time unit

    Vec2 position() const { return {x, y}; }
    Vec2 velocity_gcs() const {
        return {u * std::cos(psi) - v * std::sin(psi),
                u * std::sin(psi) + v * std::cos(psi)};
    }
};

struct BodyAccel {
    double udot = 0.0;
    double vdot = 0.0;
    double rdot = 0.0;
};

struct GcsRates {
    double xdot = 0.0;
    double ydot = 0.0;
    double psidot = 0.0;
};

// eta_dot = R(psi) * nu: body velocities rotated into the global frame.
GcsRates kinematic_rates(const VesselState& state);

// Surge/sway/yaw momentum balance of the MMG model: hull polynomial
// derivatives, open-water propeller thrust, rudder normal force with hull
// interaction. Pure function of (state, params).
BodyAccel mmg_accelerations(const VesselState& state, const HydroParams& params);

// Move delta toward delta_c, rate-limited and clamped to +/-max_deflection.
double rudder_update(double delta, double delta_c, double dt, const RudderParams& rudder);

// One RK4 step of the coupled 6-state ODE (x, y, psi, u, v, r). The rudder is
// advanced once before derivative evaluation and held through the stages;
// psi is re-wrapped afterwards; n is unchanged. Throws NonFiniteStateError
// if the result is not finite.
VesselState rk4_step(const VesselState& state, const HydroParams& params, double dt);

// Propeller rate at which thrust balances resistance at (u=1, v=0, r=0,
// delta=0), found by bracketing + bisection so |udot| < 1e-10. Throws
// NoEquilibriumError if udot never changes sign on (0, n_max].
double self_propulsion_rate(const HydroParams& params, double n_max = 1000.0);

// Parameters plus the calibrated self-propulsion point; immutable once built,
// safe to share across environments.
struct VesselModel {
    HydroParams params;
    double n_sp = 0.0;

    static VesselModel calibrate(HydroParams p) {
        VesselModel m{std::move(p), 0.0};
        m.n_sp = self_propulsion_rate(m.params);
        return m;
    }
};

}  // namespace navsim

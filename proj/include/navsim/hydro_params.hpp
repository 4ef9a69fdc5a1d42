#pragma once

#include <string>

namespace navsim {

// Hull force derivatives, non-dimensional. Forces are scaled by 0.5*rho*L^2*U^2,
// moments by 0.5*rho*L^3*U^2, velocities by U, yaw rate by U/L. X is even in
// (v, r); Y and N are odd, so the hull model is exactly port/starboard symmetric.
struct HullDerivatives {
    double R0 = 0.0;     // straight-run resistance coefficient, X -= R0*u|u|
    double Xvv = 0.0;
    double Xvr = 0.0;
    double Xrr = 0.0;
    double Xvvvv = 0.0;
    double Yv = 0.0;
    double Yr = 0.0;
    double Yvvv = 0.0;
    double Yvvr = 0.0;
    double Yvrr = 0.0;
    double Yrrr = 0.0;
    double Nv = 0.0;
    double Nr = 0.0;
    double Nvvv = 0.0;
    double Nvvr = 0.0;
    double Nvrr = 0.0;
    double Nrrr = 0.0;
};

// Open-water propeller model: K_T(J) = k0 + k1*J + k2*J^2,
// J = u*(1 - w_p) / (n * diameter). Thrust enters surge as (1 - t_p)*T.
struct PropellerParams {
    double diameter = 0.0;   // Dp / L
    double t_p = 0.0;        // thrust deduction
    double w_p = 0.0;        // effective wake fraction
    double k0 = 0.0;
    double k1 = 0.0;
    double k2 = 0.0;
};

// MMG rudder normal-force model with hull interaction coefficients.
struct RudderParams {
    double area = 0.0;          // A_R / L^2
    double aspect_ratio = 0.0;  // drives the Fujii lift gradient
    double t_R = 0.0;           // steering resistance deduction
    double a_H = 0.0;           // hull force gain
    double x_H = 0.0;           // hull force lever (units of L)
    double x_R = 0.0;           // rudder force lever (units of L)
    double epsilon = 0.0;       // wake ratio at the rudder
    double kappa = 0.0;         // propeller acceleration factor
    double gamma_R = 0.0;       // flow straightening (single-valued: symmetric hull)
    double l_R = 0.0;           // effective yaw lever for rudder inflow (units of L)
    double eta = 0.0;           // propeller diameter / rudder span
    double max_deflection = 0.0;  // rad
    double slew_rate = 0.0;       // rad per non-dim time unit

    // Fujii lift-gradient: 6.13*lambda / (lambda + 2.25).
    double lift_gradient() const {
        return 6.13 * aspect_ratio / (aspect_ratio + 2.25);
    }
};

// Full coefficient set for one vessel, plus the L and U that define the
// non-dimensional scaling. Loaded from a versioned JSON parameters file;
// values are data, accepted only if the maneuver property suite passes
// (see the validate command).
struct HydroParams {
    std::string name;
    double length = 0.0;        // L, metres
    double design_speed = 0.0;  // U, metres/second

    double mass = 0.0;   // m / (0.5*rho*L^3)
    double mx = 0.0;     // added mass, surge
    double my = 0.0;     // added mass, sway
    double izz = 0.0;    // yaw inertia about midship / (0.5*rho*L^5)
    double jzz = 0.0;    // added yaw inertia
    double xg = 0.0;     // CG offset forward of midship (units of L)

    HullDerivatives hull;
    PropellerParams propeller;
    RudderParams rudder;

    // Throws InputError/SingularMassMatrixError if structural invariants fail.
    void check() const;
};

// Parse a parameters JSON document. Unknown keys are rejected; a missing
// coefficient raises MissingCoefficientError naming it.
HydroParams load_hydro_params(const std::string& json_text);
HydroParams load_hydro_params_file(const std::string& path);

}  // namespace navsim

#include "navsim/validate.hpp"

#include <algorithm>
#include <cmath>

#include "navsim/errors.hpp"
#include "navsim/integrate.hpp"
#include "navsim/vessel.hpp"

namespace navsim {

namespace {

VesselState straight_run_state(double n_sp) {
    VesselState s;
    s.u = 1.0;
    s.n = n_sp;
    return s;
}

VesselState simulate(VesselState s, const HydroParams& p, double delta_c, int substeps,
                     double dt = 0.1) {
    s.delta_c = delta_c;
    for (int i = 0; i < substeps; ++i) s = rk4_step(s, p, dt);
    return s;
}

ManeuverCheck check_calibration(const HydroParams& p, double& n_sp) {
    ManeuverCheck c{"self_propulsion_calibration", false, {}};
    try {
        n_sp = self_propulsion_rate(p);
    } catch (const NoEquilibriumError&) {
        c.measured.emplace_back("n_sp", std::nan(""));
        return c;
    }
    VesselState s = straight_run_state(n_sp);
    const double residual = std::abs(mmg_accelerations(s, p).udot);
    c.measured.emplace_back("n_sp", n_sp);
    c.measured.emplace_back("udot_residual", residual);
    c.passed = residual < 1e-10;
    return c;
}

ManeuverCheck check_straight_run(const HydroParams& p, double n_sp) {
    ManeuverCheck c{"straight_run_speed_holding", false, {}};
    VesselState s = straight_run_state(n_sp);
    double drift_200 = 0.0;
    double drift_480 = 0.0;
    for (int i = 1; i <= 480; ++i) {
        s = rk4_step(s, p, 0.1);
        const double d = std::abs(s.u - 1.0);
        if (i <= 200) drift_200 = std::max(drift_200, d);
        drift_480 = std::max(drift_480, d);
    }
    c.measured.emplace_back("max_drift_200_substeps", drift_200);
    c.measured.emplace_back("max_drift_160_agent_steps", drift_480);
    c.passed = drift_200 < 1e-6 && drift_480 < 1e-5;
    return c;
}

ManeuverCheck check_mirror(const HydroParams& p, double n_sp) {
    ManeuverCheck c{"mirror_symmetry", false, {}};
    // Piecewise rudder program covering both directions and saturation.
    const double program[] = {20.0, -35.0, 10.0, 0.0, 35.0};

    VesselState a = straight_run_state(n_sp);
    VesselState b = straight_run_state(n_sp);
    double max_dev = 0.0;
    for (double cmd_deg : program) {
        for (int i = 0; i < 30; ++i) {
            a.delta_c = deg2rad(cmd_deg);
            b.delta_c = -deg2rad(cmd_deg);
            a = rk4_step(a, p, 0.1);
            b = rk4_step(b, p, 0.1);
            max_dev = std::max({max_dev, std::abs(a.x - b.x), std::abs(a.y + b.y),
                                std::abs(wrap_angle(a.psi + b.psi)),
                                std::abs(a.u - b.u), std::abs(a.v + b.v),
                                std::abs(a.r + b.r), std::abs(a.delta + b.delta)});
        }
    }
    c.measured.emplace_back("max_component_deviation", max_dev);
    c.passed = max_dev <= 1e-10;
    return c;
}

double scalar_decay_error(double dt) {
    std::array<double, 1> y{1.0};
    const int steps = static_cast<int>(std::llround(1.0 / dt));
    for (int i = 0; i < steps; ++i) {
        y = rk4_classic(y, dt, [](const std::array<double, 1>& s) {
            return std::array<double, 1>{-s[0]};
        });
    }
    return std::abs(y[0] - std::exp(-1.0));
}

// L2 distance between two vessel states over (x, y, psi, u, v, r).
double state_distance(const VesselState& a, const VesselState& b) {
    const double dpsi = wrap_angle(a.psi - b.psi);
    const double d[6] = {a.x - b.x, a.y - b.y, dpsi, a.u - b.u, a.v - b.v, a.r - b.r};
    double acc = 0.0;
    for (double x : d) acc += x * x;
    return std::sqrt(acc);
}

ManeuverCheck check_convergence(const HydroParams& p, double n_sp) {
    ManeuverCheck c{"rk4_convergence_order", false, {}};

    const double scalar_order =
        std::log2(scalar_decay_error(0.1) / scalar_decay_error(0.05));
    c.measured.emplace_back("scalar_ode_order", scalar_order);

    // Full-model turning run with the rudder preset (no slew transient) so the
    // right-hand side stays smooth over the whole horizon.
    auto run = [&](double dt) {
        VesselState s = straight_run_state(n_sp);
        s.delta = s.delta_c = deg2rad(20.0);
        const int steps = static_cast<int>(std::llround(10.0 / dt));
        for (int i = 0; i < steps; ++i) s = rk4_step(s, p, dt);
        return s;
    };
    const VesselState ref = run(0.003125);
    const double e1 = state_distance(run(0.1), ref);
    const double e2 = state_distance(run(0.05), ref);
    const double e3 = state_distance(run(0.025), ref);
    const double order_a = std::log2(e1 / e2);
    const double order_b = std::log2(e2 / e3);
    c.measured.emplace_back("model_order_dt_0.1_0.05", order_a);
    c.measured.emplace_back("model_order_dt_0.05_0.025", order_b);

    c.passed = scalar_order >= 3.9 && order_a >= 3.9 && order_b >= 3.9;
    return c;
}

ManeuverCheck check_turning_circle(const HydroParams& p, double n_sp) {
    ManeuverCheck c{"turning_circle", false, {}};
    bool ok = true;
    for (double side : {1.0, -1.0}) {
        VesselState s = straight_run_state(n_sp);
        s.delta_c = side * deg2rad(35.0);
        std::vector<double> tail_r;
        double max_extent = 0.0;
        const int substeps = 1000;  // 100 time units
        for (int i = 0; i < substeps; ++i) {
            s = rk4_step(s, p, 0.1);
            max_extent = std::max({max_extent, std::abs(s.x), std::abs(s.y)});
            if (i >= substeps - substeps / 5) tail_r.push_back(s.r);
        }
        const auto [mn, mx] = std::minmax_element(tail_r.begin(), tail_r.end());
        double mean = 0.0;
        for (double r : tail_r) mean += r;
        mean /= static_cast<double>(tail_r.size());
        const double spread = std::abs(mean) > 0.0 ? (*mx - *mn) / std::abs(mean) : 1e9;
        const double speed = std::hypot(s.u, s.v);
        const double radius = std::abs(mean) > 0.0 ? speed / std::abs(mean) : 1e9;

        const char* tag = side > 0.0 ? "stbd" : "port";
        c.measured.emplace_back(std::string("steady_r_") + tag, mean);
        c.measured.emplace_back(std::string("r_spread_frac_") + tag, spread);
        c.measured.emplace_back(std::string("radius_") + tag, radius);
        ok = ok && spread <= 0.05 && max_extent < 50.0 && std::isfinite(radius);
    }
    c.passed = ok;
    return c;
}

ManeuverCheck check_zigzag(const HydroParams& p, double n_sp) {
    ManeuverCheck c{"zigzag_20_20", false, {}};
    VesselState s = straight_run_state(n_sp);
    const double target = deg2rad(20.0);
    double cmd = deg2rad(20.0);  // positive rudder swings the bow to starboard
    int reversals = 0;
    double overshoot1 = 0.0, overshoot2 = 0.0;
    double extreme = 0.0;
    for (int i = 0; i < 1200 && reversals < 5; ++i) {
        s.delta_c = cmd;
        s = rk4_step(s, p, 0.1);
        extreme = std::max(extreme, std::abs(s.psi));
        const bool flip = (cmd > 0.0 && s.psi <= -target) || (cmd < 0.0 && s.psi >= target);
        if (flip) {
            ++reversals;
            const double overshoot = rad2deg(extreme) - 20.0;
            if (reversals == 2) overshoot1 = overshoot;
            if (reversals == 3) overshoot2 = overshoot;
            extreme = 0.0;
            cmd = -cmd;
        }
    }
    c.measured.emplace_back("reversals", static_cast<double>(reversals));
    c.measured.emplace_back("first_overshoot_deg", overshoot1);
    c.measured.emplace_back("second_overshoot_deg", overshoot2);
    c.passed = reversals >= 3 && overshoot1 >= 0.0 && overshoot1 < 30.0 &&
               overshoot2 >= 0.0 && overshoot2 < 30.0;
    return c;
}

ManeuverCheck check_stability(const HydroParams& p, double n_sp) {
    ManeuverCheck c{"sway_perturbation_decay", false, {}};
    VesselState s = straight_run_state(n_sp);
    s.v = 0.05;
    s = simulate(s, p, 0.0, 200);  // 20 time units
    c.measured.emplace_back("final_abs_v", std::abs(s.v));
    c.measured.emplace_back("final_abs_r", std::abs(s.r));
    c.passed = std::abs(s.v) < 0.025 && std::abs(s.r) < 0.025;
    return c;
}

}  // namespace

ManeuverReport validate_params(const HydroParams& params) {
    ManeuverReport report;
    double n_sp = 0.0;
    report.checks.push_back(check_calibration(params, n_sp));
    if (!report.checks.back().passed) return report;

    report.checks.push_back(check_straight_run(params, n_sp));
    report.checks.push_back(check_mirror(params, n_sp));
    report.checks.push_back(check_convergence(params, n_sp));
    report.checks.push_back(check_turning_circle(params, n_sp));
    report.checks.push_back(check_zigzag(params, n_sp));
    report.checks.push_back(check_stability(params, n_sp));
    return report;
}

}  // namespace navsim

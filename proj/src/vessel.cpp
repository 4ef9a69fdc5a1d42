#include "navsim/vessel.hpp"

#include <algorithm>
#include <cmath>

#include "navsim/errors.hpp"
#include "navsim/integrate.hpp"

namespace navsim {

namespace {

constexpr double kTinyRate = 1e-12;  // propeller rate below this produces no thrust

struct Forces {
    double X = 0.0;
    double Y = 0.0;
    double N = 0.0;
};

Forces hull_forces(const VesselState& s, const HullDerivatives& h) {
    const double u = s.u, v = s.v, r = s.r;
    Forces f;
    f.X = -h.R0 * u * std::abs(u) + h.Xvv * v * v + h.Xvr * v * r + h.Xrr * r * r +
          h.Xvvvv * v * v * v * v;
    f.Y = h.Yv * v + h.Yr * r + h.Yvvv * v * v * v + h.Yvvr * v * v * r +
          h.Yvrr * v * r * r + h.Yrrr * r * r * r;
    f.N = h.Nv * v + h.Nr * r + h.Nvvv * v * v * v + h.Nvvr * v * v * r +
          h.Nvrr * v * r * r + h.Nrrr * r * r * r;
    return f;
}

// Open-water thrust coefficient at the current advance ratio. Rate near zero
// is the guarded singularity: no thrust, no propeller race.
double thrust_coefficient(const VesselState& s, const PropellerParams& p) {
    if (s.n < kTinyRate) return 0.0;
    const double advance = s.u * (1.0 - p.w_p) / (s.n * p.diameter);
    return p.k0 + p.k1 * advance + p.k2 * advance * advance;
}

double propeller_surge(const VesselState& s, const PropellerParams& p) {
    if (s.n < kTinyRate) return 0.0;
    const double kt = thrust_coefficient(s, p);
    const double thrust = 2.0 * s.n * s.n * std::pow(p.diameter, 4) * kt;
    return (1.0 - p.t_p) * thrust;
}

Forces rudder_forces(const VesselState& s, const PropellerParams& p, const RudderParams& rd) {
    // Longitudinal inflow: wake-reduced hull flow accelerated by the propeller
    // race. Written without dividing by the advance ratio so u -> 0 stays finite.
    const double u_p = (1.0 - p.w_p) * s.u;
    const double kt = std::max(thrust_coefficient(s, p), 0.0);
    const double race = (8.0 / kPi) * kt * s.n * s.n * p.diameter * p.diameter;
    const double accelerated = u_p + rd.kappa * (std::sqrt(u_p * u_p + race) - u_p);
    const double u_R = rd.epsilon *
                       std::sqrt(rd.eta * accelerated * accelerated +
                                 (1.0 - rd.eta) * u_p * u_p);

    const double v_R = rd.gamma_R * (s.v + rd.l_R * s.r);
    const double attack = s.delta - std::atan2(v_R, u_R);
    const double speed_sq = u_R * u_R + v_R * v_R;
    const double normal_force = rd.area * rd.lift_gradient() * speed_sq * std::sin(attack);

    Forces f;
    f.X = -(1.0 - rd.t_R) * normal_force * std::sin(s.delta);
    f.Y = -(1.0 + rd.a_H) * normal_force * std::cos(s.delta);
    f.N = -(rd.x_R + rd.a_H * rd.x_H) * normal_force * std::cos(s.delta);
    return f;
}

}  // namespace

GcsRates kinematic_rates(const VesselState& s) {
    const double c = std::cos(s.psi), sn = std::sin(s.psi);
    return {s.u * c - s.v * sn, s.u * sn + s.v * c, s.r};
}

BodyAccel mmg_accelerations(const VesselState& s, const HydroParams& p) {
    const double m_u = p.mass + p.mx;
    const double m_v = p.mass + p.my;
    const double i_r = p.izz + p.jzz;
    const double coupling = p.xg * p.mass;
    const double det = m_v * i_r - coupling * coupling;
    if (m_u <= 0.0 || det <= 0.0) throw SingularMassMatrixError();

    const Forces hull = hull_forces(s, p.hull);
    const Forces rudder = rudder_forces(s, p.propeller, p.rudder);
    const double X = hull.X + propeller_surge(s, p.propeller) + rudder.X;
    const double Y = hull.Y + rudder.Y;
    const double N = hull.N + rudder.N;

    BodyAccel a;
    a.udot = (X + m_v * s.v * s.r + coupling * s.r * s.r) / m_u;

    // 2x2 solve for (vdot, rdot) with the CG coupling off-diagonal.
    const double rhs_v = Y - m_u * s.u * s.r;
    const double rhs_r = N - coupling * s.u * s.r;
    a.vdot = (i_r * rhs_v - coupling * rhs_r) / det;
    a.rdot = (m_v * rhs_r - coupling * rhs_v) / det;
    return a;
}

double rudder_update(double delta, double delta_c, double dt, const RudderParams& rudder) {
    const double limit = rudder.max_deflection;
    const double target = std::clamp(delta_c, -limit, limit);
    const double step = rudder.slew_rate * dt;
    double next = delta;
    if (target > delta) {
        next = std::min(delta + step, target);
    } else if (target < delta) {
        next = std::max(delta - step, target);
    }
    return std::clamp(next, -limit, limit);
}

VesselState rk4_step(const VesselState& state, const HydroParams& params, double dt) {
    VesselState work = state;
    work.delta = rudder_update(state.delta, state.delta_c, dt, params.rudder);

    const std::array<double, 6> y0{work.x, work.y, work.psi, work.u, work.v, work.r};
    const auto deriv = [&work, &params](const std::array<double, 6>& y) {
        VesselState s = work;
        s.x = y[0];
        s.y = y[1];
        s.psi = y[2];
        s.u = y[3];
        s.v = y[4];
        s.r = y[5];
        const GcsRates kin = kinematic_rates(s);
        const BodyAccel acc = mmg_accelerations(s, params);
        return std::array<double, 6>{kin.xdot, kin.ydot, kin.psidot,
                                     acc.udot, acc.vdot, acc.rdot};
    };

    const std::array<double, 6> y1 = rk4_classic(y0, dt, deriv);
    for (double c : y1) {
        if (!std::isfinite(c)) throw NonFiniteStateError();
    }

    VesselState out = work;
    out.x = y1[0];
    out.y = y1[1];
    out.psi = wrap_angle(y1[2]);
    out.u = y1[3];
    out.v = y1[4];
    out.r = y1[5];
    return out;
}

double self_propulsion_rate(const HydroParams& params, double n_max) {
    VesselState probe;
    probe.u = 1.0;

    const auto surge_accel = [&](double n) {
        probe.n = n;
        return mmg_accelerations(probe, params).udot;
    };

    // Log-spaced scan for a sign change, then bisection.
    constexpr int kScanPoints = 256;
    const double n_min = n_max * 1e-6;
    double lo = n_min;
    double f_lo = surge_accel(lo);
    double hi = 0.0;
    bool bracketed = false;
    const double ratio = std::pow(n_max / n_min, 1.0 / kScanPoints);
    for (int i = 1; i <= kScanPoints; ++i) {
        const double n = n_min * std::pow(ratio, i);
        const double f = surge_accel(n);
        if ((f_lo < 0.0 && f >= 0.0) || (f_lo > 0.0 && f <= 0.0)) {
            hi = n;
            bracketed = true;
            break;
        }
        lo = n;
        f_lo = f;
    }
    if (!bracketed) throw NoEquilibriumError();

    double mid = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        mid = 0.5 * (lo + hi);
        const double f = surge_accel(mid);
        if (std::abs(f) < 1e-10) return mid;
        if ((f < 0.0) == (f_lo < 0.0)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    throw NoEquilibriumError();
}

}  // namespace navsim

#include "navsim/collision_risk.hpp"

#include <cmath>

#include "navsim/errors.hpp"

namespace navsim {

RelativeKinematics relative_kinematics(Vec2 ship_pos, Vec2 ship_vel,
                                       Vec2 obs_pos, Vec2 obs_vel) {
    const Vec2 rel_pos = obs_pos - ship_pos;
    const Vec2 rel_vel = obs_vel - ship_vel;
    RelativeKinematics rel;
    rel.range = rel_pos.norm();
    rel.rel_speed = rel_vel.norm();
    rel.rel_course = azimuth(rel_vel);
    rel.obs_course = azimuth(obs_vel);
    rel.bearing = azimuth(rel_pos);
    return rel;
}

std::optional<CpaResult> dcpa_tcpa(const RelativeKinematics& rel) {
    if (rel.rel_speed <= kStationaryRelativeSpeed) return std::nullopt;
    const double angle = rel.rel_course - rel.bearing - kPi;
    CpaResult cpa;
    cpa.dcpa = rel.range * std::sin(angle);
    cpa.tcpa = rel.range / rel.rel_speed * std::cos(angle);
    return cpa;
}

double collision_risk(double dcpa, double tcpa) {
    if (tcpa <= 0.0) return 0.0;
    return std::exp(-std::abs(dcpa) - tcpa);
}

CRAssessment assess(int obstacle_id, Vec2 ship_pos, Vec2 ship_vel,
                    Vec2 obs_pos, Vec2 obs_vel) {
    CRAssessment a;
    a.obstacle_id = obstacle_id;
    a.rel = relative_kinematics(ship_pos, ship_vel, obs_pos, obs_vel);
    if (const auto cpa = dcpa_tcpa(a.rel)) {
        a.dcpa = cpa->dcpa;
        a.tcpa = cpa->tcpa;
        a.cr = collision_risk(cpa->dcpa, cpa->tcpa);
    } else {
        // Stationary relative motion: closest approach never changes, CR = 0.
        a.dcpa = a.rel.range;
        a.tcpa = 0.0;
        a.cr = 0.0;
    }
    return a;
}

std::size_t critical_obstacle(const std::vector<CRAssessment>& assessments) {
    if (assessments.empty()) throw EmptyListError("critical_obstacle: no assessments");

    std::size_t best = 0;
    bool any_risk = false;
    for (std::size_t i = 0; i < assessments.size(); ++i) {
        if (assessments[i].cr > 0.0) any_risk = true;
    }
    for (std::size_t i = 1; i < assessments.size(); ++i) {
        const CRAssessment& cand = assessments[i];
        const CRAssessment& cur = assessments[best];
        if (any_risk) {
            if (cand.cr > cur.cr ||
                (cand.cr == cur.cr && cand.obstacle_id < cur.obstacle_id)) {
                best = i;
            }
        } else {
            if (cand.rel.range < cur.rel.range ||
                (cand.rel.range == cur.rel.range && cand.obstacle_id < cur.obstacle_id)) {
                best = i;
            }
        }
    }
    return best;
}

}  // namespace navsim

#pragma once

#include <optional>
#include <vector>

#include "navsim/geometry.hpp"

namespace navsim {

// Relative velocities below this are treated as stationary: the closest point
// of approach is undefined (infinitely far in time) and CR is recorded as 0.
inline constexpr double kStationaryRelativeSpeed = 1e-9;

// Geometry of one ship/obstacle pair at an instant. Distances in ship
// lengths, speeds in units of design speed, times in L/U.
struct RelativeKinematics {
    double range = 0.0;       // R, center-to-center distance
    double rel_speed = 0.0;   // V_R, |obstacle velocity - ship velocity|
    double rel_course = 0.0;  // chi_R, azimuth of the relative velocity
    double obs_course = 0.0;  // chi_os, azimuth of the obstacle velocity (0 if stationary)
    double bearing = 0.0;     // theta, azimuth of (obstacle - ship) in the GCS
};

struct CpaResult {
    double dcpa = 0.0;  // signed distance at closest approach
    double tcpa = 0.0;  // time to closest approach; negative if already past
};

// Full per-obstacle assessment, as serialized by the risk command.
struct CRAssessment {
    int obstacle_id = 0;
    RelativeKinematics rel;
    double dcpa = 0.0;
    double tcpa = 0.0;
    double cr = 0.0;
};

RelativeKinematics relative_kinematics(Vec2 ship_pos, Vec2 ship_vel,
                                       Vec2 obs_pos, Vec2 obs_vel);

// Closest point of approach of two constant-velocity points:
//   DCPA = R sin(chi_R - theta - pi),  TCPA = (R / V_R) cos(chi_R - theta - pi).
// Returns nullopt when the relative motion is below the stationary threshold;
// callers map that to CR = 0.
std::optional<CpaResult> dcpa_tcpa(const RelativeKinematics& rel);

// CR = exp(-|DCPA| - TCPA) when TCPA > 0, else 0. The magnitude of DCPA is
// used so CR stays within [0, 1].
double collision_risk(double dcpa, double tcpa);

CRAssessment assess(int obstacle_id, Vec2 ship_pos, Vec2 ship_vel,
                    Vec2 obs_pos, Vec2 obs_vel);

// Index of the assessment with maximum CR; if every CR is 0, the nearest
// obstacle. Ties break toward the smallest obstacle id.
std::size_t critical_obstacle(const std::vector<CRAssessment>& assessments);

}  // namespace navsim

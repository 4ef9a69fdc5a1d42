#pragma once

#include <array>
#include <string>
#include <vector>

#include "navsim/collision_risk.hpp"
#include "navsim/geometry.hpp"
#include "navsim/rng.hpp"
#include "navsim/vessel.hpp"

namespace navsim {

// Discrete rudder command set, degrees, indexed by action 0..4.
inline constexpr std::array<double, 5> kRudderActionsDeg{-35.0, -20.0, 0.0, 20.0, 35.0};
inline constexpr int kNumActions = 5;

// Integration substep and the number of substeps per agent action. One agent
// step therefore spans 0.3 non-dim time units.
inline constexpr double kSubstepDt = 0.1;
inline constexpr int kSubstepsPerAction = 3;

// Obstacles never sensed closer than this placeholder when none exist.
inline constexpr double kNoObstacleDistance = 25.0;

// Collision envelope: ship counts as collided when the center distance drops
// to the obstacle radius plus half a ship length.
inline constexpr double kShipClearance = 0.5;

enum class ObsMode { Static, Dynamic };

enum class Status { Running, Success, Collision, Diverged, StepLimit };

std::string to_string(Status s);
std::string to_string(ObsMode m);

struct Obstacle {
    int id = 0;
    double x = 0.0;
    double y = 0.0;
    double vx = 0.0;
    double vy = 0.0;
    double radius = 0.0;  // S_obs, units of L

    Vec2 position() const { return {x, y}; }
    Vec2 velocity() const { return {vx, vy}; }
};

// One episode: waypoint legs, obstacle population, and termination settings.
// Training episodes have a single leg; evaluation scenarios may chain several
// (the ship advances to the next leg within success_radius of the active
// destination and terminates at the final one).
struct EpisodeSpec {
    ObsMode mode = ObsMode::Static;
    std::vector<Vec2> waypoints;  // >= 2
    std::vector<Obstacle> obstacles;
    int max_steps = 160;
    double success_radius = 0.5;
    std::uint64_t seed = 0;

    Vec2 start_wp() const { return waypoints.front(); }
    Vec2 dest_wp() const { return waypoints[1]; }
};

// The state vector fed to the Q-network. Static mode exposes the first seven
// entries, dynamic mode appends the body-frame relative velocity pair. The
// ordering is frozen; a golden-vector test guards it.
struct Observation {
    ObsMode mode = ObsMode::Static;
    double cross_track = 0.0;      // d_c, signed (+ when the ship is to port of track)
    double course_error = 0.0;     // chi_e, rad
    double dist_waypoint = 0.0;    // d_wp
    double yaw_rate = 0.0;         // r
    double dist_obstacle = 0.0;    // d_obs to the critical obstacle
    double bearing_obstacle = 0.0; // psi_obs, relative bearing from the heading
    double obstacle_size = 0.0;    // S_obs
    double rel_vx = 0.0;           // v_x, dynamic mode only
    double rel_vy = 0.0;           // v_y, dynamic mode only

    int dim() const { return mode == ObsMode::Static ? 7 : 9; }
    std::vector<double> to_vector() const;
};

struct StepOutcome {
    double reward = 0.0;  // r1 + r2 + r3 plus any terminal bonus/penalty
    double r1 = 0.0;
    double r2 = 0.0;
    double r3 = 0.0;
    Status status = Status::Running;
    Observation observation;
};

struct RewardTerms {
    double r1 = 0.0;
    double r2 = 0.0;
    double r3 = 0.0;
    double total = 0.0;
};

// --- guidance geometry -----------------------------------------------------

// Perpendicular distance from the ship to the infinite line through the
// waypoints, positive when the ship lies to port of the track direction.
double cross_track_error(Vec2 ship_pos, Vec2 start_wp, Vec2 dest_wp);

// wrap(track azimuth - course over ground); the heading substitutes for the
// course below 1e-9 speed.
double course_angle_error(Vec2 ship_vel_gcs, double heading, Vec2 start_wp, Vec2 dest_wp);

// Shaped per-step rewards:
//   r1 = 2 exp(-d_c^2 / 12.5) - 1
//   r2 = 1.3 exp(-10 |chi_e|) - 0.3
//   r3 = -d_wp / 4
RewardTerms reward_step(double cross_track, double course_error, double dist_waypoint);

// Terminal status for a single-leg spec, in precedence order
// Collision > Success > Diverged > StepLimit.
Status terminal_check(const VesselState& ship, const EpisodeSpec& spec, int step_count);

// Terminal adjustment added to the shaped reward: +20 on Success, -100/-200
// on Collision (static/dynamic), 0 otherwise.
double terminal_reward(Status status, ObsMode mode);

// --- episode samplers -------------------------------------------------------

// Destination drawn 8L..18L away in a random direction. 60% of episodes put
// one stationary obstacle on the track segment (fraction 0.25..0.75 along it);
// the rest place it uniformly inside a circle around the start whose radius is
// 0.25..0.75 of the leg length, so it may miss the path entirely.
EpisodeSpec sample_static_episode(Rng& rng, bool with_obstacle = true);

// Destination drawn 8L..18L away; four obstacles at 5L..20L from the origin
// with speeds 0..1.67 on random courses and radii 0..1.
EpisodeSpec sample_dynamic_episode(Rng& rng);

// --- episode orchestration ---------------------------------------------------

class Environment {
public:
    Environment(const VesselModel& model, EpisodeSpec spec);

    // Ship at the origin, psi = 0, u = 1, rudder centered, propeller at the
    // calibrated self-propulsion point.
    void reset(EpisodeSpec spec);

    StepOutcome step(int action_index);

    const VesselState& state() const { return state_; }
    const EpisodeSpec& spec() const { return spec_; }
    const Observation& observation() const { return obs_; }
    const std::vector<Obstacle>& obstacles() const { return obstacles_; }
    Status status() const { return status_; }
    int step_count() const { return step_count_; }
    int legs_completed() const { return legs_completed_; }
    // Negative surge is abnormal but not forbidden; this flags it for reports.
    bool negative_surge_seen() const { return negative_surge_seen_; }
    int total_legs() const { return static_cast<int>(spec_.waypoints.size()) - 1; }
    Vec2 active_start() const { return spec_.waypoints[leg_]; }
    Vec2 active_dest() const { return spec_.waypoints[leg_ + 1]; }

    // Assessments for the current instant, ordered as the obstacle list.
    std::vector<CRAssessment> assess_obstacles() const;
    // CR of the critical obstacle (0 when there are none).
    double critical_risk() const;

private:
    void refresh_observation();
    Status check_terminal(int step_count) const;

    const VesselModel* model_;
    EpisodeSpec spec_;
    VesselState state_;
    std::vector<Obstacle> obstacles_;
    Observation obs_;
    Status status_ = Status::Running;
    int step_count_ = 0;
    int leg_ = 0;
    int legs_completed_ = 0;
    bool negative_surge_seen_ = false;
};

}  // namespace navsim

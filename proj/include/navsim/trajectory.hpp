#pragma once

#include <functional>
#include <string>
#include <vector>

#include "navsim/environment.hpp"
#include "navsim/qnet.hpp"

namespace navsim {

// One CSV row. Angles are converted to degrees at the file boundary; every
// other quantity stays in non-dimensional units (L, U, L/U).
struct TrajectoryPoint {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double psi = 0.0;    // rad internally
    double u = 0.0;
    double v = 0.0;
    double r = 0.0;
    double delta = 0.0;  // rad internally
    double d_c = 0.0;
    double chi_e = 0.0;  // rad internally
    double d_wp = 0.0;
    double cr = 0.0;     // CR of the critical obstacle
    double reward = 0.0;
};

inline constexpr const char* kTrajectoryCsvHeader =
    "t,x,y,psi_deg,u,v,r,delta_deg,d_c,chi_e_deg,d_wp,cr,reward";

using Policy = std::function<int(const Observation&)>;

Policy fixed_action_policy(int action_index);
Policy greedy_policy(const QNetwork& net);

struct Rollout {
    std::vector<TrajectoryPoint> points;  // steps + 1 rows, initial state first
    Status status = Status::Running;
    double episode_return = 0.0;
    int legs_completed = 0;
    // Obstacle tracks sampled once per agent step, for plotting.
    std::vector<std::vector<Vec2>> obstacle_tracks;
};

// Run an episode in `env` under `policy` for at most `max_steps` agent steps
// (capped by the episode's own limit).
Rollout run_rollout(Environment& env, const Policy& policy, int max_steps);

void write_trajectory_csv(const std::string& path, const std::vector<TrajectoryPoint>& points,
                          double length_m, double design_speed_mps);

}  // namespace navsim

#include "navsim/trajectory.hpp"

#include <cstdio>
#include <fstream>

#include "navsim/errors.hpp"
#include "navsim/qnet.hpp"

namespace navsim {

Policy fixed_action_policy(int action_index) {
    if (action_index < 0 || action_index >= kNumActions) {
        throw InputError("fixed action index must be 0..4");
    }
    return [action_index](const Observation&) { return action_index; };
}

Policy greedy_policy(const QNetwork& net) {
    return [&net](const Observation& obs) {
        const std::vector<double> q = net.forward(obs.to_vector());
        int best = 0;
        for (int a = 1; a < static_cast<int>(q.size()); ++a) {
            if (q[static_cast<std::size_t>(a)] > q[static_cast<std::size_t>(best)]) best = a;
        }
        return best;
    };
}

namespace {

TrajectoryPoint snapshot(const Environment& env, double t, double reward) {
    const VesselState& s = env.state();
    const Observation& o = env.observation();
    TrajectoryPoint p;
    p.t = t;
    p.x = s.x;
    p.y = s.y;
    p.psi = s.psi;
    p.u = s.u;
    p.v = s.v;
    p.r = s.r;
    p.delta = s.delta;
    p.d_c = o.cross_track;
    p.chi_e = o.course_error;
    p.d_wp = o.dist_waypoint;
    p.cr = env.critical_risk();
    p.reward = reward;
    return p;
}

}  // namespace

Rollout run_rollout(Environment& env, const Policy& policy, int max_steps) {
    Rollout out;
    out.obstacle_tracks.resize(env.obstacles().size());

    auto record_obstacles = [&] {
        for (std::size_t i = 0; i < env.obstacles().size(); ++i) {
            out.obstacle_tracks[i].push_back(env.obstacles()[i].position());
        }
    };

    const double step_dt = kSubstepDt * kSubstepsPerAction;
    out.points.push_back(snapshot(env, 0.0, 0.0));
    record_obstacles();

    int steps = 0;
    while (env.status() == Status::Running && steps < max_steps) {
        const int action = policy(env.observation());
        const StepOutcome outcome = env.step(action);
        ++steps;
        out.episode_return += outcome.reward;
        out.points.push_back(snapshot(env, steps * step_dt, outcome.reward));
        record_obstacles();
    }
    out.status = env.status();
    out.legs_completed = env.legs_completed();
    return out;
}

void write_trajectory_csv(const std::string& path, const std::vector<TrajectoryPoint>& points,
                          double length_m, double design_speed_mps) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw InputError("cannot write trajectory CSV: " + path);

    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "# units: lengths in L=%.6g m, speeds in U=%.6g m/s, time in L/U; "
                  "angles in degrees\n",
                  length_m, design_speed_mps);
    out << buf;
    out << kTrajectoryCsvHeader << '\n';
    for (const TrajectoryPoint& p : points) {
        std::snprintf(buf, sizeof(buf),
                      "%.4f,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,"
                      "%.10g,%.10g,%.10g\n",
                      p.t, p.x, p.y, rad2deg(p.psi), p.u, p.v, p.r, rad2deg(p.delta),
                      p.d_c, rad2deg(p.chi_e), p.d_wp, p.cr, p.reward);
        out << buf;
    }
}

}  // namespace navsim

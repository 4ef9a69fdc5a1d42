#include "navsim/environment.hpp"

#include <cmath>

#include "navsim/errors.hpp"

namespace navsim {

std::string to_string(Status s) {
    switch (s) {
        case Status::Running: return "Running";
        case Status::Success: return "Success";
        case Status::Collision: return "Collision";
        case Status::Diverged: return "Diverged";
        case Status::StepLimit: return "StepLimit";
    }
    return "Unknown";
}

std::string to_string(ObsMode m) {
    return m == ObsMode::Static ? "static" : "dynamic";
}

std::vector<double> Observation::to_vector() const {
    std::vector<double> v{cross_track, course_error, dist_waypoint, yaw_rate,
                          dist_obstacle, bearing_obstacle, obstacle_size};
    if (mode == ObsMode::Dynamic) {
        v.push_back(rel_vx);
        v.push_back(rel_vy);
    }
    return v;
}

double cross_track_error(Vec2 ship_pos, Vec2 start_wp, Vec2 dest_wp) {
    const Vec2 track = dest_wp - start_wp;
    const double len = track.norm();
    if (len < 1e-12) throw DegeneratePathError();
    // Positive on the port side of the track direction (left of travel).
    return track.cross(ship_pos - start_wp) / len;
}

double course_angle_error(Vec2 ship_vel_gcs, double heading, Vec2 start_wp, Vec2 dest_wp) {
    const Vec2 track = dest_wp - start_wp;
    const double track_azimuth = azimuth(track);
    const double course =
        ship_vel_gcs.norm() < 1e-9 ? heading : azimuth(ship_vel_gcs);
    return wrap_angle(track_azimuth - course);
}

RewardTerms reward_step(double cross_track, double course_error, double dist_waypoint) {
    RewardTerms t;
    t.r1 = 2.0 * std::exp(-cross_track * cross_track / 12.5) - 1.0;
    t.r2 = 1.3 * std::exp(-10.0 * std::abs(course_error)) - 0.3;
    t.r3 = -dist_waypoint / 4.0;
    t.total = t.r1 + t.r2 + t.r3;
    return t;
}

namespace {

bool collided(Vec2 ship_pos, const std::vector<Obstacle>& obstacles) {
    for (const Obstacle& o : obstacles) {
        if ((o.position() - ship_pos).norm() <= o.radius + kShipClearance) return true;
    }
    return false;
}

bool diverged(Vec2 ship_pos, Vec2 ship_vel, Vec2 start_wp, Vec2 dest_wp) {
    const Vec2 track = dest_wp - start_wp;
    const Vec2 to_dest = dest_wp - ship_pos;
    return track.dot(to_dest) < 0.0 && ship_vel.dot(to_dest) < 0.0;
}

}  // namespace

Status terminal_check(const VesselState& ship, const EpisodeSpec& spec, int step_count) {
    const Vec2 pos = ship.position();
    if (collided(pos, spec.obstacles)) return Status::Collision;
    if ((spec.dest_wp() - pos).norm() <= spec.success_radius) return Status::Success;
    if (diverged(pos, ship.velocity_gcs(), spec.start_wp(), spec.dest_wp())) {
        return Status::Diverged;
    }
    if (step_count >= spec.max_steps) return Status::StepLimit;
    return Status::Running;
}

double terminal_reward(Status status, ObsMode mode) {
    switch (status) {
        case Status::Success: return 20.0;
        case Status::Collision: return mode == ObsMode::Static ? -100.0 : -200.0;
        default: return 0.0;
    }
}

EpisodeSpec sample_static_episode(Rng& rng, bool with_obstacle) {
    EpisodeSpec spec;
    spec.mode = ObsMode::Static;
    const double dist = rng.uniform(8.0, 18.0);
    const double bearing = rng.angle();
    const Vec2 dest{dist * std::cos(bearing), dist * std::sin(bearing)};
    spec.waypoints = {{0.0, 0.0}, dest};

    if (with_obstacle) {
        Obstacle obs;
        obs.id = 0;
        if (rng.uniform() < 0.6) {
            // On the track segment.
            const double frac = rng.uniform(0.25, 0.75);
            obs.x = frac * dest.x;
            obs.y = frac * dest.y;
        } else {
            // Anywhere inside a circle around the start; possibly off the path.
            const double circle_radius = rng.uniform(0.25, 0.75) * dist;
            const double rr = circle_radius * std::sqrt(rng.uniform());
            const double ang = rng.angle();
            obs.x = rr * std::cos(ang);
            obs.y = rr * std::sin(ang);
        }
        obs.radius = rng.uniform(0.25, 1.0);
        spec.obstacles.push_back(obs);
    }
    return spec;
}

EpisodeSpec sample_dynamic_episode(Rng& rng) {
    EpisodeSpec spec;
    spec.mode = ObsMode::Dynamic;
    const double dist = rng.uniform(8.0, 18.0);
    const double bearing = rng.angle();
    spec.waypoints = {{0.0, 0.0}, {dist * std::cos(bearing), dist * std::sin(bearing)}};

    constexpr int kObstacles = 4;
    for (int i = 0; i < kObstacles; ++i) {
        Obstacle obs;
        obs.id = i;
        const double range = rng.uniform(5.0, 20.0);
        const double place = rng.angle();
        obs.x = range * std::cos(place);
        obs.y = range * std::sin(place);
        const double speed = rng.uniform(0.0, 1.67);
        const double course = rng.angle();
        obs.vx = speed * std::cos(course);
        obs.vy = speed * std::sin(course);
        obs.radius = rng.uniform(0.0, 1.0);
        spec.obstacles.push_back(obs);
    }
    return spec;
}

Environment::Environment(const VesselModel& model, EpisodeSpec spec) : model_(&model) {
    reset(std::move(spec));
}

void Environment::reset(EpisodeSpec spec) {
    if (spec.waypoints.size() < 2) throw InputError("episode needs at least two waypoints");
    for (std::size_t i = 0; i + 1 < spec.waypoints.size(); ++i) {
        if ((spec.waypoints[i + 1] - spec.waypoints[i]).norm() < 1e-12) {
            throw DegeneratePathError();
        }
    }
    spec_ = std::move(spec);
    obstacles_ = spec_.obstacles;

    state_ = VesselState{};
    state_.u = 1.0;
    state_.n = model_->n_sp;

    status_ = Status::Running;
    step_count_ = 0;
    leg_ = 0;
    legs_completed_ = 0;
    negative_surge_seen_ = false;
    refresh_observation();
}

std::vector<CRAssessment> Environment::assess_obstacles() const {
    std::vector<CRAssessment> out;
    out.reserve(obstacles_.size());
    const Vec2 pos = state_.position();
    const Vec2 vel = state_.velocity_gcs();
    for (const Obstacle& o : obstacles_) {
        out.push_back(assess(o.id, pos, vel, o.position(), o.velocity()));
    }
    return out;
}

double Environment::critical_risk() const {
    if (obstacles_.empty()) return 0.0;
    const auto assessments = assess_obstacles();
    return assessments[critical_obstacle(assessments)].cr;
}

Status Environment::check_terminal(int step_count) const {
    const Vec2 pos = state_.position();
    if (collided(pos, obstacles_)) return Status::Collision;
    if (diverged(pos, state_.velocity_gcs(), active_start(), active_dest())) {
        return Status::Diverged;
    }
    if (step_count >= spec_.max_steps) return Status::StepLimit;
    return Status::Running;
}

StepOutcome Environment::step(int action_index) {
    if (status_ != Status::Running) {
        throw Error("step() called on a terminated episode");
    }
    if (action_index < 0 || action_index >= kNumActions) {
        throw InputError("action index out of range");
    }

    state_.delta_c = deg2rad(kRudderActionsDeg[static_cast<std::size_t>(action_index)]);
    for (int i = 0; i < kSubstepsPerAction; ++i) {
        state_ = rk4_step(state_, model_->params, kSubstepDt);
        for (Obstacle& o : obstacles_) {
            o.x += o.vx * kSubstepDt;
            o.y += o.vy * kSubstepDt;
        }
    }
    ++step_count_;
    if (state_.u < 0.0) negative_surge_seen_ = true;

    const Vec2 pos = state_.position();
    if (collided(pos, obstacles_)) {
        status_ = Status::Collision;
    } else {
        // Waypoint switching: advance the leg on reaching the active
        // destination; reaching the final one is Success.
        if ((active_dest() - pos).norm() <= spec_.success_radius) {
            if (leg_ + 1 >= total_legs()) {
                status_ = Status::Success;
                legs_completed_ = total_legs();
            } else {
                ++leg_;
                ++legs_completed_;
            }
        }
        if (status_ == Status::Running) {
            status_ = check_terminal(step_count_);
        }
    }

    refresh_observation();
    const RewardTerms terms =
        reward_step(obs_.cross_track, obs_.course_error, obs_.dist_waypoint);

    StepOutcome outcome;
    outcome.r1 = terms.r1;
    outcome.r2 = terms.r2;
    outcome.r3 = terms.r3;
    outcome.reward = terms.total + terminal_reward(status_, spec_.mode);
    outcome.status = status_;
    outcome.observation = obs_;
    return outcome;
}

void Environment::refresh_observation() {
    obs_ = Observation{};
    obs_.mode = spec_.mode;
    obs_.cross_track = cross_track_error(state_.position(), active_start(), active_dest());
    obs_.course_error = course_angle_error(state_.velocity_gcs(), state_.psi,
                                           active_start(), active_dest());
    obs_.dist_waypoint = (active_dest() - state_.position()).norm();
    obs_.yaw_rate = state_.r;

    if (obstacles_.empty()) {
        obs_.dist_obstacle = kNoObstacleDistance;
        obs_.bearing_obstacle = 0.0;
        obs_.obstacle_size = 0.0;
        obs_.rel_vx = 0.0;
        obs_.rel_vy = 0.0;
        return;
    }

    const auto assessments = assess_obstacles();
    const std::size_t idx = critical_obstacle(assessments);
    const Obstacle& critical = obstacles_[idx];
    const CRAssessment& a = assessments[idx];

    obs_.dist_obstacle = a.rel.range;
    obs_.bearing_obstacle = wrap_angle(a.rel.bearing - state_.psi);
    obs_.obstacle_size = critical.radius;

    if (spec_.mode == ObsMode::Dynamic) {
        // Obstacle velocity relative to the ship, rotated into body axes.
        const Vec2 rel = critical.velocity() - state_.velocity_gcs();
        const double c = std::cos(state_.psi), s = std::sin(state_.psi);
        obs_.rel_vx = c * rel.x + s * rel.y;
        obs_.rel_vy = -s * rel.x + c * rel.y;
    }
}

}  // namespace navsim

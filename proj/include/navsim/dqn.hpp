#pragma once

#include <string>
#include <vector>

#include "navsim/environment.hpp"
#include "navsim/qnet.hpp"
#include "navsim/replay.hpp"
#include "navsim/rng.hpp"

namespace navsim {

// Hyperparameters. Defaults are the static-obstacle set; dynamic mode flips
// the handful that differ (decay rate, episode count, update period).
struct TrainConfig {
    ObsMode mode = ObsMode::Static;
    bool obstacles = true;
    int episodes = 9000;
    int max_steps = 160;
    double lr0 = 7.5e-4;
    double decay_steps = 50000.0;
    double decay_rate = 0.4;
    bool staircase_lr = false;
    double gamma = 0.97;
    int batch_size = 128;
    std::size_t buffer_capacity = 100000;
    int update_every = 10;       // env steps between gradient updates
    int target_update_every = 1; // env steps between Polyak updates
    double tau = 0.01;
    std::vector<int> hidden{128, 128};
    std::uint64_t seed = 1;
    int checkpoint_every = 1000; // episodes; 0 disables periodic checkpoints

    static TrainConfig defaults_for(ObsMode mode);
    // Parse a config JSON document; missing fields take the mode defaults,
    // unknown keys are rejected.
    static TrainConfig from_json_text(const std::string& text);
    std::string to_json_text() const;
    void validate() const;

    int observation_dim() const { return mode == ObsMode::Static ? 7 : 9; }
    std::vector<int> widths() const;
};

// Linear exploration schedule, 1 at the first episode to 0 at the last.
double epsilon_at(int episode, int total_episodes);

// Exponentially decaying learning rate, continuous unless staircase is set:
// lr0 * decay_rate^(update_step / decay_steps).
double lr_at(long long update_step, const TrainConfig& cfg);

// Epsilon-greedy action: uniform with probability epsilon, otherwise the
// argmax Q (ties resolve to the lowest index).
int act(const QNetwork& net, std::span<const double> obs, double epsilon, Rng& rng);

// y_i = r_i + gamma * max_a Q_target(s'_i, a) * (1 - done_i)
std::vector<double> td_targets(const std::vector<const Transition*>& batch,
                               const QNetwork& target_net, double gamma);

// Mean-squared TD error on the taken actions, one Adam step, returns the
// pre-update loss. Throws NonFiniteLossError on divergence.
double update(QNetwork& net, const QNetwork& target_net,
              const std::vector<const Transition*>& batch, double gamma,
              double lr, Adam& optimizer);

// theta_target <- tau*theta + (1 - tau)*theta_target
void polyak(QNetwork& target_net, const QNetwork& net, double tau);

struct EpisodeRecord {
    int episode = 0;
    double episode_return = 0.0;
    double avg100 = 0.0;  // moving average over the trailing 100 episodes
    double epsilon = 0.0;
    int steps = 0;
    Status status = Status::Running;
};

struct TrainResult {
    std::vector<EpisodeRecord> log;
    bool aborted = false;  // training loss went non-finite
    long long env_steps = 0;
    long long updates = 0;
    std::string final_checkpoint;
    std::vector<std::string> checkpoints;
    std::string log_path;
};

// Full training loop: per-episode sampling, replay, scheduled updates,
// Polyak-averaged target. Writes train_log.jsonl and checkpoints under
// out_dir. Fully reproducible from cfg.seed.
TrainResult train(const VesselModel& model, const TrainConfig& cfg,
                  const std::string& out_dir);

struct EpisodeEval {
    int index = 0;
    Status status = Status::Running;
    double episode_return = 0.0;
    int steps = 0;
    double cte_rms = 0.0;
    int legs_completed = 0;
    int total_legs = 0;
};

struct EvalMetrics {
    int episodes = 0;
    double success_rate = 0.0;
    double collision_rate = 0.0;
    double mean_return = 0.0;
    double mean_cte_rms = 0.0;
    std::vector<EpisodeEval> per_episode;
};

// Greedy-policy evaluation over a list of concrete episodes. Empty lists are
// an error; a network whose input width disagrees with the episode mode
// raises DimensionMismatchError.
EvalMetrics evaluate(const QNetwork& net, const VesselModel& model,
                     const std::vector<EpisodeSpec>& specs);

}  // namespace navsim

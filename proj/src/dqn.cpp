#include "navsim/dqn.hpp"

#include <cmath>
#include <deque>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "navsim/checkpoint.hpp"
#include "navsim/errors.hpp"

namespace navsim {

namespace {
using nlohmann::json;
}

TrainConfig TrainConfig::defaults_for(ObsMode mode) {
    TrainConfig cfg;
    cfg.mode = mode;
    if (mode == ObsMode::Dynamic) {
        cfg.episodes = 8000;
        cfg.decay_rate = 0.5;
        cfg.update_every = 5;
    }
    return cfg;
}

TrainConfig TrainConfig::from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(std::string("config is not valid JSON: ") + e.what());
    }

    const std::string mode_name = doc.value("mode", "static");
    ObsMode mode;
    if (mode_name == "static") {
        mode = ObsMode::Static;
    } else if (mode_name == "dynamic") {
        mode = ObsMode::Dynamic;
    } else {
        throw InputError("config.mode must be \"static\" or \"dynamic\"");
    }

    TrainConfig cfg = defaults_for(mode);
    for (const auto& item : doc.items()) {
        const std::string& key = item.key();
        const json& val = item.value();
        if (key == "mode") {
            // handled above
        } else if (key == "obstacles") {
            cfg.obstacles = val.get<bool>();
        } else if (key == "episodes") {
            cfg.episodes = val.get<int>();
        } else if (key == "max_steps") {
            cfg.max_steps = val.get<int>();
        } else if (key == "lr0") {
            cfg.lr0 = val.get<double>();
        } else if (key == "decay_steps") {
            cfg.decay_steps = val.get<double>();
        } else if (key == "decay_rate") {
            cfg.decay_rate = val.get<double>();
        } else if (key == "staircase_lr") {
            cfg.staircase_lr = val.get<bool>();
        } else if (key == "gamma") {
            cfg.gamma = val.get<double>();
        } else if (key == "batch_size") {
            cfg.batch_size = val.get<int>();
        } else if (key == "buffer_capacity") {
            cfg.buffer_capacity = val.get<std::size_t>();
        } else if (key == "update_every") {
            cfg.update_every = val.get<int>();
        } else if (key == "target_update_every") {
            cfg.target_update_every = val.get<int>();
        } else if (key == "tau") {
            cfg.tau = val.get<double>();
        } else if (key == "hidden") {
            cfg.hidden = val.get<std::vector<int>>();
        } else if (key == "seed") {
            cfg.seed = val.get<std::uint64_t>();
        } else if (key == "checkpoint_every") {
            cfg.checkpoint_every = val.get<int>();
        } else {
            throw UnknownKeyError("config." + key);
        }
    }
    cfg.validate();
    return cfg;
}

std::string TrainConfig::to_json_text() const {
    json doc;
    doc["mode"] = mode == ObsMode::Static ? "static" : "dynamic";
    doc["obstacles"] = obstacles;
    doc["episodes"] = episodes;
    doc["max_steps"] = max_steps;
    doc["lr0"] = lr0;
    doc["decay_steps"] = decay_steps;
    doc["decay_rate"] = decay_rate;
    doc["staircase_lr"] = staircase_lr;
    doc["gamma"] = gamma;
    doc["batch_size"] = batch_size;
    doc["buffer_capacity"] = buffer_capacity;
    doc["update_every"] = update_every;
    doc["target_update_every"] = target_update_every;
    doc["tau"] = tau;
    doc["hidden"] = hidden;
    doc["seed"] = seed;
    doc["checkpoint_every"] = checkpoint_every;
    return doc.dump();
}

void TrainConfig::validate() const {
    if (episodes <= 0) throw InputError("config.episodes must be positive");
    if (max_steps <= 0) throw InputError("config.max_steps must be positive");
    if (lr0 <= 0.0) throw InputError("config.lr0 must be positive");
    if (decay_steps <= 0.0) throw InputError("config.decay_steps must be positive");
    if (decay_rate <= 0.0) throw InputError("config.decay_rate must be positive");
    if (gamma <= 0.0 || gamma >= 1.0) throw InputError("config.gamma must be in (0, 1)");
    if (batch_size <= 0) throw InputError("config.batch_size must be positive");
    if (buffer_capacity == 0) throw InputError("config.buffer_capacity must be positive");
    if (update_every <= 0) throw InputError("config.update_every must be positive");
    if (target_update_every <= 0) {
        throw InputError("config.target_update_every must be positive");
    }
    if (tau <= 0.0 || tau > 1.0) throw InputError("config.tau must be in (0, 1]");
    if (hidden.empty()) throw InputError("config.hidden must name at least one layer");
}

std::vector<int> TrainConfig::widths() const {
    std::vector<int> w{observation_dim()};
    w.insert(w.end(), hidden.begin(), hidden.end());
    w.push_back(kNumActions);
    return w;
}

double epsilon_at(int episode, int total_episodes) {
    return 1.0 - static_cast<double>(episode) / static_cast<double>(total_episodes);
}

double lr_at(long long update_step, const TrainConfig& cfg) {
    double exponent = static_cast<double>(update_step) / cfg.decay_steps;
    if (cfg.staircase_lr) exponent = std::floor(exponent);
    return cfg.lr0 * std::pow(cfg.decay_rate, exponent);
}

int act(const QNetwork& net, std::span<const double> obs, double epsilon, Rng& rng) {
    if (epsilon > 0.0 && rng.uniform() < epsilon) {
        return static_cast<int>(rng.uniform_int(kNumActions));
    }
    const std::vector<double> q = net.forward(obs);
    int best = 0;
    for (int a = 1; a < static_cast<int>(q.size()); ++a) {
        if (q[static_cast<std::size_t>(a)] > q[static_cast<std::size_t>(best)]) best = a;
    }
    return best;
}

std::vector<double> td_targets(const std::vector<const Transition*>& batch,
                               const QNetwork& target_net, double gamma) {
    std::vector<double> targets;
    targets.reserve(batch.size());
    for (const Transition* t : batch) {
        double bootstrap = 0.0;
        if (!t->done) {
            const std::vector<double> q = target_net.forward(t->next_state);
            double best = q[0];
            for (double qa : q) best = std::max(best, qa);
            bootstrap = gamma * best;
        }
        targets.push_back(t->reward + bootstrap);
    }
    return targets;
}

double update(QNetwork& net, const QNetwork& target_net,
              const std::vector<const Transition*>& batch, double gamma,
              double lr, Adam& optimizer) {
    if (batch.empty()) throw EmptyListError("update: empty batch");

    const std::vector<double> targets = td_targets(batch, target_net, gamma);
    NetGradient grad = NetGradient::zeros_like(net);
    const double inv_batch = 1.0 / static_cast<double>(batch.size());

    double loss = 0.0;
    std::vector<double> output_grad(static_cast<std::size_t>(net.output_dim()), 0.0);
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const Transition& t = *batch[i];
        const ForwardTrace trace = forward_trace(net, t.state);
        const double err = trace.output[static_cast<std::size_t>(t.action)] - targets[i];
        loss += err * err * inv_batch;

        std::fill(output_grad.begin(), output_grad.end(), 0.0);
        output_grad[static_cast<std::size_t>(t.action)] = 2.0 * err * inv_batch;
        backward(net, trace, output_grad, grad);
    }

    if (!std::isfinite(loss)) throw NonFiniteLossError();
    optimizer.step(net, grad, lr);
    return loss;
}

void polyak(QNetwork& target_net, const QNetwork& net, double tau) {
    if (target_net.widths() != net.widths()) {
        throw ShapeMismatchError("polyak: network shapes differ");
    }
    for (std::size_t l = 0; l < net.layers().size(); ++l) {
        auto blend = [tau](std::vector<double>& tgt, const std::vector<double>& src) {
            for (std::size_t i = 0; i < tgt.size(); ++i) {
                tgt[i] = tau * src[i] + (1.0 - tau) * tgt[i];
            }
        };
        blend(target_net.layers()[l].weights, net.layers()[l].weights);
        blend(target_net.layers()[l].biases, net.layers()[l].biases);
    }
}

namespace {

void write_log_line(std::ofstream& out, const EpisodeRecord& rec) {
    json line;
    line["episode"] = rec.episode;
    line["return"] = rec.episode_return;
    line["avg100"] = rec.avg100;
    line["epsilon"] = rec.epsilon;
    line["steps"] = rec.steps;
    line["status"] = to_string(rec.status);
    out << line.dump() << '\n';
}

std::string checkpoint_name(const std::string& out_dir, int episode) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "ckpt_ep%06d.navsim", episode);
    return out_dir + "/" + buf;
}

}  // namespace

TrainResult train(const VesselModel& model, const TrainConfig& cfg,
                  const std::string& out_dir) {
    cfg.validate();
    std::filesystem::create_directories(out_dir);

    Rng rng(cfg.seed);
    QNetwork net(cfg.widths());
    net.init_weights(rng);
    QNetwork target_net = net;
    Adam optimizer(net);
    ReplayBuffer buffer(cfg.buffer_capacity);

    EpisodeSpec placeholder;
    placeholder.mode = cfg.mode;
    placeholder.waypoints = {{0.0, 0.0}, {10.0, 0.0}};
    Environment env(model, placeholder);

    TrainResult result;
    result.log_path = out_dir + "/train_log.jsonl";
    std::ofstream log_out(result.log_path, std::ios::trunc);
    if (!log_out) throw InputError("cannot write training log: " + result.log_path);

    QNetwork last_good = net;
    long long last_good_step = 0;
    std::deque<double> window;
    double window_sum = 0.0;
    long long env_steps = 0;
    long long updates = 0;

    for (int episode = 0; episode < cfg.episodes; ++episode) {
        const double eps = epsilon_at(episode, cfg.episodes);
        EpisodeSpec spec = cfg.mode == ObsMode::Static
                               ? sample_static_episode(rng, cfg.obstacles)
                               : sample_dynamic_episode(rng);
        spec.max_steps = cfg.max_steps;
        env.reset(std::move(spec));

        std::vector<double> obs = env.observation().to_vector();
        double episode_return = 0.0;
        int steps = 0;
        bool aborted = false;

        while (env.status() == Status::Running) {
            const int action = act(net, obs, eps, rng);
            const StepOutcome outcome = env.step(action);
            std::vector<double> next_obs = outcome.observation.to_vector();
            const bool done = outcome.status != Status::Running;
            buffer.push({obs, action, outcome.reward, next_obs, done});
            obs = std::move(next_obs);
            episode_return += outcome.reward;
            ++steps;
            ++env_steps;

            if (env_steps % cfg.update_every == 0 &&
                buffer.size() >= static_cast<std::size_t>(cfg.batch_size)) {
                const auto batch =
                    buffer.sample(static_cast<std::size_t>(cfg.batch_size), rng);
                const double lr = lr_at(updates, cfg);
                try {
                    update(net, target_net, batch, cfg.gamma, lr, optimizer);
                } catch (const NonFiniteLossError&) {
                    aborted = true;
                    break;
                }
                ++updates;
            }
            if (env_steps % cfg.target_update_every == 0) {
                polyak(target_net, net, cfg.tau);
            }
        }

        if (aborted) {
            result.aborted = true;
            break;
        }

        window.push_back(episode_return);
        window_sum += episode_return;
        if (window.size() > 100) {
            window_sum -= window.front();
            window.pop_front();
        }

        EpisodeRecord rec;
        rec.episode = episode;
        rec.episode_return = episode_return;
        rec.avg100 = window_sum / static_cast<double>(window.size());
        rec.epsilon = eps;
        rec.steps = steps;
        rec.status = env.status();
        result.log.push_back(rec);
        write_log_line(log_out, rec);

        last_good = net;
        last_good_step = env_steps;

        if (cfg.checkpoint_every > 0 && (episode + 1) % cfg.checkpoint_every == 0 &&
            episode + 1 < cfg.episodes) {
            Checkpoint ckpt{net, env_steps, cfg.to_json_text(), rng.save_state()};
            const std::string path = checkpoint_name(out_dir, episode + 1);
            save_checkpoint(ckpt, path);
            result.checkpoints.push_back(path);
        }
    }

    result.env_steps = env_steps;
    result.updates = updates;
    result.final_checkpoint = out_dir + "/ckpt_final.navsim";
    Checkpoint final_ckpt{last_good, last_good_step, cfg.to_json_text(), rng.save_state()};
    save_checkpoint(final_ckpt, result.final_checkpoint);
    result.checkpoints.push_back(result.final_checkpoint);

    if (result.aborted) throw NonFiniteLossError();
    return result;
}

EvalMetrics evaluate(const QNetwork& net, const VesselModel& model,
                     const std::vector<EpisodeSpec>& specs) {
    if (specs.empty()) throw EmptyListError("evaluate: no scenarios given");

    EvalMetrics metrics;
    metrics.episodes = static_cast<int>(specs.size());

    Environment env(model, specs.front());
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const EpisodeSpec& spec = specs[i];
        const int obs_dim = spec.mode == ObsMode::Static ? 7 : 9;
        if (obs_dim != net.input_dim()) {
            throw DimensionMismatchError("checkpoint input width does not match scenario mode");
        }
        env.reset(spec);

        double episode_return = 0.0;
        double cte_sq_sum = 0.0;
        int steps = 0;
        while (env.status() == Status::Running) {
            const std::vector<double> obs = env.observation().to_vector();
            const int action = [&] {
                const std::vector<double> q = net.forward(obs);
                int best = 0;
                for (int a = 1; a < static_cast<int>(q.size()); ++a) {
                    if (q[static_cast<std::size_t>(a)] > q[static_cast<std::size_t>(best)]) {
                        best = a;
                    }
                }
                return best;
            }();
            const StepOutcome outcome = env.step(action);
            episode_return += outcome.reward;
            cte_sq_sum += outcome.observation.cross_track * outcome.observation.cross_track;
            ++steps;
        }

        EpisodeEval ep;
        ep.index = static_cast<int>(i);
        ep.status = env.status();
        ep.episode_return = episode_return;
        ep.steps = steps;
        ep.cte_rms = steps > 0 ? std::sqrt(cte_sq_sum / steps) : 0.0;
        ep.legs_completed = env.legs_completed();
        ep.total_legs = env.total_legs();
        metrics.per_episode.push_back(ep);

        metrics.mean_return += episode_return;
        metrics.mean_cte_rms += ep.cte_rms;
        if (ep.status == Status::Success) metrics.success_rate += 1.0;
        if (ep.status == Status::Collision) metrics.collision_rate += 1.0;
    }

    const double n = static_cast<double>(metrics.episodes);
    metrics.success_rate /= n;
    metrics.collision_rate /= n;
    metrics.mean_return /= n;
    metrics.mean_cte_rms /= n;
    return metrics;
}

}  // namespace navsim

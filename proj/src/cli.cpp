#include "navsim/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "navsim/checkpoint.hpp"
#include "navsim/collision_risk.hpp"
#include "navsim/dqn.hpp"
#include "navsim/errors.hpp"
#include "navsim/manifest.hpp"
#include "navsim/scenario.hpp"
#include "navsim/svg.hpp"
#include "navsim/trajectory.hpp"
#include "navsim/validate.hpp"

namespace navsim::cli {

namespace {

using nlohmann::json;

constexpr const char* kDefaultParams = "data/kcs_params.json";

std::uint64_t parse_seed(const std::string& text) {
    try {
        return std::stoull(text);
    } catch (...) {
        throw InputError("seed is not a number: " + text);
    }
}

HydroParams load_params_or_default(const Options& opts) {
    const std::string path = opts.params.empty() ? kDefaultParams : opts.params;
    return load_hydro_params_file(path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return text;
}

int classify(const Error& e) {
    if (dynamic_cast<const NonFiniteLossError*>(&e)) return kExitDiverged;
    if (dynamic_cast<const DimensionMismatchError*>(&e)) return kExitMismatch;
    return kExitInput;
}

// Shared wrapper: manifest lifecycle + error-to-exit-code mapping.
template <typename Body>
int run_command(const std::string& name, const std::string& out_dir, Body&& body) {
    RunManifest manifest(name, out_dir);
    try {
        manifest.begin();
        const int code = body(manifest);
        manifest.finish(code == kExitOk);
        return code;
    } catch (const Error& e) {
        std::cerr << "navsim " << name << ": " << e.what() << '\n';
        manifest.finish(false);
        return classify(e);
    }
}

std::string episode_stem(const std::string& out_dir, int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "ep%03d", index);
    return out_dir + "/" + buf;
}

// Roll one concrete episode under a policy and emit its CSV + SVG.
void emit_episode_artifacts(const VesselModel& model, const EpisodeSpec& spec,
                            const Policy& policy, int max_steps,
                            const std::string& stem, const std::string& title,
                            RunManifest& manifest, Rollout* rollout_out = nullptr) {
    Environment env(model, spec);
    Rollout roll = run_rollout(env, policy, max_steps);

    const std::string csv_path = stem + ".csv";
    const std::string svg_path = stem + ".svg";
    write_trajectory_csv(csv_path, roll.points, model.params.length,
                         model.params.design_speed);
    write_track_svg(svg_path, spec, roll.points, roll.obstacle_tracks, title);
    manifest.add_output(csv_path);
    manifest.add_output(svg_path);
    if (rollout_out) *rollout_out = std::move(roll);
}

}  // namespace

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("NAVSIM_SEED")) return parse_seed(env);
    return 1;
}

int cmd_train(const Options& opts) {
    const std::string out_dir = opts.out.empty() ? "out/train" : opts.out;
    return run_command("train", out_dir, [&](RunManifest& manifest) {
        TrainConfig cfg = opts.config.empty()
                              ? TrainConfig::defaults_for(ObsMode::Static)
                              : TrainConfig::from_json_text(read_text_file(opts.config));
        if (opts.episodes) cfg.episodes = *opts.episodes;
        if (opts.seed || std::getenv("NAVSIM_SEED")) cfg.seed = resolve_seed(opts.seed);
        cfg.validate();

        const HydroParams params = load_params_or_default(opts);
        const VesselModel model = VesselModel::calibrate(params);

        manifest.set_input("config", opts.config.empty() ? "<defaults>" : opts.config);
        manifest.set_input("params", opts.params.empty() ? kDefaultParams : opts.params);
        manifest.set_seed(cfg.seed);

        const TrainResult result = train(model, cfg, out_dir);
        manifest.add_output(result.log_path);
        for (const std::string& ckpt : result.checkpoints) manifest.add_output(ckpt);

        std::printf("trained %zu episodes, %lld env steps, %lld updates\n",
                    result.log.size(), result.env_steps, result.updates);
        std::printf("final checkpoint: %s\n", result.final_checkpoint.c_str());
        return kExitOk;
    });
}

int cmd_eval(const Options& opts) {
    const std::string out_dir = opts.out.empty() ? "out/eval" : opts.out;
    return run_command("eval", out_dir, [&](RunManifest& manifest) {
        if (opts.checkpoint.empty()) throw InputError("eval requires --checkpoint");
        if (opts.scenario.empty()) throw InputError("eval requires --scenario");

        const Checkpoint ckpt = load_checkpoint(opts.checkpoint);
        const HydroParams params = load_params_or_default(opts);
        const VesselModel model = VesselModel::calibrate(params);
        const std::uint64_t seed = resolve_seed(opts.seed);

        manifest.set_input("checkpoint", opts.checkpoint);
        manifest.set_input("scenario", opts.scenario);
        manifest.set_input("params", opts.params.empty() ? kDefaultParams : opts.params);
        manifest.set_seed(seed);

        // Randomized variants when requested for a variant-capable built-in;
        // otherwise the single concrete scenario.
        std::vector<EpisodeSpec> specs;
        const bool want_variants = opts.episodes && *opts.episodes > 1 &&
                                   is_builtin_scenario(opts.scenario) &&
                                   opts.scenario != "fig7" && opts.scenario != "dyn-demo";
        if (want_variants) {
            specs = scenario_variants(opts.scenario, *opts.episodes, seed);
        } else {
            specs.push_back(resolve_scenario(opts.scenario));
        }
        if (specs.empty()) throw InputError("no scenarios to evaluate");

        const EvalMetrics metrics = evaluate(ckpt.net, model, specs);

        const Policy policy = greedy_policy(ckpt.net);
        for (std::size_t i = 0; i < specs.size(); ++i) {
            char title[64];
            std::snprintf(title, sizeof(title), "%s episode %zu", opts.scenario.c_str(), i);
            emit_episode_artifacts(model, specs[i], policy, specs[i].max_steps,
                                   episode_stem(out_dir, static_cast<int>(i)), title,
                                   manifest);
        }

        json doc;
        doc["scenario"] = opts.scenario;
        doc["episodes"] = metrics.episodes;
        doc["success_rate"] = metrics.success_rate;
        doc["collision_rate"] = metrics.collision_rate;
        doc["mean_return"] = metrics.mean_return;
        doc["mean_cte_rms"] = metrics.mean_cte_rms;
        json per = json::array();
        for (const EpisodeEval& ep : metrics.per_episode) {
            per.push_back({{"index", ep.index},
                           {"status", to_string(ep.status)},
                           {"return", ep.episode_return},
                           {"steps", ep.steps},
                           {"cte_rms", ep.cte_rms},
                           {"legs_completed", ep.legs_completed},
                           {"total_legs", ep.total_legs}});
        }
        doc["per_episode"] = per;

        const std::string metrics_path = out_dir + "/metrics.json";
        std::ofstream out(metrics_path, std::ios::trunc);
        if (!out) throw InputError("cannot write metrics: " + metrics_path);
        out << doc.dump(2) << '\n';
        manifest.add_output(metrics_path);

        std::printf("eval %s: success %.0f%%, collisions %.0f%%, mean return %.2f\n",
                    opts.scenario.c_str(), 100.0 * metrics.success_rate,
                    100.0 * metrics.collision_rate, metrics.mean_return);
        return kExitOk;
    });
}

int cmd_rollout(const Options& opts) {
    const std::string out_dir = opts.out.empty() ? "out/rollout" : opts.out;
    return run_command("rollout", out_dir, [&](RunManifest& manifest) {
        if (opts.scenario.empty()) throw InputError("rollout requires --scenario");
        const EpisodeSpec spec = resolve_scenario(opts.scenario);

        const HydroParams params = load_params_or_default(opts);
        const VesselModel model = VesselModel::calibrate(params);

        manifest.set_input("scenario", opts.scenario);
        manifest.set_input("params", opts.params.empty() ? kDefaultParams : opts.params);
        manifest.set_seed(resolve_seed(opts.seed));

        Policy policy;
        Checkpoint ckpt;
        if (!opts.checkpoint.empty()) {
            ckpt = load_checkpoint(opts.checkpoint);
            const int want = spec.mode == ObsMode::Static ? 7 : 9;
            if (ckpt.net.input_dim() != want) {
                throw DimensionMismatchError(
                    "checkpoint input width does not match scenario mode");
            }
            policy = greedy_policy(ckpt.net);
            manifest.set_input("checkpoint", opts.checkpoint);
        } else {
            policy = fixed_action_policy(opts.action);
        }

        const int max_steps = opts.steps ? *opts.steps : spec.max_steps;
        if (max_steps < 0) throw InputError("--steps must be >= 0");

        Rollout roll;
        emit_episode_artifacts(model, spec, policy, max_steps, out_dir + "/rollout",
                               "rollout " + opts.scenario, manifest, &roll);
        std::printf("rollout %s: %zu rows, status %s, return %.2f\n",
                    opts.scenario.c_str(), roll.points.size(),
                    to_string(roll.status).c_str(), roll.episode_return);
        return kExitOk;
    });
}

int cmd_validate(const Options& opts) {
    const std::string out_dir = opts.out.empty() ? "out/validate" : opts.out;
    return run_command("validate", out_dir, [&](RunManifest& manifest) {
        const std::string path = opts.params.empty() ? kDefaultParams : opts.params;
        const HydroParams params = load_hydro_params_file(path);
        manifest.set_input("params", path);

        const ManeuverReport report = validate_params(params);

        json doc;
        doc["params"] = path;
        doc["vessel"] = params.name;
        doc["all_passed"] = report.all_passed();
        json checks = json::array();
        for (const ManeuverCheck& c : report.checks) {
            json jc;
            jc["name"] = c.name;
            jc["passed"] = c.passed;
            for (const auto& [k, v] : c.measured) jc["measured"][k] = v;
            checks.push_back(jc);
            std::printf("%-32s %s\n", c.name.c_str(), c.passed ? "PASS" : "FAIL");
            for (const auto& [k, v] : c.measured) {
                std::printf("    %-28s %.6g\n", k.c_str(), v);
            }
        }
        doc["checks"] = checks;

        const std::string report_path = out_dir + "/maneuver_report.json";
        std::ofstream out(report_path, std::ios::trunc);
        if (!out) throw InputError("cannot write report: " + report_path);
        out << doc.dump(2) << '\n';
        manifest.add_output(report_path);

        return report.all_passed() ? kExitOk : kExitValidation;
    });
}

int cmd_risk(const Options& opts) {
    const std::string out_dir = opts.out.empty() ? "out/risk" : opts.out;
    return run_command("risk", out_dir, [&](RunManifest& manifest) {
        if (opts.scenario.empty()) throw InputError("risk requires --scenario");
        const EpisodeSpec spec = resolve_scenario(opts.scenario);
        if (spec.obstacles.empty()) throw InputError("risk scenario has no obstacles");

        const HydroParams params = load_params_or_default(opts);
        const VesselModel model = VesselModel::calibrate(params);

        manifest.set_input("scenario", opts.scenario);
        manifest.set_input("params", opts.params.empty() ? kDefaultParams : opts.params);
        manifest.set_seed(resolve_seed(opts.seed));

        const int horizon = opts.steps ? *opts.steps : 160;
        if (horizon < 0) throw InputError("--steps must be >= 0");

        Environment env(model, spec);
        const std::string csv_path = out_dir + "/risk.csv";
        std::ofstream out(csv_path, std::ios::trunc);
        if (!out) throw InputError("cannot write risk CSV: " + csv_path);
        out << "step,t,obstacle,R,V_R,chi_R_deg,DCPA,TCPA,CR,critical\n";

        char buf[256];
        const double step_dt = kSubstepDt * kSubstepsPerAction;
        for (int step = 0; step <= horizon; ++step) {
            const auto assessments = env.assess_obstacles();
            const std::size_t critical = critical_obstacle(assessments);
            for (std::size_t i = 0; i < assessments.size(); ++i) {
                const CRAssessment& a = assessments[i];
                std::snprintf(buf, sizeof(buf),
                              "%d,%.4f,%d,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%d\n",
                              step, step * step_dt, a.obstacle_id, a.rel.range,
                              a.rel.rel_speed, rad2deg(a.rel.rel_course), a.dcpa, a.tcpa,
                              a.cr, i == critical ? 1 : 0);
                out << buf;
            }
            if (step == horizon || env.status() != Status::Running) break;
            env.step(2);  // rudder amidships; the hull holds its course
        }
        manifest.add_output(csv_path);
        std::printf("risk table written to %s\n", csv_path.c_str());
        return kExitOk;
    });
}

}  // namespace navsim::cli

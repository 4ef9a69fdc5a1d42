#include <CLI11.hpp>

#include "navsim/cli.hpp"
#include "navsim/manifest.hpp"

int main(int argc, char** argv) {
    CLI::App app{"navsim: marine navigation simulator and DQN trainer"};
    app.set_version_flag("--version", navsim::kVersion);
    app.require_subcommand(1);

    navsim::cli::Options opts;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", opts.config, "training config JSON");
        cmd->add_option("--params", opts.params, "vessel parameters JSON");
        cmd->add_option("--scenario", opts.scenario, "scenario file or built-in name");
        cmd->add_option("--checkpoint", opts.checkpoint, "checkpoint file");
        cmd->add_option("--seed", opts.seed, "RNG seed (beats NAVSIM_SEED)");
        cmd->add_option("--out", opts.out, "output directory");
        cmd->add_option("--episodes", opts.episodes, "episode count override");
        cmd->add_option("--steps", opts.steps, "step count / horizon");
        return cmd;
    };

    CLI::App* train = add_common(app.add_subcommand("train", "train a DQN agent"));
    CLI::App* eval = add_common(app.add_subcommand("eval", "evaluate a checkpoint"));
    CLI::App* rollout =
        add_common(app.add_subcommand("rollout", "open-loop or greedy rollout"));
    rollout->add_option("--action", opts.action, "fixed action index 0..4")
        ->check(CLI::Range(0, 4));
    CLI::App* validate =
        add_common(app.add_subcommand("validate", "maneuver-check a parameters file"));
    CLI::App* risk = add_common(app.add_subcommand("risk", "per-step collision risk table"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        // CLI11 returns 0 for --help/--version; anything else is an input error.
        return code == 0 ? 0 : navsim::cli::kExitInput;
    }

    if (train->parsed()) return navsim::cli::cmd_train(opts);
    if (eval->parsed()) return navsim::cli::cmd_eval(opts);
    if (rollout->parsed()) return navsim::cli::cmd_rollout(opts);
    if (validate->parsed()) return navsim::cli::cmd_validate(opts);
    if (risk->parsed()) return navsim::cli::cmd_risk(opts);
    return navsim::cli::kExitInput;
}

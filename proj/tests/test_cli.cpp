#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "navsim/cli.hpp"
#include "navsim/errors.hpp"
#include "navsim/hydro_params.hpp"
#include "navsim/scenario.hpp"
#include "test_util.hpp"

using namespace navsim;
using namespace navsim::cli;
using navsim::testing::data_dir;
using navsim::testing::temp_dir;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

Options base_options() {
    Options opts;
    opts.params = data_dir() + "/kcs_params.json";
    return opts;
}

std::string tiny_config(const std::string& dir, int episodes, std::uint64_t seed) {
    const std::string path = dir + "/config.json";
    nlohmann::json cfg;
    cfg["mode"] = "static";
    cfg["episodes"] = episodes;
    cfg["max_steps"] = 20;
    cfg["hidden"] = {8};
    cfg["batch_size"] = 8;
    cfg["buffer_capacity"] = 256;
    cfg["update_every"] = 5;
    cfg["checkpoint_every"] = 0;
    cfg["seed"] = seed;
    std::ofstream(path) << cfg.dump();
    return path;
}

}  // namespace

TEST_CASE("missing inputs exit with code 2 and name the path") {
    Options opts = base_options();
    opts.config = "/nonexistent/config.json";
    opts.out = temp_dir("cli_badcfg");
    CHECK(cmd_train(opts) == kExitInput);

    // The underlying loader names the offending path.
    try {
        load_hydro_params_file("/nonexistent/params.json");
        FAIL("expected InputError");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("/nonexistent/params.json") != std::string::npos);
    }
}

TEST_CASE("train honors the episodes override and is byte-reproducible") {
    const std::string dir = temp_dir("cli_train");
    Options opts = base_options();
    opts.config = tiny_config(dir, 6, 11);
    opts.episodes = 3;  // override the config's 6
    opts.out = dir + "/run1";
    REQUIRE(cmd_train(opts) == kExitOk);

    const auto log_lines = lines_of(slurp(dir + "/run1/train_log.jsonl"));
    CHECK(log_lines.size() == 3);

    opts.out = dir + "/run2";
    REQUIRE(cmd_train(opts) == kExitOk);
    CHECK(slurp(dir + "/run1/train_log.jsonl") == slurp(dir + "/run2/train_log.jsonl"));
    CHECK(slurp(dir + "/run1/ckpt_final.navsim") == slurp(dir + "/run2/ckpt_final.navsim"));

    // The manifest lists every produced file.
    const auto manifest = nlohmann::json::parse(slurp(dir + "/run1/manifest.json"));
    CHECK(manifest["status"] == "done");
    bool lists_log = false;
    for (const auto& f : manifest["outputs"]) {
        if (f.get<std::string>().find("train_log.jsonl") != std::string::npos) {
            lists_log = true;
        }
    }
    CHECK(lists_log);
}

TEST_CASE("eval of a trained checkpoint writes metrics and artifacts") {
    const std::string dir = temp_dir("cli_eval");
    Options train_opts = base_options();
    train_opts.config = tiny_config(dir, 2, 5);
    train_opts.out = dir + "/train";
    REQUIRE(cmd_train(train_opts) == kExitOk);

    Options opts = base_options();
    opts.checkpoint = dir + "/train/ckpt_final.navsim";
    opts.scenario = "fig5a";
    opts.out = dir + "/eval";
    opts.seed = 9;
    REQUIRE(cmd_eval(opts) == kExitOk);

    const auto metrics = nlohmann::json::parse(slurp(dir + "/eval/metrics.json"));
    CHECK(metrics["episodes"] == 1);
    CHECK(metrics["per_episode"].size() == 1);
    CHECK(slurp(dir + "/eval/ep000.csv").find("t,x,y,psi_deg") != std::string::npos);
    CHECK(slurp(dir + "/eval/ep000.svg").find("<svg ") == 0);

    // Variant fan-out for a built-in scenario.
    opts.out = dir + "/eval_variants";
    opts.episodes = 4;
    REQUIRE(cmd_eval(opts) == kExitOk);
    const auto vm = nlohmann::json::parse(slurp(dir + "/eval_variants/metrics.json"));
    CHECK(vm["episodes"] == 4);

    // Dynamic scenario vs a 7-input checkpoint: dimension mismatch, exit 4.
    opts.scenario = "dyn-demo";
    opts.episodes.reset();
    opts.out = dir + "/eval_mismatch";
    CHECK(cmd_eval(opts) == kExitMismatch);
}

TEST_CASE("rollout artifacts and boundary cases") {
    const std::string dir = temp_dir("cli_rollout");
    Options opts = base_options();
    opts.scenario = "fig5a";
    opts.out = dir + "/zero";
    opts.steps = 0;
    REQUIRE(cmd_rollout(opts) == kExitOk);
    // Unit comment + header + exactly the initial row.
    CHECK(lines_of(slurp(dir + "/zero/rollout.csv")).size() == 3);

    // Fixed straight-ahead action holds the track to within 1e-6.
    EpisodeSpec clear;
    clear.mode = ObsMode::Static;
    clear.waypoints = {{0.0, 0.0}, {14.0, 0.0}};
    save_scenario_file(clear, dir + "/clear.json", "clear");
    opts.scenario = dir + "/clear.json";
    opts.steps = 40;
    opts.action = 2;
    opts.out = dir + "/straight";
    REQUIRE(cmd_rollout(opts) == kExitOk);
    for (const std::string& line : lines_of(slurp(dir + "/straight/rollout.csv"))) {
        if (line.empty() || line[0] == '#' || line[0] == 't') continue;
        std::istringstream ss(line);
        std::string field;
        std::vector<double> row;
        while (std::getline(ss, field, ',')) row.push_back(std::stod(field));
        CHECK(std::abs(row[8]) < 1e-6);  // d_c column
    }

    // Hard-over rudder: bounded turning circle.
    opts.action = 4;
    opts.steps = 160;
    opts.out = dir + "/turn";
    REQUIRE(cmd_rollout(opts) == kExitOk);
    double max_extent = 0.0;
    for (const std::string& line : lines_of(slurp(dir + "/turn/rollout.csv"))) {
        if (line.empty() || line[0] == '#' || line[0] == 't') continue;
        std::istringstream ss(line);
        std::string field;
        std::vector<double> row;
        while (std::getline(ss, field, ',')) row.push_back(std::stod(field));
        max_extent = std::max({max_extent, std::abs(row[1]), std::abs(row[2])});
    }
    CHECK(max_extent < 12.0);
}

TEST_CASE("validate passes shipped params and fails a corrupted set") {
    const std::string dir = temp_dir("cli_validate");
    Options opts = base_options();
    opts.out = dir + "/good";
    CHECK(cmd_validate(opts) == kExitOk);

    // Flip the sign of Yv: mirror symmetry still holds, stability breaks.
    auto doc = nlohmann::json::parse(slurp(data_dir() + "/kcs_params.json"));
    doc["hull"]["Yv"] = -doc["hull"]["Yv"].get<double>();
    const std::string bad_path = dir + "/bad_params.json";
    std::ofstream(bad_path) << doc.dump(2);

    Options bad = base_options();
    bad.params = bad_path;
    bad.out = dir + "/bad";
    CHECK(cmd_validate(bad) == kExitValidation);

    const auto report = nlohmann::json::parse(slurp(dir + "/bad/maneuver_report.json"));
    CHECK(report["all_passed"] == false);
    bool mirror_passed = false;
    for (const auto& check : report["checks"]) {
        if (check["name"] == "mirror_symmetry") mirror_passed = check["passed"];
    }
    CHECK(mirror_passed);  // symmetry is structural, not sign-dependent

    // Missing coefficient: input error, exit 2.
    doc["hull"].erase("Nr");
    const std::string missing_path = dir + "/missing_params.json";
    std::ofstream(missing_path) << doc.dump(2);
    Options missing = base_options();
    missing.params = missing_path;
    missing.out = dir + "/missing";
    CHECK(cmd_validate(missing) == kExitInput);
}

TEST_CASE("risk table: approaching obstacle ahead has strictly rising CR") {
    const std::string dir = temp_dir("cli_risk");
    EpisodeSpec spec;
    spec.mode = ObsMode::Static;
    spec.waypoints = {{0.0, 0.0}, {20.0, 0.0}};
    Obstacle o;
    o.id = 0;
    o.x = 12.0;
    o.y = 0.0;
    o.radius = 0.5;
    spec.obstacles = {o};
    save_scenario_file(spec, dir + "/ahead.json", "ahead");

    Options opts = base_options();
    opts.scenario = dir + "/ahead.json";
    opts.steps = 20;
    opts.out = dir + "/ahead";
    REQUIRE(cmd_risk(opts) == kExitOk);

    const auto rows = lines_of(slurp(dir + "/ahead/risk.csv"));
    CHECK(rows[0] == "step,t,obstacle,R,V_R,chi_R_deg,DCPA,TCPA,CR,critical");
    double prev_cr = -1.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        std::istringstream ss(rows[i]);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        const double cr = std::stod(fields[8]);
        CHECK(cr > prev_cr);
        prev_cr = cr;
        CHECK(fields[9] == "1");  // single obstacle is always critical
    }

    // Obstacle astern moving away: CR identically zero.
    EpisodeSpec astern = spec;
    astern.obstacles[0].x = -4.0;
    astern.obstacles[0].vx = -0.5;
    save_scenario_file(astern, dir + "/astern.json", "astern");
    opts.scenario = dir + "/astern.json";
    opts.out = dir + "/astern";
    REQUIRE(cmd_risk(opts) == kExitOk);
    for (const std::string& line : lines_of(slurp(dir + "/astern/risk.csv"))) {
        if (line.rfind("step", 0) == 0) continue;
        std::istringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        CHECK(std::stod(fields[8]) == 0.0);
    }
}

TEST_CASE("risk table: the critical flag tracks the CR ordering") {
    const std::string dir = temp_dir("cli_risk2");
    EpisodeSpec spec;
    spec.mode = ObsMode::Static;
    spec.waypoints = {{0.0, 0.0}, {30.0, 0.0}};
    Obstacle near_side;
    near_side.id = 0;
    near_side.x = 3.0;
    near_side.y = 1.5;
    near_side.radius = 0.4;
    Obstacle far_ahead;
    far_ahead.id = 1;
    far_ahead.x = 14.0;
    far_ahead.y = 0.0;
    far_ahead.radius = 0.4;
    spec.obstacles = {near_side, far_ahead};
    save_scenario_file(spec, dir + "/two.json", "two");

    Options opts = base_options();
    opts.scenario = dir + "/two.json";
    opts.steps = 30;
    opts.out = dir + "/two";
    REQUIRE(cmd_risk(opts) == kExitOk);

    const auto rows = lines_of(slurp(dir + "/two/risk.csv"));
    int switches = 0;
    int prev_critical = -1;
    for (std::size_t i = 1; i + 1 < rows.size(); i += 2) {
        auto parse = [](const std::string& line) {
            std::istringstream ss(line);
            std::string field;
            std::vector<std::string> fields;
            while (std::getline(ss, field, ',')) fields.push_back(field);
            return fields;
        };
        const auto a = parse(rows[i]);
        const auto b = parse(rows[i + 1]);
        REQUIRE(a.size() == 10);
        REQUIRE(b.size() == 10);
        const double cr_a = std::stod(a[8]);
        const double cr_b = std::stod(b[8]);
        const int critical = a[9] == "1" ? 0 : 1;
        if (cr_a != cr_b && (cr_a > 0.0 || cr_b > 0.0)) {
            CHECK((cr_a > cr_b ? 0 : 1) == critical);
        }
        if (prev_critical >= 0 && critical != prev_critical) ++switches;
        prev_critical = critical;
    }
    CHECK(switches >= 1);  // ordering crosses as the side obstacle falls astern
}

TEST_CASE("seed resolution prefers the flag over the environment") {
    setenv("NAVSIM_SEED", "777", 1);
    CHECK(resolve_seed(std::nullopt) == 777);
    CHECK(resolve_seed(42) == 42);
    unsetenv("NAVSIM_SEED");
    CHECK(resolve_seed(std::nullopt) == 1);
}

TEST_CASE("training divergence maps to exit code 3") {
    const std::string dir = temp_dir("cli_diverge");
    nlohmann::json cfg;
    cfg["mode"] = "static";
    cfg["obstacles"] = false;
    cfg["episodes"] = 10;
    cfg["max_steps"] = 20;
    cfg["hidden"] = {8};
    cfg["batch_size"] = 8;
    cfg["buffer_capacity"] = 64;
    cfg["update_every"] = 4;
    cfg["checkpoint_every"] = 0;
    cfg["seed"] = 13;
    cfg["lr0"] = 1e300;
    const std::string cfg_path = dir + "/diverge.json";
    std::ofstream(cfg_path) << cfg.dump();

    Options opts = base_options();
    opts.config = cfg_path;
    opts.out = dir + "/run";
    CHECK(cmd_train(opts) == kExitDiverged);
}

TEST_CASE("eval SVG of fig5a shows the track, the leg line, and one obstacle") {
    const std::string dir = temp_dir("cli_fig5a_svg");
    Options train_opts = base_options();
    train_opts.config = tiny_config(dir, 2, 5);
    train_opts.out = dir + "/train";
    REQUIRE(cmd_train(train_opts) == kExitOk);

    Options opts = base_options();
    opts.checkpoint = dir + "/train/ckpt_final.navsim";
    opts.scenario = "fig5a";
    opts.out = dir + "/eval";
    REQUIRE(cmd_eval(opts) == kExitOk);

    const std::string svg = slurp(dir + "/eval/ep000.svg");
    auto count = [&](const std::string& needle) {
        std::size_t n = 0;
        for (std::size_t pos = 0; (pos = svg.find(needle, pos)) != std::string::npos;
             pos += needle.size()) {
            ++n;
        }
        return n;
    };
    CHECK(count("#2060c0") == 1);   // one vessel polyline
    CHECK(count("<line ") == 1);    // the single waypoint leg
    CHECK(count("#e07030") == 1);   // exactly one obstacle footprint
}

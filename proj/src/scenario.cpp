#include "navsim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "navsim/errors.hpp"
#include "navsim/rng.hpp"

namespace navsim {

namespace {

using nlohmann::json;

Vec2 polar(double range, double bearing_rad) {
    return {range * std::cos(bearing_rad), range * std::sin(bearing_rad)};
}

Obstacle make_obstacle(int id, Vec2 pos, double radius, Vec2 vel = {0.0, 0.0}) {
    Obstacle o;
    o.id = id;
    o.x = pos.x;
    o.y = pos.y;
    o.vx = vel.x;
    o.vy = vel.y;
    o.radius = radius;
    return o;
}

}  // namespace

EpisodeSpec scenario_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(std::string("scenario is not valid JSON: ") + e.what());
    }
    if (doc.value("schema_version", 0) != 1) {
        throw InputError("scenario: schema_version must be 1");
    }

    EpisodeSpec spec;
    const std::string mode = doc.value("mode", "static");
    if (mode == "static") {
        spec.mode = ObsMode::Static;
    } else if (mode == "dynamic") {
        spec.mode = ObsMode::Dynamic;
    } else {
        throw InputError("scenario.mode must be \"static\" or \"dynamic\"");
    }

    if (!doc.contains("waypoints") || !doc["waypoints"].is_array() ||
        doc["waypoints"].size() < 2) {
        throw InputError("scenario needs at least two waypoints");
    }
    for (const auto& wp : doc["waypoints"]) {
        if (!wp.is_array() || wp.size() != 2) {
            throw InputError("scenario waypoints must be [x, y] pairs");
        }
        spec.waypoints.push_back({wp[0].get<double>(), wp[1].get<double>()});
    }

    if (doc.contains("obstacles")) {
        for (const auto& entry : doc["obstacles"]) {
            Obstacle o;
            o.id = entry.value("id", static_cast<int>(spec.obstacles.size()));
            o.x = entry.at("x").get<double>();
            o.y = entry.at("y").get<double>();
            o.vx = entry.value("vx", 0.0);
            o.vy = entry.value("vy", 0.0);
            o.radius = entry.at("radius").get<double>();
            if (o.radius < 0.0) throw InputError("scenario obstacle radius must be >= 0");
            spec.obstacles.push_back(o);
        }
    }

    spec.max_steps = doc.value("max_steps", 160);
    spec.success_radius = doc.value("success_radius", 0.5);
    spec.seed = doc.value("seed", std::uint64_t{0});
    if (spec.max_steps <= 0) throw InputError("scenario.max_steps must be positive");
    if (spec.success_radius <= 0.0) {
        throw InputError("scenario.success_radius must be positive");
    }
    return spec;
}

std::string scenario_to_json(const EpisodeSpec& spec, const std::string& name) {
    json doc;
    doc["schema_version"] = 1;
    if (!name.empty()) doc["name"] = name;
    doc["mode"] = to_string(spec.mode);
    json wps = json::array();
    for (const Vec2& wp : spec.waypoints) wps.push_back({wp.x, wp.y});
    doc["waypoints"] = wps;
    json obs = json::array();
    for (const Obstacle& o : spec.obstacles) {
        obs.push_back({{"id", o.id},
                       {"x", o.x},
                       {"y", o.y},
                       {"vx", o.vx},
                       {"vy", o.vy},
                       {"radius", o.radius}});
    }
    doc["obstacles"] = obs;
    doc["max_steps"] = spec.max_steps;
    doc["success_radius"] = spec.success_radius;
    doc["seed"] = spec.seed;
    return doc.dump(2);
}

EpisodeSpec load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return scenario_from_json(buf.str());
}

void save_scenario_file(const EpisodeSpec& spec, const std::string& path,
                        const std::string& name) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw InputError("cannot write scenario file: " + path);
    out << scenario_to_json(spec, name) << '\n';
}

std::vector<std::string> builtin_scenario_names() {
    return {"fig5a", "fig5b", "fig5c", "fig6a", "fig6b", "fig7", "dyn-demo"};
}

bool is_builtin_scenario(const std::string& name) {
    for (const std::string& n : builtin_scenario_names()) {
        if (n == name) return true;
    }
    return false;
}

EpisodeSpec builtin_scenario(const std::string& name) {
    EpisodeSpec spec;
    spec.mode = ObsMode::Static;
    if (name == "fig5a") {
        // Obstacle sitting on the line joining the waypoints, initial heading
        // already aligned with the track.
        spec.waypoints = {{0.0, 0.0}, {12.0, 0.0}};
        spec.obstacles = {make_obstacle(0, {6.0, 0.0}, 0.8)};
    } else if (name == "fig5b") {
        // Destination off the initial heading, obstacle on the line.
        spec.waypoints = {{0.0, 0.0}, polar(12.0, deg2rad(40.0))};
        spec.obstacles = {make_obstacle(0, polar(6.0, deg2rad(40.0)), 0.8)};
    } else if (name == "fig5c") {
        spec.waypoints = {{0.0, 0.0}, polar(12.0, deg2rad(-60.0))};
        spec.obstacles = {make_obstacle(0, polar(6.0, deg2rad(-60.0)), 0.8)};
    } else if (name == "fig6a") {
        // Off the line but inside the collision envelope of a straight run.
        spec.waypoints = {{0.0, 0.0}, {12.0, 0.0}};
        spec.obstacles = {make_obstacle(0, {5.0, 0.7}, 0.7)};
    } else if (name == "fig6b") {
        // Large obstacle: the agent has to cross the track line to clear it.
        spec.waypoints = {{0.0, 0.0}, {13.0, 0.0}};
        spec.obstacles = {make_obstacle(0, {6.0, 1.0}, 1.3)};
    } else if (name == "fig7") {
        // 15L square with an obstacle between each waypoint pair.
        spec.waypoints = {{0.0, 0.0}, {15.0, 0.0}, {15.0, 15.0}, {0.0, 15.0}, {0.0, 0.0}};
        spec.obstacles = {make_obstacle(0, {7.5, 0.0}, 0.75),
                          make_obstacle(1, {15.0, 7.5}, 0.75),
                          make_obstacle(2, {7.5, 15.0}, 0.75),
                          make_obstacle(3, {0.0, 7.5}, 0.75)};
        spec.max_steps = 640;  // four legs
    } else if (name == "dyn-demo") {
        spec.mode = ObsMode::Dynamic;
        spec.waypoints = {{0.0, 0.0}, {14.0, 0.0}};
        spec.obstacles = {
            make_obstacle(0, {8.0, -4.0}, 0.8, {0.0, 0.5}),
            make_obstacle(1, {13.0, 0.0}, 0.5, {-0.4, 0.0}),
            make_obstacle(2, {5.0, 1.0}, 0.4, {0.2, 0.0}),
            make_obstacle(3, {10.0, 8.0}, 0.6, {0.0, -0.3}),
        };
    } else {
        throw InputError("unknown built-in scenario: " + name);
    }
    return spec;
}

EpisodeSpec resolve_scenario(const std::string& ref) {
    if (is_builtin_scenario(ref)) return builtin_scenario(ref);
    return load_scenario_file(ref);
}

std::vector<EpisodeSpec> scenario_variants(const std::string& name, int count,
                                           std::uint64_t seed) {
    if (!is_builtin_scenario(name)) {
        throw InputError("variants are defined for built-in scenarios only: " + name);
    }
    Rng rng(seed);
    std::vector<EpisodeSpec> out;
    out.reserve(static_cast<std::size_t>(count));

    for (int i = 0; i < count; ++i) {
        EpisodeSpec spec;
        spec.mode = ObsMode::Static;
        spec.seed = seed + static_cast<std::uint64_t>(i);

        double base_bearing = 0.0;
        if (name == "fig5b") base_bearing = deg2rad(40.0);
        if (name == "fig5c") base_bearing = deg2rad(-60.0);

        const double dist = rng.uniform(10.0, 14.0);
        const double bearing = base_bearing + deg2rad(rng.uniform(-10.0, 10.0));
        const Vec2 dest = polar(dist, bearing);
        spec.waypoints = {{0.0, 0.0}, dest};

        if (name == "fig5a" || name == "fig5b" || name == "fig5c") {
            const double frac = rng.uniform(0.35, 0.65);
            spec.obstacles = {make_obstacle(0, dest * frac, rng.uniform(0.4, 0.9))};
        } else if (name == "fig6a") {
            // Offset from the line, still blocking a straight run.
            const double frac = rng.uniform(0.35, 0.6);
            const double offset = rng.uniform(0.5, 0.9) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
            const Vec2 along = dest * frac;
            const Vec2 normal{-dest.y / dist, dest.x / dist};
            spec.obstacles = {
                make_obstacle(0, along + normal * offset, rng.uniform(0.5, 0.8))};
        } else if (name == "fig6b") {
            const double frac = rng.uniform(0.35, 0.6);
            const double offset = rng.uniform(0.7, 1.1) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
            const Vec2 along = dest * frac;
            const Vec2 normal{-dest.y / dist, dest.x / dist};
            spec.obstacles = {
                make_obstacle(0, along + normal * offset, rng.uniform(0.9, 1.3))};
        } else {
            throw InputError("variants are not defined for scenario: " + name);
        }
        out.push_back(std::move(spec));
    }
    return out;
}

}  // namespace navsim

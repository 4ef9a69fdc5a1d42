#pragma once

#include <string>
#include <vector>

#include "navsim/environment.hpp"

namespace navsim {

// Scenario files are JSON documents describing one EpisodeSpec; they
// round-trip losslessly through save/load.
EpisodeSpec scenario_from_json(const std::string& text);
std::string scenario_to_json(const EpisodeSpec& spec, const std::string& name = "");
EpisodeSpec load_scenario_file(const std::string& path);
void save_scenario_file(const EpisodeSpec& spec, const std::string& path,
                        const std::string& name = "");

// Built-in evaluation scenarios named after the trajectory figures they
// reproduce: fig5a/fig5b/fig5c (obstacle on the track line at various
// headings), fig6a/fig6b (obstacle off the line but in the ship's way),
// fig7 (15L square, one obstacle per leg), dyn-demo (moving obstacles).
bool is_builtin_scenario(const std::string& name);
EpisodeSpec builtin_scenario(const std::string& name);
std::vector<std::string> builtin_scenario_names();

// Treats `ref` as a built-in name when one matches, otherwise a file path.
EpisodeSpec resolve_scenario(const std::string& ref);

// Seeded jittered copies of a built-in scenario, keeping its character
// (obstacle on/off the line, size class, approach geometry). Used for
// randomized-variant evaluation.
std::vector<EpisodeSpec> scenario_variants(const std::string& name, int count,
                                           std::uint64_t seed);

}  // namespace navsim

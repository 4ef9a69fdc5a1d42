#pragma once

#include <string>
#include <vector>

#include "navsim/environment.hpp"
#include "navsim/trajectory.hpp"

namespace navsim {

// Static SVG figure of one episode: waypoint legs, obstacle circles (and
// their paths when moving), and the vessel track as a single polyline.
// Output is deterministic for identical inputs.
std::string render_track_svg(const EpisodeSpec& spec,
                             const std::vector<TrajectoryPoint>& track,
                             const std::vector<std::vector<Vec2>>& obstacle_tracks,
                             const std::string& title);

void write_track_svg(const std::string& path, const EpisodeSpec& spec,
                     const std::vector<TrajectoryPoint>& track,
                     const std::vector<std::vector<Vec2>>& obstacle_tracks,
                     const std::string& title);

}  // namespace navsim

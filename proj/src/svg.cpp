#include "navsim/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "navsim/errors.hpp"

namespace navsim {

namespace {

struct Bounds {
    double min_x = 0.0, max_x = 1.0, min_y = 0.0, max_y = 1.0;

    void include(double x, double y, double pad = 0.0) {
        min_x = std::min(min_x, x - pad);
        max_x = std::max(max_x, x + pad);
        min_y = std::min(min_y, y - pad);
        max_y = std::max(max_y, y + pad);
    }
};

constexpr double kCanvas = 800.0;
constexpr double kMargin = 40.0;

class Mapper {
public:
    explicit Mapper(const Bounds& b) {
        const double span = std::max(b.max_x - b.min_x, b.max_y - b.min_y);
        scale_ = (kCanvas - 2.0 * kMargin) / std::max(span, 1e-9);
        min_x_ = b.min_x;
        max_y_ = b.max_y;
    }

    double px(double x) const { return kMargin + (x - min_x_) * scale_; }
    // SVG y grows downward; world +Y is up in the figure.
    double py(double y) const { return kMargin + (max_y_ - y) * scale_; }
    double len(double l) const { return l * scale_; }

private:
    double scale_ = 1.0;
    double min_x_ = 0.0;
    double max_y_ = 0.0;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0,
                double d = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), pattern, a, b, c, d);
    return buf;
}

}  // namespace

std::string render_track_svg(const EpisodeSpec& spec,
                             const std::vector<TrajectoryPoint>& track,
                             const std::vector<std::vector<Vec2>>& obstacle_tracks,
                             const std::string& title) {
    Bounds b;
    for (const Vec2& wp : spec.waypoints) b.include(wp.x, wp.y, 1.0);
    for (const Obstacle& o : spec.obstacles) b.include(o.x, o.y, o.radius + 1.0);
    for (const TrajectoryPoint& p : track) b.include(p.x, p.y, 0.5);
    for (const auto& path : obstacle_tracks) {
        for (const Vec2& p : path) b.include(p.x, p.y, 0.5);
    }
    const Mapper m(b);

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
        << fmt("width=\"%.0f\" height=\"%.0f\" viewBox=\"0 0 %.0f %.0f\">\n", kCanvas,
               kCanvas, kCanvas, kCanvas);
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!title.empty()) {
        svg << "<text x=\"20\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">"
            << title << "</text>\n";
    }

    // Waypoint legs.
    for (std::size_t i = 0; i + 1 < spec.waypoints.size(); ++i) {
        const Vec2 a = spec.waypoints[i];
        const Vec2 c = spec.waypoints[i + 1];
        svg << fmt("<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" ", m.px(a.x),
                   m.py(a.y), m.px(c.x), m.py(c.y))
            << "stroke=\"#888888\" stroke-width=\"1\" stroke-dasharray=\"6,4\"/>\n";
    }
    for (const Vec2& wp : spec.waypoints) {
        svg << fmt("<circle cx=\"%.2f\" cy=\"%.2f\" r=\"5\" ", m.px(wp.x), m.py(wp.y))
            << "fill=\"none\" stroke=\"#444444\" stroke-width=\"1.5\"/>\n";
    }

    // Obstacles: initial footprint plus the path of moving ones.
    for (std::size_t i = 0; i < spec.obstacles.size(); ++i) {
        const Obstacle& o = spec.obstacles[i];
        svg << fmt("<circle cx=\"%.2f\" cy=\"%.2f\" r=\"%.2f\" ", m.px(o.x), m.py(o.y),
                   m.len(std::max(o.radius, 0.05)))
            << "fill=\"#e07030\" fill-opacity=\"0.45\" stroke=\"#a04010\" "
               "stroke-width=\"1\"/>\n";
        if (i < obstacle_tracks.size() && obstacle_tracks[i].size() > 1 &&
            (o.vx != 0.0 || o.vy != 0.0)) {
            svg << "<polyline fill=\"none\" stroke=\"#a04010\" stroke-width=\"1\" "
                   "stroke-dasharray=\"2,3\" points=\"";
            for (const Vec2& p : obstacle_tracks[i]) {
                svg << fmt("%.2f,%.2f ", m.px(p.x), m.py(p.y));
            }
            svg << "\"/>\n";
            const Vec2 last = obstacle_tracks[i].back();
            svg << fmt("<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" ", m.px(last.x),
                       m.py(last.y))
                << "fill=\"#a04010\"/>\n";
        }
    }

    // Vessel track: one polyline.
    svg << "<polyline fill=\"none\" stroke=\"#2060c0\" stroke-width=\"2\" points=\"";
    for (const TrajectoryPoint& p : track) {
        svg << fmt("%.2f,%.2f ", m.px(p.x), m.py(p.y));
    }
    svg << "\"/>\n";

    if (!track.empty()) {
        svg << fmt("<circle cx=\"%.2f\" cy=\"%.2f\" r=\"4\" ", m.px(track.front().x),
                   m.py(track.front().y))
            << "fill=\"#209040\"/>\n";
        svg << fmt("<circle cx=\"%.2f\" cy=\"%.2f\" r=\"4\" ", m.px(track.back().x),
                   m.py(track.back().y))
            << "fill=\"#c03030\"/>\n";
    }

    svg << "</svg>\n";
    return svg.str();
}

void write_track_svg(const std::string& path, const EpisodeSpec& spec,
                     const std::vector<TrajectoryPoint>& track,
                     const std::vector<std::vector<Vec2>>& obstacle_tracks,
                     const std::string& title) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw InputError("cannot write SVG: " + path);
    out << render_track_svg(spec, track, obstacle_tracks, title);
}

}  // namespace navsim

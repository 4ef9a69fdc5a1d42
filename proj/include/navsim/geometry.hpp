#pragma once

#include <cmath>

namespace navsim {

inline constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
};

// Wrap an angle to (-pi, pi]. The boundary maps to +pi.
inline double wrap_angle(double a) {
    double w = a - 2.0 * kPi * std::ceil((a - kPi) / (2.0 * kPi));
    // ceil rounding can leave the open endpoint; fold it back.
    if (w <= -kPi) w = kPi;
    return w;
}

// Azimuth of a vector, measured from +X toward +Y. Zero vector maps to 0.
inline double azimuth(Vec2 v) {
    if (v.x == 0.0 && v.y == 0.0) return 0.0;
    return std::atan2(v.y, v.x);
}

inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

}  // namespace navsim

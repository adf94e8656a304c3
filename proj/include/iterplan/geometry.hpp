#pragma once

#include <cmath>
#include <numbers>

namespace iterplan {

struct Point {
    double x = 0;
    double y = 0;

    friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend Point operator*(double k, Point a) { return {k * a.x, k * a.y}; }
    friend bool operator==(Point, Point) = default;
};

[[nodiscard]] inline double norm(Point p) { return std::hypot(p.x, p.y); }
[[nodiscard]] inline double distance(Point a, Point b) { return norm(a - b); }
[[nodiscard]] inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
[[nodiscard]] inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }

/// Unit vector at `heading` radians, counter-clockwise from +x.
[[nodiscard]] inline Point direction(double heading) { return {std::cos(heading), std::sin(heading)}; }

[[nodiscard]] inline Point rotate(Point p, double angle)
{
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * p.x - s * p.y, s * p.x + c * p.y};
}

/// Angle in [0, 2π).
[[nodiscard]] inline double wrap_2pi(double a)
{
    constexpr double two_pi = 2 * std::numbers::pi;
    a = std::fmod(a, two_pi);
    return a < 0 ? a + two_pi : a;
}

/// Angle in (-π, π].
[[nodiscard]] inline double wrap_pi(double a)
{
    a = wrap_2pi(a);
    return a > std::numbers::pi ? a - 2 * std::numbers::pi : a;
}

} // namespace iterplan

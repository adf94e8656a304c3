#pragma once

#include "iterplan/geometry.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace iterplan {

struct VehicleState {
    Point position;
    double heading = 0; // radians, counter-clockwise from +x
    double speed = 17;  // m/s
};

struct VehicleLimits {
    double min_turn_radius = 60;
    double cruise_speed = 17;
    double arrival_radius = 15;
};

/// Straight(length) or Arc(radius, signed angle); positive angles turn left.
struct Segment {
    enum class Kind : std::uint8_t { straight, arc };
    Kind kind = Kind::straight;
    double length = 0; // straight only
    double radius = 0; // arc only
    double angle = 0;  // arc only

    static Segment straight(double length) { return {Kind::straight, length, 0, 0}; }
    static Segment arc(double radius, double angle) { return {Kind::arc, 0, radius, angle}; }

    [[nodiscard]] double path_length() const { return kind == Kind::straight ? length : std::abs(angle) * radius; }
    friend bool operator==(const Segment&, const Segment&) = default;
};

struct Trajectory {
    VehicleState start;
    VehicleState end;
    std::vector<Segment> segments;
};

/// Pose after travelling `s` metres along `seg` (0 <= s <= seg.path_length()).
[[nodiscard]] VehicleState advance(const VehicleState& state, const Segment& seg, double s);

/// Shortest circle-straight-circle path to `target`, arriving with heading
/// along `arrival_axis` in either orientation. Zero-length pieces are dropped.
[[nodiscard]] Trajectory plan_trajectory(const VehicleState& state, Point target, double arrival_axis,
                                         const VehicleLimits& limits);

[[nodiscard]] double trajectory_length(const Trajectory& t);

/// Advances speed·dt metres along the trajectory with exact per-segment
/// kinematics. Returns the new pose and what is left of the trajectory.
[[nodiscard]] std::pair<VehicleState, Trajectory> step(const VehicleState& state, const Trajectory& t, double dt);

[[nodiscard]] inline VehicleState predicted_arrival_state(const Trajectory& t) { return t.end; }

} // namespace iterplan

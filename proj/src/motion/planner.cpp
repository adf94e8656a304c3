#include "iterplan/motion.hpp"

#include <array>
#include <optional>

namespace iterplan {

namespace {

constexpr double two_pi = 2 * std::numbers::pi;
constexpr double eps = 1e-9;

// Left turn from a to b in [0, 2π); values within eps of a full turn snap to 0.
double ccw(double from, double to)
{
    double a = wrap_2pi(to - from);
    return a > two_pi - eps ? 0 : a;
}

Point left_normal(double h) { return {-std::sin(h), std::cos(h)}; }

struct Candidate {
    double a1, straight, a2; // signed arc angles
    double length(double r) const { return r * (std::abs(a1) + std::abs(a2)) + straight; }
};

// side: +1 left, -1 right. Returns nullopt when the tangent does not exist.
std::optional<Candidate> csc(Point p0, double h0, Point p1, double h1, double r, int s0, int s1)
{
    Point c0 = p0 + (s0 * r) * left_normal(h0);
    Point c1 = p1 + (s1 * r) * left_normal(h1);
    Point d = c1 - c0;
    double dist = norm(d);
    double theta = std::atan2(d.y, d.x);
    double psi, straight;
    if (s0 == s1) {
        straight = dist;
        psi = dist < eps ? h0 : theta;
    }
    else {
        if (dist < 2 * r - eps)
            return std::nullopt;
        straight = std::sqrt(std::max(0.0, dist * dist - 4 * r * r));
        // Inner tangent: d = straight·u(psi) ∓ 2r·n(psi).
        psi = theta + s0 * std::atan2(2 * r, straight);
    }
    double a1 = s0 > 0 ? ccw(h0, psi) : -ccw(psi, h0);
    double a2 = s1 > 0 ? ccw(psi, h1) : -ccw(h1, psi);
    return Candidate{a1, straight, a2};
}

std::vector<Segment> segments_of(const Candidate& c, double r)
{
    std::vector<Segment> out;
    if (std::abs(c.a1) * r > eps)
        out.push_back(Segment::arc(r, c.a1));
    if (c.straight > eps)
        out.push_back(Segment::straight(c.straight));
    if (std::abs(c.a2) * r > eps)
        out.push_back(Segment::arc(r, c.a2));
    return out;
}

} // namespace

VehicleState advance(const VehicleState& state, const Segment& seg, double s)
{
    VehicleState out = state;
    if (seg.kind == Segment::Kind::straight) {
        out.position = state.position + s * direction(state.heading);
        return out;
    }
    const double side = seg.angle >= 0 ? 1.0 : -1.0;
    const Point center = state.position + (side * seg.radius) * left_normal(state.heading);
    out.heading = state.heading + side * s / seg.radius;
    out.position = center - (side * seg.radius) * left_normal(out.heading);
    out.heading = wrap_2pi(out.heading);
    return out;
}

Trajectory plan_trajectory(const VehicleState& state, Point target, double arrival_axis, const VehicleLimits& limits)
{
    const double r = limits.min_turn_radius;
    std::optional<Candidate> best;
    for (double h1 : {wrap_2pi(arrival_axis), wrap_2pi(arrival_axis + std::numbers::pi)}) {
        for (auto [s0, s1] : std::array<std::pair<int, int>, 4>{{{1, 1}, {-1, -1}, {1, -1}, {-1, 1}}}) {
            auto c = csc(state.position, state.heading, target, h1, r, s0, s1);
            if (c && (!best || c->length(r) < best->length(r) - eps))
                best = c;
        }
    }

    // Same-side tangents always exist, so `best` is always set.
    Trajectory t;
    t.start = state;
    t.segments = segments_of(*best, r);
    VehicleState pose = state;
    for (const auto& seg : t.segments)
        pose = advance(pose, seg, seg.path_length());
    t.end = pose;
    return t;
}

double trajectory_length(const Trajectory& t)
{
    double total = 0;
    for (const auto& seg : t.segments)
        total += seg.path_length();
    return total;
}

std::pair<VehicleState, Trajectory> step(const VehicleState& state, const Trajectory& t, double dt)
{
    double budget = state.speed * dt;
    VehicleState pose = state;
    Trajectory rest;
    rest.end = t.end;
    std::size_t k = 0;
    for (; k < t.segments.size(); ++k) {
        const Segment& seg = t.segments[k];
        const double len = seg.path_length();
        if (budget < len) {
            pose = advance(pose, seg, budget);
            Segment tail = seg;
            if (seg.kind == Segment::Kind::straight)
                tail.length = len - budget;
            else
                tail.angle = seg.angle >= 0 ? (len - budget) / seg.radius : -(len - budget) / seg.radius;
            rest.segments.push_back(tail);
            ++k;
            break;
        }
        pose = advance(pose, seg, len);
        budget -= len;
    }
    for (; k < t.segments.size(); ++k)
        rest.segments.push_back(t.segments[k]);
    if (rest.segments.empty()) {
        pose.position = t.end.position;
        pose.heading = t.end.heading;
    }
    rest.start = pose;
    return {pose, rest};
}

} // namespace iterplan

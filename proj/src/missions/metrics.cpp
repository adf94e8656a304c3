#include "iterplan/missions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <set>

namespace iterplan::missions {

namespace {

constexpr std::size_t max_exact_tour = 13;

std::string format(const char* fmt, auto... args)
{
    char buf[160];
    const int n = std::snprintf(buf, sizeof buf, fmt, args...);
    return std::string(buf, static_cast<std::size_t>(std::max(n, 0)));
}

double tour_ideal(const MissionConfig& c, const std::vector<CellId>& cells)
{
    if (cells.size() > max_exact_tour)
        return std::numeric_limits<double>::quiet_NaN();
    std::vector<Point> pts;
    for (CellId id : cells)
        pts.push_back(cell_center(c.grid, id));
    if (pts.size() < 2)
        return 0;
    return ideal_distance(pts.front(), std::span(pts).subspan(1), IdealMode::tour) / c.limits.cruise_speed;
}

std::optional<double> first_event(const MissionLog& log, std::string_view label)
{
    for (const auto& r : log.records)
        if (r.kind == RecordKind::event && r.label == label)
            return r.t;
    return std::nullopt;
}

} // namespace

std::string MissionLog::to_text(const GridMap& grid) const
{
    std::string out;
    out.reserve(records.size() * 48);
    for (const auto& r : records) {
        out += format("t=%.6f kind=", r.t);
        switch (r.kind) {
        case RecordKind::event:
            out += "event label=" + r.label;
            break;
        case RecordKind::pose:
            out += format("pose x=%.3f y=%.3f heading=%.4f", r.pose.position.x, r.pose.position.y, r.pose.heading);
            break;
        case RecordKind::photo:
            out += "photo label=" + r.label;
            break;
        case RecordKind::answer:
            out += "answer label=" + r.label;
            break;
        case RecordKind::stop:
            out += "stop reason=" + r.label;
            break;
        }
        if (r.cell)
            out += " cell=" + name_of(grid, *r.cell);
        out += '\n';
    }
    return out;
}

Metrics compute_metrics(const MissionLog& log, const MissionConfig& c)
{
    for (std::size_t i = 1; i < log.records.size(); ++i)
        if (log.records[i].t < log.records[i - 1].t)
            throw ValidationError("log timestamps decrease at record " + std::to_string(i));

    Metrics m;
    std::set<CellId> arrived;
    for (const auto& r : log.records)
        if (r.kind == RecordKind::event && r.label == "arrived" && r.cell)
            arrived.insert(*r.cell);
    m.covered = arrived.size();

    const double speed = c.limits.cruise_speed;
    auto loops = [&](std::string_view boundary) {
        std::vector<double> marks;
        for (const auto& r : log.records)
            if (r.kind == RecordKind::event && r.label == boundary)
                marks.push_back(r.t);
        // A time-limited run may end inside its first loop (find_nemo loitering).
        if (marks.size() < 2 && c.stop.kind == StopKind::time) {
            m.sim_duration = std::nan("");
            return;
        }
        if (marks.size() < 2)
            throw ValidationError("log has fewer than two '" + std::string(boundary) + "' loop boundaries");
        for (std::size_t i = 1; i < marks.size(); ++i)
            m.loop_durations.push_back(marks[i] - marks[i - 1]);
        m.sim_duration = std::accumulate(m.loop_durations.begin(), m.loop_durations.end(), 0.0) /
                         static_cast<double>(m.loop_durations.size());
    };

    switch (c.task) {
    case Task::fire_patrol:
        loops("reset");
        m.ideal_duration = tour_ideal(c, c.patrol);
        break;
    case Task::find_nemo:
        loops("reset");
        m.ideal_duration = tour_ideal(c, c.roi);
        break;
    case Task::ordered_patrol:
        loops("photo.loc" + std::to_string(c.waypoints.size()));
        m.ideal_duration = tour_ideal(c, c.waypoints);
        break;
    case Task::cover: {
        const auto takeoff = first_event(log, "takeoff");
        if (!takeoff)
            throw ValidationError("cover log has no takeoff");
        std::set<CellId> need(c.cover.begin(), c.cover.end());
        std::optional<double> done;
        for (const auto& r : log.records)
            if (r.kind == RecordKind::event && r.label == "arrived" && r.cell && need.erase(*r.cell) && need.empty()) {
                done = r.t;
                break;
            }
        if (!done)
            throw ValidationError("cover log ends before every cover cell is reached");
        m.sim_duration = *done - *takeoff;
        RegionSet region{"C", c.cover};
        std::sort(region.members.begin(), region.members.end());
        m.ideal_duration = ideal_cover_distance(c.grid, cell_center(c.grid, c.home), region) / speed;
        break;
    }
    case Task::search_and_map: {
        const auto takeoff = first_event(log, "takeoff");
        const auto land = first_event(log, "land");
        if (!takeoff || !land)
            throw ValidationError("search_and_map log needs takeoff and land");
        m.sim_duration = *land - *takeoff;
        RegionSet region{"U", c.universe};
        if (region.members.empty())
            for (CellId id = 0; id < c.grid.size(); ++id)
                region.members.push_back(id);
        std::sort(region.members.begin(), region.members.end());
        m.ideal_duration = ideal_cover_distance(c.grid, cell_center(c.grid, c.home), region) / speed;
        break;
    }
    }

    if (std::isnan(m.ideal_duration))
        m.overhead_ratio = std::numeric_limits<double>::quiet_NaN();
    else
        m.overhead_ratio = m.ideal_duration > 0 ? (m.sim_duration - m.ideal_duration) / m.ideal_duration : 0;
    return m;
}

} // namespace iterplan::missions

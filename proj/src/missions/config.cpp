#include "iterplan/missions.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace iterplan::missions {

namespace {

constexpr std::pair<Task, std::string_view> task_names[] = {
    {Task::fire_patrol, "fire_patrol"}, {Task::find_nemo, "find_nemo"},   {Task::search_and_map, "search_and_map"},
    {Task::ordered_patrol, "ordered_patrol"}, {Task::cover, "cover"},
};

void check_cells(const MissionConfig& c, const std::vector<CellId>& cells, const char* what)
{
    for (CellId id : cells)
        if (!c.grid.contains(id))
            throw ValidationError(std::string(what) + " cell " + std::to_string(id) + " is outside the grid");
}

} // namespace

std::string_view task_name(Task task)
{
    for (auto [t, name] : task_names)
        if (t == task)
            return name;
    return "?";
}

Task parse_task(std::string_view name)
{
    for (auto [t, n] : task_names)
        if (n == name)
            return t;
    throw ValidationError("unknown task '" + std::string(name) + "'");
}

void validate(const MissionConfig& c)
{
    if (c.grid.size() == 0 || c.grid.pitch <= 0)
        throw ValidationError("empty grid");
    check_cells(c, c.universe, "universe");
    check_cells(c, c.patrol, "patrol");
    check_cells(c, c.fire, "fire");
    check_cells(c, c.roi, "roi");
    check_cells(c, c.cover, "cover");
    check_cells(c, c.waypoints, "waypoint");
    check_cells(c, {c.home}, "home");
    if (c.target)
        check_cells(c, {*c.target}, "target");
    if (c.dt <= 0 || c.event_latency < 0 || c.max_time <= 0)
        throw ValidationError("dt, event_latency and max_time must be positive");
    if (c.limits.min_turn_radius <= 0 || c.limits.cruise_speed <= 0)
        throw ValidationError("vehicle limits must be positive");
    if (c.nemo.appear_rate < 0 || c.nemo.disappear_rate < 0)
        throw ValidationError("nemo rates must be non-negative");

    auto in_universe = [&](const std::vector<CellId>& cells, const char* what) {
        if (c.universe.empty())
            return;
        std::vector<CellId> u = c.universe;
        std::sort(u.begin(), u.end());
        for (CellId id : cells)
            if (!std::binary_search(u.begin(), u.end(), id))
                throw ValidationError(std::string(what) + " cell " + name_of(c.grid, id) +
                                      " is not in the iterator universe");
    };

    switch (c.task) {
    case Task::fire_patrol:
        if (c.patrol.empty())
            throw ValidationError("fire_patrol needs a non-empty patrol region");
        in_universe(c.patrol, "patrol");
        break;
    case Task::find_nemo:
        if (c.roi.empty())
            throw ValidationError("find_nemo needs a non-empty region of interest");
        in_universe(c.roi, "roi");
        break;
    case Task::search_and_map:
        break;
    case Task::ordered_patrol: {
        if (c.waypoints.empty() || c.waypoints.size() > 5)
            throw ValidationError("ordered_patrol needs 1 to 5 waypoints");
        std::vector<CellId> w = c.waypoints;
        std::sort(w.begin(), w.end());
        if (std::adjacent_find(w.begin(), w.end()) != w.end())
            throw ValidationError("ordered_patrol waypoints must be distinct");
        in_universe(c.waypoints, "waypoint");
        break;
    }
    case Task::cover:
        if (c.cover.empty())
            throw ValidationError("cover needs a non-empty cover region");
        in_universe(c.cover, "cover");
        break;
    }
    if (c.stop.kind == StopKind::complete && c.task != Task::cover && c.task != Task::search_and_map)
        throw ValidationError("stop = complete only applies to cover and search_and_map");
    if (c.stop.kind != StopKind::complete && c.stop.value <= 0)
        throw ValidationError("stop value must be positive");
}

Universe square_universe(std::size_t n, double pitch)
{
    if (n == 0)
        throw ValidationError("universe size must be positive");
    const auto side = static_cast<std::uint32_t>(std::ceil(std::sqrt(static_cast<double>(n)) - 1e-9));
    const auto rows = static_cast<std::uint32_t>((n + side - 1) / side);
    Universe u{build_grid({0, 0}, pitch, rows, side), {}};
    u.cells.resize(n);
    for (CellId c = 0; c < n; ++c)
        u.cells[c] = c;
    return u;
}

MissionConfig ordered_patrol_scenario(std::size_t universe, SorterKind sorter, std::uint64_t seed, int loops)
{
    auto u = square_universe(universe);
    if (u.grid.rows < 11 || u.grid.cols < 13)
        throw ValidationError("ordered_patrol scenario needs at least 11 rows and 13 columns");
    MissionConfig c;
    c.task = Task::ordered_patrol;
    c.grid = u.grid;
    c.universe = std::move(u.cells);
    c.waypoints = {c.grid.at(2, 2), c.grid.at(2, 12), c.grid.at(10, 7)};
    c.sorter = {sorter, seed};
    c.seed = seed;
    c.stop = {StopKind::loops, static_cast<double>(loops)};
    return c;
}

MissionConfig cover_scenario(std::size_t universe, std::size_t cells, SorterKind sorter, std::uint64_t seed)
{
    Universe u = universe == 713 ? Universe{build_grid({0, 0}, 50, 23, 31), {}} : square_universe(universe);
    if (u.cells.empty()) {
        u.cells.resize(u.grid.size());
        for (CellId c = 0; c < u.cells.size(); ++c)
            u.cells[c] = c;
    }
    if (u.grid.rows < 23 || u.grid.cols < 31)
        throw ValidationError("cover scenario needs at least 23 rows and 31 columns");
    if (cells == 0 || cells > 713)
        throw ValidationError("cover scenario size must be in 1..713");

    // Disc-like region: the cells nearest a seeded center inside the 23x31 footprint.
    std::mt19937_64 rng(seed);
    auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    const Point center{200 + unit() * 1150, 200 + unit() * 750};
    std::vector<std::pair<double, CellId>> by_distance;
    for (std::uint32_t r = 0; r < 23; ++r)
        for (std::uint32_t col = 0; col < 31; ++col) {
            const CellId id = u.grid.at(r, col);
            by_distance.emplace_back(distance(cell_center(u.grid, id), center), id);
        }
    std::sort(by_distance.begin(), by_distance.end());

    MissionConfig c;
    c.task = Task::cover;
    c.grid = u.grid;
    for (std::size_t k = 0; k < cells; ++k)
        c.cover.push_back(by_distance[k].second);
    std::sort(c.cover.begin(), c.cover.end());
    c.universe = std::move(u.cells);
    c.home = 0;
    c.sorter = {sorter, seed};
    c.seed = seed;
    c.stop = {StopKind::complete, 0};
    return c;
}

} // namespace iterplan::missions

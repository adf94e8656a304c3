#include "iterplan/error.hpp"
#include "iterplan/workspace.hpp"

#include <algorithm>
#include <limits>

namespace iterplan {

double ideal_distance(Point start, std::span<const Point> targets, IdealMode mode)
{
    const std::size_t n = targets.size();
    if (n > 12)
        throw ValidationError("exact ideal distance supports at most 12 targets");
    if (n == 0)
        return 0;

    // Held-Karp: best[mask][last] = shortest path from start covering mask, ending at last.
    constexpr double inf = std::numeric_limits<double>::infinity();
    const std::size_t full = std::size_t{1} << n;
    std::vector<double> best(full * n, inf);
    for (std::size_t k = 0; k < n; ++k)
        best[(std::size_t{1} << k) * n + k] = distance(start, targets[k]);
    for (std::size_t mask = 1; mask < full; ++mask) {
        for (std::size_t last = 0; last < n; ++last) {
            const double here = best[mask * n + last];
            if (here == inf)
                continue;
            for (std::size_t k = 0; k < n; ++k) {
                if (mask & (std::size_t{1} << k))
                    continue;
                double& slot = best[(mask | (std::size_t{1} << k)) * n + k];
                slot = std::min(slot, here + distance(targets[last], targets[k]));
            }
        }
    }
    double out = inf;
    for (std::size_t last = 0; last < n; ++last) {
        double d = best[(full - 1) * n + last];
        if (mode == IdealMode::tour)
            d += distance(targets[last], start);
        out = std::min(out, d);
    }
    return out;
}

double ideal_cover_distance(const GridMap& map, Point start, const RegionSet& region)
{
    if (region.members.empty())
        return 0;
    double nearest = std::numeric_limits<double>::infinity();
    for (CellId c : region.members)
        nearest = std::min(nearest, distance(start, cell_center(map, c)));
    return static_cast<double>(region.members.size() - 1) * map.pitch + nearest;
}

} // namespace iterplan

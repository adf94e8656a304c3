#include "iterplan/missions.hpp"

#include <algorithm>
#include <cmath>

namespace iterplan::missions {

namespace {

std::uint64_t splitmix(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double uniform01(std::uint64_t& state) { return static_cast<double>(splitmix(state) >> 11) * 0x1.0p-53; }

double exponential(std::uint64_t& state, double rate) { return -std::log1p(-uniform01(state)) / rate; }

} // namespace

Environment::Environment(const MissionConfig& config)
    : config_(&config), fire_(config.fire), sighted_(config.grid.size(), 0)
{
    std::sort(fire_.begin(), fire_.end());
    for (CellId c : config.roi) {
        std::uint64_t state = config.seed ^ (0xA0761D6478BD642FULL * (c + 1));
        const double a = config.nemo.appear_rate, d = config.nemo.disappear_rate;
        const bool initial = a + d > 0 && uniform01(state) < a / (a + d);
        nemo_.emplace(c, NemoTimeline{state, initial, {}});
    }
}

bool Environment::fire_at(CellId cell) const { return std::binary_search(fire_.begin(), fire_.end(), cell); }

bool Environment::in_region(CellId cell, const std::vector<CellId>& sorted_region)
{
    return std::binary_search(sorted_region.begin(), sorted_region.end(), cell);
}

bool Environment::nemo_present(CellId cell, double time)
{
    auto it = nemo_.find(cell);
    if (it == nemo_.end())
        return false;
    NemoTimeline& tl = it->second;
    // Extend until the timeline covers `time`; the sequence only depends on the seed.
    while (tl.switches.empty() || tl.switches.back() <= time) {
        const bool present = tl.initial != (tl.switches.size() % 2 == 1);
        const double rate = present ? config_->nemo.disappear_rate : config_->nemo.appear_rate;
        if (rate <= 0)
            return present;
        const double last = tl.switches.empty() ? 0 : tl.switches.back();
        tl.switches.push_back(last + exponential(tl.rng_state, rate));
    }
    const auto flips = std::upper_bound(tl.switches.begin(), tl.switches.end(), time) - tl.switches.begin();
    return tl.initial != (flips % 2 == 1);
}

bool Environment::target_visible(CellId cell) const
{
    if (!config_->target)
        return false;
    return distance(cell_center(config_->grid, cell), cell_center(config_->grid, *config_->target)) <=
           config_->visibility_radius + 1e-9;
}

bool Environment::adjacent_to_sighting(CellId cell) const
{
    const GridMap& g = config_->grid;
    const auto r = static_cast<std::int64_t>(g.row(cell)), c = static_cast<std::int64_t>(g.col(cell));
    for (std::int64_t dr = -1; dr <= 1; ++dr)
        for (std::int64_t dc = -1; dc <= 1; ++dc) {
            if (dr == 0 && dc == 0)
                continue;
            const auto rr = r + dr, cc = c + dc;
            if (rr < 0 || cc < 0 || rr >= g.rows || cc >= g.cols)
                continue;
            if (sighted_[g.at(static_cast<std::uint32_t>(rr), static_cast<std::uint32_t>(cc))])
                return true;
        }
    return false;
}

void Environment::record_sighting(CellId cell)
{
    if (!sighted_[cell]) {
        sighted_[cell] = 1;
        sightings_.push_back(cell);
    }
}

} // namespace iterplan::missions

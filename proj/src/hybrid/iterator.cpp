#include "iterplan/hybrid.hpp"

#include <algorithm>
#include <random>
#include <thread>

namespace iterplan {

namespace {

// Below this many cells the key computation runs on the calling thread.
constexpr std::size_t parallel_threshold = 20000;

bool same_pose(const VehicleState& a, const VehicleState& b)
{
    return a.position == b.position && a.heading == b.heading;
}

template <class F>
void parallel_for(std::size_t n, F&& body)
{
    const std::size_t workers = n < parallel_threshold ? 1 : std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
    if (workers == 1) {
        body(0, n);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk, hi = std::min(n, lo + chunk);
        if (lo < hi)
            pool.emplace_back([&, lo, hi] { body(lo, hi); });
    }
    for (auto& t : pool)
        t.join();
}

// Fisher-Yates with an explicit bounded draw so the order does not depend on
// the standard library's distribution implementation.
void shuffle(std::vector<CellId>& v, std::uint64_t seed, std::uint64_t round)
{
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + round);
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::size_t j = rng() % i;
        std::swap(v[i - 1], v[j]);
    }
}

using KeyedCell = std::pair<double, CellId>;

std::vector<KeyedCell> keyed(const SortContext& ctx, const VehicleState& ref, std::span<const CellId> cells)
{
    std::vector<KeyedCell> out(cells.size());
    parallel_for(cells.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
            out[i] = {travel_key(ctx, ref, cells[i]), cells[i]};
    });
    return out;
}

} // namespace

std::string_view sorter_name(SorterKind kind)
{
    switch (kind) {
    case SorterKind::distance:
        return "distance";
    case SorterKind::last:
        return "last";
    case SorterKind::random:
        return "random";
    }
    return "?";
}

SorterKind parse_sorter(std::string_view name)
{
    if (name == "distance")
        return SorterKind::distance;
    if (name == "last")
        return SorterKind::last;
    if (name == "random")
        return SorterKind::random;
    throw ValidationError("unknown sorter '" + std::string(name) + "'");
}

double travel_key(const SortContext& ctx, const VehicleState& reference, CellId cell)
{
    return trajectory_length(plan_trajectory(reference, cell_center(ctx.grid, cell), ctx.arrival_axis, ctx.limits));
}

std::vector<CellId> sort_order(const SorterStrategy& strategy, const VehicleState& reference,
                               std::span<const CellId> cells, const SortContext& ctx, std::uint64_t round)
{
    std::vector<CellId> out(cells.begin(), cells.end());
    switch (strategy.kind) {
    case SorterKind::distance: {
        auto keys = keyed(ctx, reference, cells);
        std::sort(keys.begin(), keys.end());
        for (std::size_t i = 0; i < keys.size(); ++i)
            out[i] = keys[i].second;
        break;
    }
    case SorterKind::last:
        std::sort(out.begin(), out.end());
        if (ctx.interesting)
            std::stable_partition(out.begin(), out.end(), [&](CellId c) { return !ctx.interesting(c); });
        break;
    case SorterKind::random:
        std::sort(out.begin(), out.end());
        shuffle(out, strategy.seed, round);
        break;
    }
    return out;
}

LocationIterator::LocationIterator(std::vector<CellId> universe, SorterStrategy strategy, SortContext ctx,
                                   const VehicleState& start)
    : universe_(std::move(universe)), strategy_(strategy), ctx_(std::move(ctx))
{
    if (universe_.empty())
        throw ValidationError("iterator universe is empty");
    slot_of_cell_.assign(ctx_.grid.size(), 0);
    for (std::size_t i = 0; i < universe_.size(); ++i) {
        const CellId c = universe_[i];
        if (!ctx_.grid.contains(c))
            throw ValidationError("iterator cell " + std::to_string(c) + " is outside the grid");
        if (slot_of_cell_[c] != 0)
            throw ValidationError("iterator cell " + std::to_string(c) + " appears twice");
        slot_of_cell_[c] = static_cast<CellId>(i + 1);
    }
    start_round(start);
}

std::size_t LocationIterator::slot(CellId cell) const
{
    if (cell >= slot_of_cell_.size() || slot_of_cell_[cell] == 0)
        throw ValidationError("cell " + std::to_string(cell) + " is not in the iterator universe");
    return slot_of_cell_[cell] - 1;
}

void LocationIterator::start_round(const VehicleState& reference)
{
    done_.assign(universe_.size(), 0);
    done_count_ = 0;
    next_.reset();
    heap_.clear();
    heap_ref_.reset();
    cursor_ = 0;
    if (strategy_.kind != SorterKind::distance)
        order_ = sort_order(strategy_, reference, universe_, ctx_, resets_);
    select(reference);
}

void LocationIterator::rebuild_heap(const VehicleState& reference)
{
    std::vector<CellId> rest;
    rest.reserve(universe_.size() - done_count_);
    for (std::size_t i = 0; i < universe_.size(); ++i)
        if (!done_[i])
            rest.push_back(universe_[i]);
    heap_ = keyed(ctx_, reference, rest);
    std::make_heap(heap_.begin(), heap_.end(), std::greater<>{});
    heap_ref_ = reference;
}

void LocationIterator::select(const VehicleState& reference)
{
    next_.reset();
    if (strategy_.kind != SorterKind::distance) {
        if (cursor_ < order_.size())
            next_ = order_[cursor_];
        return;
    }
    if (done_count_ == universe_.size())
        return;
    if (!heap_ref_ || !same_pose(*heap_ref_, reference))
        rebuild_heap(reference);
    std::pop_heap(heap_.begin(), heap_.end(), std::greater<>{});
    next_ = heap_.back().second;
    heap_.pop_back();
}

void LocationIterator::remove_next(const VehicleState& reference)
{
    if (!next_)
        throw ValidationError("remove_next on an exhausted iterator");
    done_[slot(*next_)] = 1;
    ++done_count_;
    if (strategy_.kind != SorterKind::distance)
        ++cursor_;
    select(reference);
}

void LocationIterator::reset(const VehicleState& reference)
{
    ++resets_;
    start_round(reference);
}

std::size_t LocationIterator::remaining_count() const
{
    return universe_.size() - done_count_ - (next_ ? 1 : 0);
}

bool LocationIterator::is_done(CellId cell) const { return done_[slot(cell)] != 0; }

std::vector<CellId> LocationIterator::remaining(const VehicleState& reference) const
{
    if (strategy_.kind != SorterKind::distance)
        return {order_.begin() + static_cast<std::ptrdiff_t>(std::min(cursor_ + 1, order_.size())), order_.end()};
    std::vector<CellId> rest;
    for (std::size_t i = 0; i < universe_.size(); ++i)
        if (!done_[i] && universe_[i] != next_)
            rest.push_back(universe_[i]);
    return sort_order(strategy_, reference, rest, ctx_);
}

void LocationIterator::check_invariant() const
{
    std::vector<char> seen(universe_.size(), 0);
    std::size_t done = 0;
    for (std::size_t i = 0; i < universe_.size(); ++i)
        if (done_[i]) {
            seen[i] = 1;
            ++done;
        }
    if (done != done_count_)
        throw Error("iterator done count is stale");
    auto mark = [&](CellId c, const char* part) {
        const std::size_t i = slot(c);
        if (seen[i])
            throw Error(std::string("iterator cell ") + std::to_string(c) + " is duplicated in " + part);
        seen[i] = 1;
    };
    if (next_)
        mark(*next_, "next");
    if (strategy_.kind == SorterKind::distance) {
        for (const auto& [key, c] : heap_)
            mark(c, "remaining");
    }
    else {
        for (std::size_t k = cursor_ + (next_ ? 1 : 0); k < order_.size(); ++k)
            mark(order_[k], "remaining");
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end())
        throw Error("iterator lost a cell");
    if (!next_ && done_count_ != universe_.size())
        throw Error("iterator next is null while cells remain");
}

} // namespace iterplan

#include <doctest.h>

#include "iterplan/hybrid.hpp"
#include "iterplan/spec.hpp"
#include "iterplan/synthesis.hpp"
#include "planner_oracle.hpp"

#include <chrono>
#include <random>
#include <set>

using namespace iterplan;

namespace {

SortContext context(std::uint32_t rows, std::uint32_t cols)
{
    SortContext ctx;
    ctx.grid = build_grid({0, 0}, 50, rows, cols);
    return ctx;
}

std::vector<CellId> all_cells(const GridMap& g)
{
    std::vector<CellId> v(g.size());
    for (CellId c = 0; c < v.size(); ++c)
        v[c] = c;
    return v;
}

VehicleState random_pose(std::mt19937_64& rng, double extent)
{
    std::uniform_real_distribution<double> pos(-100, extent + 100), head(0, 2 * std::numbers::pi);
    return {{pos(rng), pos(rng)}, head(rng), 17};
}

std::vector<CellId> drain(LocationIterator& it, const VehicleState& ref)
{
    std::vector<CellId> out;
    while (it.has_next()) {
        out.push_back(*it.next());
        it.remove_next(ref);
    }
    return out;
}

} // namespace

TEST_CASE("iterator partition invariant under random operations")
{
    std::mt19937_64 rng(42);
    std::size_t ops = 0;
    for (SorterKind kind : {SorterKind::distance, SorterKind::last, SorterKind::random}) {
        auto ctx = context(5, 7);
        ctx.interesting = [](CellId c) { return c % 3 == 0; };
        std::vector<CellId> universe;
        for (CellId c = 0; c < ctx.grid.size(); ++c)
            if (c % 4 != 1)
                universe.push_back(c);
        LocationIterator it(universe, {kind, 9}, ctx, random_pose(rng, 350));
        it.check_invariant();
        std::uniform_int_distribution<int> op(0, 19);
        const std::size_t until = kind == SorterKind::random ? 100000 : ops + 34000;
        while (ops < until) {
            const auto pose = random_pose(rng, 350);
            if (op(rng) == 0 || !it.has_next())
                it.reset(pose);
            else
                it.remove_next(pose);
            it.check_invariant();
            CHECK(it.done_count() + (it.has_next() ? 1 : 0) + it.remaining_count() == universe.size());
            ++ops;
        }
    }
    CHECK(ops >= 100000);
}

TEST_CASE("iterator drains every cell exactly once and then stays empty")
{
    auto ctx = context(4, 4);
    for (SorterKind kind : {SorterKind::distance, SorterKind::last, SorterKind::random}) {
        LocationIterator it(all_cells(ctx.grid), {kind, 1}, ctx, {});
        auto order = drain(it, {});
        CHECK(std::set<CellId>(order.begin(), order.end()).size() == 16);
        CHECK(order.size() == 16);
        CHECK_FALSE(it.has_next());
        CHECK_THROWS_AS(it.remove_next({}), ValidationError);
        it.reset({});
        CHECK(it.has_next());
        CHECK(it.done_count() == 0);
        CHECK(it.resets() == 1);
    }
}

TEST_CASE("iterator rejects bad universes")
{
    auto ctx = context(2, 2);
    CHECK_THROWS_AS(LocationIterator({}, {}, ctx, {}), ValidationError);
    CHECK_THROWS_AS(LocationIterator({0, 1, 1}, {}, ctx, {}), ValidationError);
    CHECK_THROWS_AS(LocationIterator({0, 9}, {}, ctx, {}), ValidationError);
    CHECK_THROWS_AS((void)parse_sorter("nearest"), ValidationError);
    CHECK(parse_sorter("last") == SorterKind::last);
}

TEST_CASE("distance order agrees with the grid-search oracle")
{
    std::mt19937_64 rng(7);
    for (int instance = 0; instance < 500; ++instance) {
        auto ctx = context(8, 8);
        ctx.arrival_axis = std::uniform_real_distribution<double>(0, std::numbers::pi)(rng);
        std::vector<CellId> cells;
        for (CellId c = 0; c < 64; ++c)
            if (rng() % 4 == 0)
                cells.push_back(c);
        if (cells.empty())
            cells.push_back(static_cast<CellId>(rng() % 64));
        const auto ref = random_pose(rng, 400);
        LocationIterator it(cells, {SorterKind::distance}, ctx, ref);
        auto order = drain(it, ref);
        REQUIRE(order == sort_order({SorterKind::distance}, ref, cells, ctx));
        double prev = 0;
        for (CellId c : order) {
            const double key = testing::grid_search_length(ref, cell_center(ctx.grid, c), ctx.arrival_axis,
                                                           ctx.limits.min_turn_radius);
            CHECK(key >= prev * (1 - 0.005) - 1e-6);
            CHECK(travel_key(ctx, ref, c) == doctest::Approx(key).epsilon(0.005));
            prev = std::max(prev, key);
        }
    }
}

TEST_CASE("distance ties break by cell id")
{
    // Two cells mirrored across the heading line are equally far.
    auto ctx = context(3, 3);
    VehicleState ref{cell_center(ctx.grid, 4), 0, 17};
    ref.position.x -= 500;
    auto order = sort_order({SorterKind::distance}, ref, std::vector<CellId>{6, 0}, ctx);
    CHECK(travel_key(ctx, ref, 0) == doctest::Approx(travel_key(ctx, ref, 6)));
    CHECK(order == std::vector<CellId>{0, 6});
}

TEST_CASE("distance sorter re-sorts when the reference pose changes")
{
    auto ctx = context(6, 6);
    std::mt19937_64 rng(3);
    LocationIterator it(all_cells(ctx.grid), {SorterKind::distance}, ctx, {});
    for (int k = 0; k < 20; ++k) {
        const auto ref = random_pose(rng, 300);
        auto expected = it.remaining(ref);
        it.remove_next(ref);
        REQUIRE(it.has_next());
        CHECK(*it.next() == expected.front());
    }
}

TEST_CASE("last sorter puts interesting cells at the end")
{
    auto ctx = context(10, 10);
    std::set<CellId> interesting{3, 17, 42, 99};
    ctx.interesting = [&](CellId c) { return interesting.count(c) > 0; };
    std::mt19937_64 rng(5);
    auto order = sort_order({SorterKind::last}, random_pose(rng, 500), all_cells(ctx.grid), ctx);
    REQUIRE(order.size() == 100);
    for (std::size_t i = 0; i < 96; ++i)
        CHECK_FALSE(interesting.count(order[i]));
    CHECK(std::vector<CellId>(order.end() - 4, order.end()) == std::vector<CellId>{3, 17, 42, 99});
    // Pose independent.
    CHECK(order == sort_order({SorterKind::last}, random_pose(rng, 500), all_cells(ctx.grid), ctx));
}

TEST_CASE("random sorter is seeded and changes per round")
{
    auto ctx = context(10, 10);
    const auto cells = all_cells(ctx.grid);
    auto a = sort_order({SorterKind::random, 11}, {}, cells, ctx, 0);
    CHECK(a == sort_order({SorterKind::random, 11}, {{5, 5}, 1, 17}, cells, ctx, 0));
    CHECK(a != sort_order({SorterKind::random, 12}, {}, cells, ctx, 0));
    CHECK(a != sort_order({SorterKind::random, 11}, {}, cells, ctx, 1));
    LocationIterator it(cells, {SorterKind::random, 11}, ctx, {});
    CHECK(drain(it, {}) == a);
}

TEST_CASE("distance sort of 40000 cells stays under the time budget")
{
    auto ctx = context(200, 200);
    const auto cells = all_cells(ctx.grid);
    const auto t0 = std::chrono::steady_clock::now();
    auto order = sort_order({SorterKind::distance}, {{5000, 5000}, 0.3, 17}, cells, ctx);
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    MESSAGE("40k distance sort: " << s << " s");
    CHECK(order.size() == 40000);
    CHECK(s < 2.9);
}

namespace {

// Host that arrives instantly and records what it is asked to do.
struct FakeHost : HybridHost {
    Interpreter* interp = nullptr;
    GridMap grid;
    VehicleState pose;
    std::vector<std::string> actions;
    std::vector<CellId> visits;
    bool flying = false;

    double now() const override { return 0; }
    VehicleState reference_pose() const override { return pose; }
    void start_motion(CellId target) override
    {
        visits.push_back(target);
        pose.position = cell_center(grid, target);
        flying = true;
    }
    void actuate(std::string_view label, std::optional<CellId> current) override
    {
        actions.push_back(std::string(label) + "@" + (current ? name_of(grid, *current) : "-"));
    }
    void sensor_answer(std::string_view, CellId) override {}
};

} // namespace

TEST_CASE("interpreter drives the fire patrol controller over a 7x7 grid")
{
    auto result = synth::synthesize(spec::builtin_spec("fire_patrol"), {}, false);
    REQUIRE(result.controller);
    auto ctx = context(7, 7);
    std::set<CellId> patrol{id_of(ctx.grid, "C5"), id_of(ctx.grid, "A2"), id_of(ctx.grid, "B2")};
    ctx.interesting = [&](CellId c) { return patrol.count(c) > 0; };
    LocationIterator it(all_cells(ctx.grid), {SorterKind::last}, ctx, {});
    const CellId fire = id_of(ctx.grid, "C5");
    std::vector<SensorBinding> sensors{
        {"is.next.inP?", "yes.next.inP", "no.next.inP", SensorScope::next_location,
         [&](CellId c, double) { return patrol.count(c) > 0; }},
        {"fire?", "yes.fire", "no.fire", SensorScope::current_location, [&](CellId c, double) { return c == fire; }},
    };
    Interpreter interp(*result.controller, it, sensors);
    FakeHost host;
    host.grid = ctx.grid;
    std::size_t resets = 0;
    for (int k = 0; k < 2000 && resets < 3; ++k) {
        auto l = interp.step(host);
        if (!l) {
            REQUIRE(host.flying);
            host.flying = false;
            interp.inject("arrived");
            continue;
        }
        if (interp.name(*l) == "reset")
            ++resets;
    }
    CHECK(resets == 3);
    // Two full loops after the first reset; each visits the three P cells in id order.
    REQUIRE(host.visits.size() >= 6);
    const std::vector<CellId> loop{id_of(ctx.grid, "A2"), id_of(ctx.grid, "B2"), id_of(ctx.grid, "C5")};
    CHECK(std::vector<CellId>(host.visits.begin(), host.visits.begin() + 3) == loop);
    CHECK(std::vector<CellId>(host.visits.begin() + 3, host.visits.begin() + 6) == loop);
    CHECK(std::count(host.actions.begin(), host.actions.end(), "take.photo@C5") >= 2);
    CHECK(std::count(host.actions.begin(), host.actions.end(), "takeoff@-") == 1);
}

TEST_CASE("interpreter aborts on an event the controller does not enable")
{
    auto result = synth::synthesize(spec::builtin_spec("fire_patrol"), {}, false);
    auto ctx = context(2, 2);
    LocationIterator it(all_cells(ctx.grid), {SorterKind::last}, ctx, {});
    Interpreter interp(*result.controller, it,
                       {{"is.next.inP?", "yes.next.inP", "no.next.inP", SensorScope::next_location,
                         [](CellId, double) { return true; }},
                        {"fire?", "yes.fire", "no.fire", SensorScope::current_location,
                         [](CellId, double) { return false; }}});
    interp.inject("arrived");
    FakeHost host;
    host.grid = ctx.grid;
    CHECK_THROWS_AS(interp.step(host), InterpreterAbort);
    CHECK_THROWS_AS(Interpreter(*result.controller, it,
                                {{"smoke?", "yes.smoke", "no.smoke", SensorScope::current_location, {}}}),
                    ValidationError);
}

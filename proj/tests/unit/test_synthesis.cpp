#include <doctest.h>

#include "iterplan/synthesis.hpp"
#include "random_arena.hpp"

#include <chrono>
#include <random>
#include <set>

using namespace iterplan;
using namespace iterplan::synth;

namespace {

StateSet states(std::size_t n, std::initializer_list<std::size_t> members)
{
    StateSet s(n);
    for (auto m : members)
        s.set(m);
    return s;
}

std::vector<ActionLabel> labels(std::initializer_list<std::pair<const char*, bool>> spec)
{
    std::vector<ActionLabel> out;
    for (auto [name, controlled] : spec)
        out.push_back({name, controlled ? Controllability::controlled : Controllability::uncontrolled});
    return out;
}

// Traces of a deterministic system up to `depth` actions.
std::set<std::vector<std::string>> traces(const Lts& l, std::size_t depth)
{
    std::set<std::vector<std::string>> out;
    std::vector<std::pair<StateId, std::vector<std::string>>> frontier{{l.initial(), {}}};
    for (std::size_t d = 0; d < depth; ++d) {
        std::vector<std::pair<StateId, std::vector<std::string>>> next;
        for (auto& [s, t] : frontier) {
            for (const auto& tr : l.out(s)) {
                auto t2 = t;
                t2.push_back(l.label(tr.label).name);
                out.insert(t2);
                next.emplace_back(tr.target, std::move(t2));
            }
        }
        frontier = std::move(next);
    }
    return out;
}

} // namespace

TEST_CASE("one-state controllable loop is realizable")
{
    auto a = GameArena::make(labels({{"a", true}}), 1, 0, {{{0, 0}}}, {}, {}, {states(1, {0})});
    auto st = solve_gr1(a);
    REQUIRE(st);
    CHECK(st->decision[0][0] == 0);
    CHECK(brute_force_realizability(a));
    Lts c = extract_controller(a, *st);
    CHECK(c.num_states() == 1);
    CHECK(c.transitions().size() == 1);
    CHECK(verify_on_arena(a, c).ok());
}

TEST_CASE("uncontrollable move into error is unrealizable")
{
    auto a = GameArena::make(labels({{"a", true}, {"u", false}}), 2, 0, {{{0, 0}, {1, 1}}, {}}, states(2, {1}), {},
                             {});
    CHECK_FALSE(solve_gr1(a));
    CHECK_FALSE(brute_force_realizability(a));
    CHECK_FALSE(winning_region(a)[0]);
}

TEST_CASE("controllable move into error is simply disabled")
{
    auto a = GameArena::make(labels({{"a", true}, {"b", true}}), 2, 0, {{{0, 1}, {1, 0}}, {}}, states(2, {1}), {}, {});
    auto st = solve_gr1(a);
    REQUIRE(st);
    CHECK(st->decision[0][0] == 1);
}

TEST_CASE("a state with no moves loses")
{
    auto a = GameArena::make(labels({{"a", true}}), 2, 0, {{{0, 1}}, {}}, {}, {}, {});
    CHECK_FALSE(solve_gr1(a));
    CHECK_FALSE(brute_force_realizability(a));
}

TEST_CASE("waiting is only possible when the environment can move")
{
    // State 0: controllable a to a dead end, nothing else.
    auto a = GameArena::make(labels({{"a", true}, {"u", false}}), 2, 0, {{{0, 1}}, {}}, {}, {}, {});
    CHECK_FALSE(solve_gr1(a));
}

TEST_CASE("assumptions excuse unreached goals")
{
    // The environment may loop on u in state 0 forever; the goal is state 1.
    // Without assumptions the controller cannot force the goal.
    auto moves = std::vector<std::vector<Move>>{{{1, 0}, {0, 1}}, {{0, 0}}};
    auto alpha = labels({{"a", true}, {"u", false}});
    auto lose = GameArena::make(alpha, 2, 0, moves, {}, {}, {states(2, {1})});
    CHECK_FALSE(solve_gr1(lose));
    CHECK_FALSE(brute_force_realizability(lose));
    // Assume the environment visits state 1 infinitely often: trivially winning.
    auto win = GameArena::make(alpha, 2, 0, moves, {}, {states(2, {1})}, {states(2, {1})});
    CHECK(solve_gr1(win));
    CHECK(brute_force_realizability(win));
}

TEST_CASE("two goals need memory")
{
    // Controller picks a -> 1 or b -> 2 from 0, both return. Goals 1 and 2.
    auto a = GameArena::make(labels({{"a", true}, {"b", true}, {"r", false}}), 3, 0,
                             {{{0, 1}, {1, 2}}, {{2, 0}}, {{2, 0}}}, {}, {}, {states(3, {1}), states(3, {2})});
    auto st = solve_gr1(a);
    REQUIRE(st);
    CHECK(brute_force_realizability(a));
    Lts c = extract_controller(a, *st);
    CHECK(verify_on_arena(a, c).ok());
    auto t = traces(c, 4);
    CHECK(t.count({"a", "r", "b", "r"}) == 1);
}

TEST_CASE("brute-force oracle rejects arenas beyond its bounds")
{
    std::vector<std::vector<Move>> moves(9);
    auto a = GameArena::make(labels({{"a", true}}), 9, 0, moves, {}, {}, {});
    CHECK_THROWS_AS((void)brute_force_realizability(a), ValidationError);
}

TEST_CASE("arena construction validates input")
{
    auto alpha = labels({{"a", true}});
    CHECK_THROWS_AS(GameArena::make(alpha, 1, 0, {{{0, 0}, {0, 0}}}, {}, {}, {}), ValidationError);
    CHECK_THROWS_AS(GameArena::make(alpha, 1, 0, {{{1, 0}}}, {}, {}, {}), ValidationError);
    CHECK_THROWS_AS(GameArena::make(alpha, 1, 1, {{}}, {}, {}, {}), ValidationError);
    CHECK_THROWS_AS(GameArena::make(alpha, 1, 0, {{}}, StateSet(2), {}, {}), ValidationError);
}

TEST_CASE("solver agrees with the brute-force oracle on random arenas")
{
    std::mt19937_64 rng(20240611);
    std::size_t realizable = 0;
    for (int round = 0; round < 1000; ++round) {
        CAPTURE(round);
        GameArena a = testing::random_arena(rng);
        auto st = solve_gr1(a);
        REQUIRE(st.has_value() == brute_force_realizability(a));
        if (!st)
            continue;
        ++realizable;
        Lts c = extract_controller(a, *st);
        auto report = verify_on_arena(a, c);
        CHECK(report.ok());
    }
    // Both verdicts must actually occur.
    CHECK(realizable > 100);
    CHECK(realizable < 900);
}

TEST_CASE("adding a controllable move never shrinks the winning region")
{
    std::mt19937_64 rng(99);
    for (int round = 0; round < 300; ++round) {
        GameArena a = testing::random_arena(rng);
        std::vector<std::vector<Move>> moves(a.num_states);
        for (StateId s = 0; s < a.num_states; ++s)
            moves[s].assign(a.out(s).begin(), a.out(s).end());
        // Add the first missing controllable move found at a random state.
        std::uniform_int_distribution<StateId> pick(0, static_cast<StateId>(a.num_states - 1));
        StateId s = pick(rng);
        for (LabelId l = 0; l < a.alphabet.size(); ++l) {
            bool present = false;
            for (auto& m : moves[s])
                present = present || m.label == l;
            if (!present && a.controllable(l)) {
                moves[s].push_back({l, pick(rng)});
                break;
            }
        }
        auto b = GameArena::make(a.alphabet, a.num_states, a.initial, moves, a.error, a.assumptions, a.goals);
        StateSet wa = winning_region(a), wb = winning_region(b);
        CHECK(wa.is_subset_of(wb));
    }
}

TEST_CASE("trivial document gives a one-state arena")
{
    auto doc = spec::parse("controlled a\nprocess P = states 1 ; init 0 ; 0 -a-> 0\nplant P\n");
    auto arena = build_game(doc);
    CHECK(arena.num_states == 1);
    CHECK(arena.error.none());
    CHECK(arena.assumptions.size() == 1);
    CHECK(arena.assumptions[0].all());
    auto r = synthesize(doc);
    REQUIRE(r.realizable);
    CHECK(r.controller->num_states() == 1);
    CHECK(r.report->ok());
}

TEST_CASE("state cap is enforced")
{
    auto doc = spec::builtin_spec("fire_patrol");
    CHECK_THROWS_AS((void)build_game(doc, BuildOptions{100}), StateCapExceeded);
}

TEST_CASE("arena valuations follow the trace fold")
{
    auto doc = spec::builtin_spec("fire_patrol");
    auto problem = make_problem(doc);
    auto arena = build_game(problem);
    std::mt19937_64 rng(5);
    for (int walk = 0; walk < 200; ++walk) {
        StateId s = arena.initial;
        std::vector<std::string> trace;
        for (int step = 0; step < 30; ++step) {
            auto out = arena.out(s);
            if (out.empty())
                break;
            const Move& m = out[std::uniform_int_distribution<std::size_t>(0, out.size() - 1)(rng)];
            trace.push_back(arena.alphabet[m.label].name);
            s = m.target;
            if (arena.error[s])
                break;
            auto expected = evaluate_trace(trace, problem.fluents);
            REQUIRE(arena.valuation[s] == expected.back());
        }
    }
}

TEST_CASE("fire patrol controller follows the iterator cycle")
{
    auto doc = spec::builtin_spec("fire_patrol");
    auto r = synthesize(doc);
    REQUIRE(r.realizable);
    REQUIRE(r.report);
    CHECK(r.report->ok());
    for (Check c : {Check::deadlock, Check::blocking, Check::safety, Check::liveness})
        CHECK(r.report->passed(c));

    const Lts& c = *r.controller;
    auto t = traces(c, 16);
    using V = std::vector<std::string>;
    CHECK(t.count(V{"takeoff", "has.next?", "n.next", "reset", "has.next?"}));
    CHECK(t.count(V{"takeoff", "has.next?", "y.next", "is.next.inP?", "no.next.inP", "remove.next", "has.next?"}));
    CHECK(t.count(V{"takeoff", "has.next?", "y.next", "is.next.inP?", "yes.next.inP", "go.next", "arrived", "fire?",
                    "no.fire", "remove.next", "has.next?"}));
    CHECK(t.count(V{"takeoff", "has.next?", "y.next", "is.next.inP?", "yes.next.inP", "go.next", "arrived", "fire?",
                    "yes.fire", "take.photo", "remove.next", "has.next?"}));
    // Every controller state offers at most one controllable.
    for (StateId s = 0; s < c.num_states(); ++s) {
        int controllables = 0;
        for (const auto& tr : c.out(s))
            controllables += c.label(tr.label).controlled();
        CHECK(controllables <= 1);
    }
    // Landing is never chosen.
    for (const auto& tr : c.transitions())
        CHECK(c.label(tr.label).name != "land");
}

TEST_CASE("controller that removes right after y.next violates safety")
{
    auto doc = spec::builtin_spec("fire_patrol");
    auto problem = make_problem(doc);
    Lts bad("BAD", 4, 0, problem.plant.alphabet(),
            {{0, "takeoff", 1}, {1, "has.next?", 2}, {2, "y.next", 3}, {2, "n.next", 0}, {3, "remove.next", 1}});
    auto report = verify_controller(problem, bad);
    CHECK_FALSE(report.passed(Check::safety));
    const Violation* v = nullptr;
    for (const auto& x : report.violations) {
        if (x.check == Check::safety)
            v = &x;
    }
    REQUIRE(v);
    CHECK(v->path == std::vector<std::string>{"takeoff", "has.next?", "y.next", "remove.next"});
}

TEST_CASE("verifier reports blocking, deadlock and starvation")
{
    auto doc = spec::parse(R"(controlled a b
uncontrolled u
process P = states 2 ; init 0 ; 0 -a-> 1 ; 1 -u-> 0 ; 0 -b-> 0
fluent AfterA = <a, {b, u}>
goal liveness []<> AfterA
plant P
)");
    auto problem = make_problem(doc);
    const auto& alpha = problem.plant.alphabet();
    // Blocks u after a.
    Lts blocking("C", 2, 0, alpha, {{0, "a", 1}});
    auto r1 = verify_controller(problem, blocking);
    CHECK_FALSE(r1.passed(Check::blocking));
    CHECK_FALSE(r1.passed(Check::deadlock));
    // Loops on b forever: AfterA never holds.
    Lts starving("C", 1, 0, alpha, {{0, "b", 0}, {0, "u", 0}});
    auto r2 = verify_controller(problem, starving);
    CHECK(r2.passed(Check::blocking));
    CHECK(r2.passed(Check::deadlock));
    REQUIRE_FALSE(r2.passed(Check::liveness));
    CHECK(r2.violations.back().loop == std::vector<std::string>{"b"});
    // The synthesized controller alternates a and u.
    auto r = synthesize(doc);
    REQUIRE(r.realizable);
    CHECK(r.report->ok());
}

TEST_CASE("fair cycles respect assumptions and reachability")
{
    // 0 -> 1 -> 1, 2 -> 2 unreachable.
    std::vector<std::vector<std::size_t>> succ{{1}, {1}, {2}};
    auto none = states(3, {});
    auto all = StateSet(3).set();
    auto lasso = find_fair_cycle(succ, {all}, {none});
    REQUIRE(lasso);
    CHECK(lasso->stem == std::vector<std::size_t>{0, 1});
    CHECK(lasso->loop == std::vector<std::size_t>{1});
    CHECK_FALSE(find_fair_cycle(succ, {states(3, {0, 2})}, {none}));
    CHECK_FALSE(find_fair_cycle(succ, {all}, {states(3, {1})}));
    CHECK_FALSE(find_fair_cycle({{1}, {}}, {all}, {none}));
}

TEST_CASE("synthesis is deterministic")
{
    for (const auto& name : spec::builtin_names()) {
        CAPTURE(name);
        auto doc = spec::builtin_spec(name);
        auto a = synthesize(doc, {}, false);
        auto b = synthesize(doc, {}, false);
        REQUIRE(a.realizable);
        CHECK(serialize_controller(*a.controller) == serialize_controller(*b.controller));
        CHECK(serialize_arena(a.arena) == serialize_arena(b.arena));
    }
}

TEST_CASE("every builtin task is realizable and verified")
{
    for (const auto& name : spec::builtin_names()) {
        CAPTURE(name);
        auto t0 = std::chrono::steady_clock::now();
        auto r = synthesize(spec::builtin_spec(name));
        double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        REQUIRE(r.realizable);
        CHECK(r.report->ok());
        CHECK(s < 5.0);
    }
}

TEST_CASE("serialized controller parses back as a process")
{
    auto r = synthesize(spec::builtin_spec("fire_patrol"), {}, false);
    std::string text = serialize_controller(*r.controller) + "plant CONTROLLER\n";
    auto doc = spec::parse(text);
    Lts back = spec::process_lts(doc, doc.processes.front());
    CHECK(back == *r.controller);
}

TEST_CASE("find_nemo controller revisits while the target stays")
{
    auto r = synthesize(spec::builtin_spec("find_nemo"), {}, false);
    REQUIRE(r.realizable);
    const Lts& c = *r.controller;
    // After yes.nemo: take.photo, go.next, arrived, nemo? again.
    auto t = traces(c, 18);
    bool found = false;
    for (const auto& tr : t) {
        for (std::size_t i = 0; i + 4 < tr.size(); ++i) {
            if (tr[i] == "yes.nemo" && tr[i + 1] == "take.photo" && tr[i + 2] == "go.next" && tr[i + 3] == "arrived" &&
                tr[i + 4] == "nemo?")
                found = true;
        }
    }
    CHECK(found);
    // And n.next is followed by reset.
    for (const auto& tr : t) {
        for (std::size_t i = 0; i + 1 < tr.size(); ++i) {
            if (tr[i] == "n.next")
                CHECK(tr[i + 1] == "reset");
        }
    }
}

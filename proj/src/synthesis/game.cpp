#include "iterplan/synthesis.hpp"

#include <algorithm>
#include <cstring>
#include <unordered_map>

namespace iterplan::synth {

ControlProblem make_problem(const spec::SpecDocument& doc)
{
    ControlProblem p;
    p.plant = spec::plant_lts(doc);
    p.fluents = spec::effective_fluents(doc);
    for (const auto& a : doc.assumptions)
        p.assumptions.push_back(*match_liveness(spec::expand(doc, a)));
    for (const auto& g : doc.goals) {
        Formula f = spec::expand(doc, g.formula);
        if (g.kind == spec::GoalKind::liveness)
            p.goals.push_back(*match_liveness(f));
        else
            p.safety.push_back(f);
    }
    return p;
}

GameArena GameArena::make(std::vector<ActionLabel> alphabet, std::size_t num_states, StateId initial,
                          std::vector<std::vector<Move>> moves, StateSet error, std::vector<StateSet> assumptions,
                          std::vector<StateSet> goals)
{
    if (num_states == 0 || initial >= num_states || moves.size() != num_states)
        throw ValidationError("arena: bad state count or initial state");
    GameArena a;
    a.alphabet = std::move(alphabet);
    a.num_states = num_states;
    a.initial = initial;
    a.offsets.assign(num_states + 1, 0);
    for (std::size_t s = 0; s < num_states; ++s) {
        auto& ms = moves[s];
        std::sort(ms.begin(), ms.end(), [](const Move& x, const Move& y) { return x.label < y.label; });
        for (std::size_t k = 0; k < ms.size(); ++k) {
            if (ms[k].label >= a.alphabet.size() || ms[k].target >= num_states)
                throw ValidationError("arena: move out of range");
            if (k > 0 && ms[k].label == ms[k - 1].label)
                throw ValidationError("arena: nondeterministic move");
            a.moves.push_back(ms[k]);
        }
        a.offsets[s + 1] = static_cast<std::uint32_t>(a.moves.size());
    }
    auto sized = [&](StateSet& s) {
        if (s.size() != num_states)
            throw ValidationError("arena: set size mismatch");
    };
    if (error.empty())
        error.resize(num_states);
    sized(error);
    a.error = std::move(error);
    if (assumptions.empty())
        assumptions.push_back(StateSet(num_states).set());
    if (goals.empty())
        goals.push_back(StateSet(num_states).set());
    for (auto& s : assumptions)
        sized(s);
    for (auto& s : goals)
        sized(s);
    a.assumptions = std::move(assumptions);
    a.goals = std::move(goals);
    return a;
}

GameArena build_game(const ControlProblem& problem, const BuildOptions& options)
{
    const Lts& plant = problem.plant;
    std::vector<std::string> names;
    for (const auto& f : problem.fluents)
        names.push_back(f.name);
    FluentTable table(problem.fluents, plant.alphabet());

    std::vector<SafetyMonitor> monitors;
    for (const auto& s : problem.safety)
        monitors.emplace_back(s, names);
    std::vector<BoolProgram> assumption_programs, goal_programs;
    for (const auto& a : problem.assumptions)
        assumption_programs.emplace_back(a, names);
    for (const auto& g : problem.goals)
        goal_programs.emplace_back(g, names);

    GameArena arena;
    arena.alphabet = plant.alphabet();
    arena.fluent_names = names;

    // Error states collapse into one absorbing sink, created on first use.
    std::optional<StateId> error_state;
    std::unordered_map<std::string, StateId> index;
    std::vector<std::vector<Move>> moves;

    auto encode = [&](StateId p, const std::vector<MonitorStatus>& st, const Valuation& v) {
        std::string key(sizeof(StateId) + st.size() + (v.size() + 7) / 8, '\0');
        std::memcpy(key.data(), &p, sizeof(StateId));
        for (std::size_t i = 0; i < st.size(); ++i)
            key[sizeof(StateId) + i] = static_cast<char>(st[i]);
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i])
                key[sizeof(StateId) + st.size() + i / 8] |= static_cast<char>(1 << (i % 8));
        }
        return key;
    };
    auto add_state = [&](StateId p, std::vector<MonitorStatus> st, Valuation v) -> StateId {
        auto id = static_cast<StateId>(arena.plant_state.size());
        if (id >= options.state_cap)
            throw StateCapExceeded("arena exceeds the state cap of " + std::to_string(options.state_cap));
        arena.plant_state.push_back(p);
        arena.monitor_status.push_back(std::move(st));
        arena.valuation.push_back(std::move(v));
        moves.emplace_back();
        return id;
    };
    auto intern = [&](StateId p, std::vector<MonitorStatus> st, Valuation v) -> StateId {
        bool bad = std::any_of(st.begin(), st.end(), [](MonitorStatus m) { return m == MonitorStatus::error; });
        if (bad) {
            if (!error_state)
                error_state = add_state(p, std::move(st), std::move(v));
            return *error_state;
        }
        auto [it, inserted] = index.try_emplace(encode(p, st, v), 0);
        if (inserted)
            it->second = add_state(p, std::move(st), std::move(v));
        return it->second;
    };

    Valuation v0 = table.initial();
    std::vector<MonitorStatus> s0;
    for (const auto& m : monitors)
        s0.push_back(m.start(v0));
    arena.initial = intern(plant.initial(), s0, v0);

    for (StateId cur = 0; cur < arena.plant_state.size(); ++cur) {
        if (error_state && cur == *error_state)
            continue;
        for (const auto& t : plant.out(arena.plant_state[cur])) {
            Valuation v = arena.valuation[cur];
            table.apply(v, t.label);
            std::vector<MonitorStatus> st(monitors.size());
            for (std::size_t i = 0; i < monitors.size(); ++i)
                st[i] = monitors[i].step(arena.monitor_status[cur][i], v);
            StateId target = intern(t.target, std::move(st), std::move(v));
            moves[cur].push_back({t.label, target});
        }
    }

    const std::size_t n = arena.plant_state.size();
    arena.num_states = n;
    arena.offsets.assign(n + 1, 0);
    for (std::size_t s = 0; s < n; ++s) {
        arena.moves.insert(arena.moves.end(), moves[s].begin(), moves[s].end());
        arena.offsets[s + 1] = static_cast<std::uint32_t>(arena.moves.size());
    }
    arena.error.resize(n);
    if (error_state)
        arena.error.set(*error_state);

    auto mark = [&](const std::vector<BoolProgram>& programs) {
        std::vector<StateSet> sets;
        for (const auto& prog : programs) {
            StateSet set(n);
            for (std::size_t s = 0; s < n; ++s)
                set[s] = !arena.error[s] && prog(arena.valuation[s]);
            sets.push_back(std::move(set));
        }
        if (sets.empty()) {
            StateSet all(n);
            all.set();
            sets.push_back(std::move(all));
        }
        return sets;
    };
    arena.assumptions = mark(assumption_programs);
    arena.goals = mark(goal_programs);
    return arena;
}

GameArena build_game(const spec::SpecDocument& doc, const BuildOptions& options)
{
    return build_game(make_problem(doc), options);
}

} // namespace iterplan::synth

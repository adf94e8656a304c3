#include "iterplan/synthesis.hpp"

#include <algorithm>
#include <chrono>

namespace iterplan::synth {

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point since)
{
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

const char* status_name(MonitorStatus s)
{
    switch (s) {
    case MonitorStatus::idle:
        return "idle";
    case MonitorStatus::watching:
        return "watching";
    case MonitorStatus::error:
        return "error";
    }
    return "?";
}

} // namespace

std::string serialize_controller(const Lts& controller)
{
    std::string controlled, uncontrolled;
    for (const auto& l : controller.alphabet())
        (l.controlled() ? controlled : uncontrolled) += " " + l.name;
    std::string out;
    if (!controlled.empty())
        out += "controlled" + controlled + "\n";
    if (!uncontrolled.empty())
        out += "uncontrolled" + uncontrolled + "\n";
    out += "process CONTROLLER = states " + std::to_string(controller.num_states()) + " ; init " +
           std::to_string(controller.initial());
    // Labels the controller never fires still constrain the composition.
    std::vector<bool> used(controller.alphabet().size());
    for (const auto& t : controller.transitions())
        used[t.label] = true;
    if (std::find(used.begin(), used.end(), false) != used.end()) {
        out += " ; alphabet {";
        for (std::size_t l = 0; l < used.size(); ++l)
            out += (l ? ", " : "") + controller.alphabet()[l].name;
        out += "}";
    }
    for (const auto& t : controller.transitions())
        out += " ; " + std::to_string(t.source) + " -" + controller.label(t.label).name + "-> " +
               std::to_string(t.target);
    return out + "\n";
}

std::string serialize_arena(const GameArena& arena)
{
    std::string out = "arena " + std::to_string(arena.num_states) + " states, initial " +
                      std::to_string(arena.initial) + "\n";
    out += "fluents";
    for (const auto& f : arena.fluent_names)
        out += " " + f;
    out += "\n";
    auto membership = [&](const std::vector<StateSet>& sets, char tag, StateId s) {
        std::string r;
        for (std::size_t i = 0; i < sets.size(); ++i) {
            if (sets[i][s])
                r += std::string(" ") + tag + std::to_string(i);
        }
        return r;
    };
    for (StateId s = 0; s < arena.num_states; ++s) {
        out += "state " + std::to_string(s);
        if (s < arena.plant_state.size()) {
            out += " plant " + std::to_string(arena.plant_state[s]) + " monitors";
            for (auto m : arena.monitor_status[s])
                out += std::string(" ") + status_name(m);
            out += " valuation ";
            for (std::size_t i = 0; i < arena.valuation[s].size(); ++i)
                out += arena.valuation[s][i] ? '1' : '0';
        }
        if (arena.error[s])
            out += " error";
        out += membership(arena.assumptions, 'A', s) + membership(arena.goals, 'G', s) + "\n";
        for (const auto& m : arena.out(s))
            out += "  -" + arena.alphabet[m.label].name + "-> " + std::to_string(m.target) + "\n";
    }
    return out;
}

SynthesisResult synthesize(const spec::SpecDocument& doc, const BuildOptions& options, bool verify)
{
    SynthesisResult r;
    auto t0 = std::chrono::steady_clock::now();
    ControlProblem problem = make_problem(doc);
    r.arena = build_game(problem, options);
    r.build_ms = elapsed_ms(t0);

    t0 = std::chrono::steady_clock::now();
    r.strategy = solve_gr1(r.arena);
    r.solve_ms = elapsed_ms(t0);
    r.realizable = r.strategy.has_value();
    if (!r.realizable)
        return r;

    t0 = std::chrono::steady_clock::now();
    r.controller = extract_controller(r.arena, *r.strategy);
    r.extract_ms = elapsed_ms(t0);

    if (verify) {
        t0 = std::chrono::steady_clock::now();
        r.report = verify_controller(problem, *r.controller);
        r.verify_ms = elapsed_ms(t0);
    }
    return r;
}

} // namespace iterplan::synth

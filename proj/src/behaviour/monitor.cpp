#include "iterplan/monitor.hpp"

#include "iterplan/error.hpp"

#include <algorithm>
#include <map>

namespace iterplan {

SafetyMonitor::SafetyMonitor(const Formula& pattern, std::span<const std::string> fluent_names)
{
    auto p = match_safety(pattern);
    if (!p)
        throw ValidationError("not a supported safety pattern: " + to_string(pattern));
    pattern_ = std::move(*p);
    trigger_ = BoolProgram(pattern_.trigger, fluent_names);
    response_ = BoolProgram(pattern_.response, fluent_names);
    if (pattern_.release)
        release_ = BoolProgram(*pattern_.release, fluent_names);
}

MonitorStatus SafetyMonitor::step(MonitorStatus status, const Valuation& v) const
{
    if (status == MonitorStatus::error)
        return status;
    if (!pattern_.release)
        return trigger_(v) && !response_(v) ? MonitorStatus::error : MonitorStatus::idle;
    if (status != MonitorStatus::watching && !trigger_(v))
        return MonitorStatus::idle;
    if (release_(v))
        return MonitorStatus::idle;
    return response_(v) ? MonitorStatus::error : MonitorStatus::watching;
}

std::vector<MonitorStatus> SafetyMonitor::run(std::span<const Valuation> positions) const
{
    std::vector<MonitorStatus> out;
    out.reserve(positions.size());
    MonitorStatus s = MonitorStatus::idle;
    for (const auto& v : positions) {
        s = step(s, v);
        out.push_back(s);
    }
    return out;
}

MonitorAutomaton safety_monitor(const Formula& pattern, const std::vector<Fluent>& fluents,
                                const std::vector<ActionLabel>& alphabet)
{
    std::vector<std::string> names;
    for (const auto& f : fluents)
        names.push_back(f.name);
    SafetyMonitor monitor(pattern, names);

    // Sorted alphabet so label ids match the Lts built below.
    std::vector<ActionLabel> sorted = alphabet;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
    FluentTable table(fluents, sorted);

    using Key = std::pair<MonitorStatus, Valuation>;
    std::map<Key, StateId> index;
    std::vector<Key> states;
    std::vector<NamedTransition> transitions;
    constexpr StateId error_id = 0;
    states.push_back({MonitorStatus::error, Valuation{}});

    auto intern = [&](MonitorStatus s, const Valuation& v) -> StateId {
        if (s == MonitorStatus::error)
            return error_id;
        auto [it, inserted] = index.emplace(Key{s, v}, static_cast<StateId>(states.size()));
        if (inserted)
            states.push_back({s, v});
        return it->second;
    };

    Valuation v0 = table.initial();
    StateId init = intern(monitor.start(v0), v0);
    for (std::size_t cur = 0; cur < states.size(); ++cur) {
        for (LabelId l = 0; l < sorted.size(); ++l) {
            if (cur == error_id) {
                transitions.push_back({error_id, sorted[l].name, error_id});
                continue;
            }
            Valuation v = states[cur].second;
            table.apply(v, l);
            StateId t = intern(monitor.step(states[cur].first, v), v);
            transitions.push_back({static_cast<StateId>(cur), sorted[l].name, t});
        }
    }
    return {Lts("MONITOR", states.size(), init, sorted, transitions), error_id};
}

} // namespace iterplan

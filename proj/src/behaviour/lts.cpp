#include "iterplan/lts.hpp"

#include "iterplan/error.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <unordered_map>

namespace iterplan {

namespace {

bool is_alnum(char c) noexcept
{
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

struct TupleHash {
    std::size_t operator()(const std::vector<StateId>& v) const noexcept
    {
        std::size_t h = 1469598103934665603ULL;
        for (auto s : v) {
            h ^= s;
            h *= 1099511628211ULL;
        }
        return h;
    }
};

} // namespace

bool is_valid_label_name(std::string_view name) noexcept
{
    if (!name.empty() && name.back() == '?')
        name.remove_suffix(1);
    if (name.empty() || !(name[0] >= 'a' && name[0] <= 'z'))
        return false;
    bool after_dot = false;
    for (char c : name) {
        if (c == '.') {
            if (after_dot)
                return false;
            after_dot = true;
            continue;
        }
        if (!is_alnum(c))
            return false;
        after_dot = false;
    }
    return !after_dot;
}

Lts::Lts(std::string name, std::size_t num_states, StateId initial, std::vector<ActionLabel> alphabet,
         const std::vector<NamedTransition>& transitions)
    : name_(std::move(name)), num_states_(num_states), initial_(initial), alphabet_(std::move(alphabet))
{
    if (num_states_ == 0)
        throw ValidationError("LTS '" + name_ + "' must have at least one state");
    if (initial_ >= num_states_)
        throw ValidationError("LTS '" + name_ + "': initial state out of range");

    std::sort(alphabet_.begin(), alphabet_.end(),
              [](const ActionLabel& a, const ActionLabel& b) { return a.name < b.name; });
    for (std::size_t i = 0; i < alphabet_.size(); ++i) {
        if (!is_valid_label_name(alphabet_[i].name))
            throw ValidationError("LTS '" + name_ + "': invalid label name '" + alphabet_[i].name + "'");
        if (i > 0 && alphabet_[i].name == alphabet_[i - 1].name)
            throw ValidationError("LTS '" + name_ + "': duplicate label '" + alphabet_[i].name + "'");
    }

    transitions_.reserve(transitions.size());
    for (const auto& t : transitions) {
        auto id = label_id(t.label);
        if (!id)
            throw ValidationError("LTS '" + name_ + "': label '" + t.label + "' not in alphabet");
        if (t.source >= num_states_ || t.target >= num_states_)
            throw ValidationError("LTS '" + name_ + "': transition state out of range");
        transitions_.push_back({t.source, *id, t.target});
    }
    std::sort(transitions_.begin(), transitions_.end());
    transitions_.erase(std::unique(transitions_.begin(), transitions_.end()), transitions_.end());
    for (std::size_t i = 1; i < transitions_.size(); ++i) {
        const auto& a = transitions_[i - 1];
        const auto& b = transitions_[i];
        if (a.source == b.source && a.label == b.label)
            throw ValidationError("LTS '" + name_ + "' is nondeterministic on '" + alphabet_[a.label].name +
                                  "' from state " + std::to_string(a.source));
    }

    offsets_.assign(num_states_ + 1, 0);
    for (const auto& t : transitions_)
        ++offsets_[t.source + 1];
    for (std::size_t s = 0; s < num_states_; ++s)
        offsets_[s + 1] += offsets_[s];
}

std::optional<LabelId> Lts::label_id(std::string_view name) const
{
    auto it = std::lower_bound(alphabet_.begin(), alphabet_.end(), name,
                               [](const ActionLabel& a, std::string_view n) { return a.name < n; });
    if (it == alphabet_.end() || it->name != name)
        return std::nullopt;
    return static_cast<LabelId>(it - alphabet_.begin());
}

std::span<const Transition> Lts::out(StateId state) const
{
    return {transitions_.data() + offsets_[state], transitions_.data() + offsets_[state + 1]};
}

std::optional<StateId> Lts::successor(StateId state, LabelId label) const
{
    for (const auto& t : out(state)) {
        if (t.label == label)
            return t.target;
        if (t.label > label)
            break;
    }
    return std::nullopt;
}

std::optional<StateId> Lts::successor(StateId state, std::string_view label) const
{
    auto id = label_id(label);
    if (!id)
        return std::nullopt;
    return successor(state, *id);
}

Lts Lts::pruned() const
{
    std::vector<StateId> renumber(num_states_, UINT32_MAX);
    std::vector<StateId> order;
    std::deque<StateId> queue{initial_};
    renumber[initial_] = 0;
    order.push_back(initial_);
    while (!queue.empty()) {
        auto s = queue.front();
        queue.pop_front();
        for (const auto& t : out(s)) {
            if (renumber[t.target] == UINT32_MAX) {
                renumber[t.target] = static_cast<StateId>(order.size());
                order.push_back(t.target);
                queue.push_back(t.target);
            }
        }
    }
    std::vector<NamedTransition> kept;
    for (const auto& t : transitions_) {
        if (renumber[t.source] != UINT32_MAX)
            kept.push_back({renumber[t.source], alphabet_[t.label].name, renumber[t.target]});
    }
    return Lts(name_, order.size(), 0, alphabet_, kept);
}

Lts Lts::renamed(std::string name) const
{
    Lts copy = *this;
    copy.name_ = std::move(name);
    return copy;
}

Lts compose(std::span<const Lts> parts, std::string name)
{
    if (parts.empty())
        throw ValidationError("compose: empty sequence of parts");

    std::map<std::string, Controllability> merged;
    for (const auto& part : parts) {
        for (const auto& a : part.alphabet()) {
            auto [it, inserted] = merged.emplace(a.name, a.controllability);
            if (!inserted && it->second != a.controllability)
                throw ValidationError("compose: controllability conflict on label '" + a.name + "'");
        }
    }
    std::vector<ActionLabel> alphabet;
    alphabet.reserve(merged.size());
    for (const auto& [n, c] : merged)
        alphabet.push_back({n, c});

    // local_label[p][g] = label id of global label g inside part p, or -1
    std::vector<std::vector<std::int64_t>> local_label(parts.size());
    for (std::size_t p = 0; p < parts.size(); ++p) {
        local_label[p].resize(alphabet.size(), -1);
        for (std::size_t g = 0; g < alphabet.size(); ++g) {
            if (auto id = parts[p].label_id(alphabet[g].name))
                local_label[p][g] = *id;
        }
    }

    std::unordered_map<std::vector<StateId>, StateId, TupleHash> index;
    std::vector<std::vector<StateId>> tuples;
    std::vector<NamedTransition> transitions;

    std::vector<StateId> init;
    for (const auto& part : parts)
        init.push_back(part.initial());
    index.emplace(init, 0);
    tuples.push_back(init);

    for (std::size_t cur = 0; cur < tuples.size(); ++cur) {
        for (std::size_t g = 0; g < alphabet.size(); ++g) {
            std::vector<StateId> next = tuples[cur];
            bool enabled = true;
            for (std::size_t p = 0; p < parts.size() && enabled; ++p) {
                if (local_label[p][g] < 0)
                    continue;
                auto succ = parts[p].successor(next[p], static_cast<LabelId>(local_label[p][g]));
                if (!succ)
                    enabled = false;
                else
                    next[p] = *succ;
            }
            if (!enabled)
                continue;
            auto [it, inserted] = index.emplace(next, static_cast<StateId>(tuples.size()));
            if (inserted)
                tuples.push_back(std::move(next));
            transitions.push_back({static_cast<StateId>(cur), alphabet[g].name, it->second});
        }
    }

    if (name.empty()) {
        for (std::size_t p = 0; p < parts.size(); ++p)
            name += (p ? "||" : "") + parts[p].name();
    }
    return Lts(std::move(name), tuples.size(), 0, std::move(alphabet), transitions);
}

bool accepts(const Lts& lts, std::span<const std::string> trace)
{
    StateId s = lts.initial();
    for (const auto& label : trace) {
        auto next = lts.successor(s, label);
        if (!next)
            return false;
        s = *next;
    }
    return true;
}

std::string to_dot(const Lts& lts)
{
    std::ostringstream out;
    out << "digraph \"" << lts.name() << "\" {\n  rankdir=LR;\n  node [shape=circle];\n";
    out << "  __init [shape=point];\n  __init -> " << lts.initial() << ";\n";
    for (const auto& t : lts.transitions()) {
        const auto& l = lts.label(t.label);
        out << "  " << t.source << " -> " << t.target << " [label=\"" << l.name << "\"";
        if (l.controlled())
            out << ", style=dashed";
        out << "];\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace iterplan

#include "iterplan/fluent.hpp"

#include "iterplan/error.hpp"

#include <algorithm>

namespace iterplan {

namespace {

void normalize(std::vector<std::string>& v)
{
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

bool contains(const std::vector<std::string>& sorted, std::string_view s)
{
    return std::binary_search(sorted.begin(), sorted.end(), s, std::less<>{});
}

} // namespace

Fluent Fluent::make(std::string name, std::vector<std::string> initiating, std::vector<std::string> terminating,
                    bool initial)
{
    normalize(initiating);
    normalize(terminating);
    if (initiating.empty() && terminating.empty())
        throw ValidationError("fluent '" + name + "' has no initiating or terminating actions");
    for (const auto& a : initiating) {
        if (contains(terminating, a))
            throw ValidationError("fluent '" + name + "': action '" + a + "' both initiates and terminates");
    }
    return Fluent{std::move(name), std::move(initiating), std::move(terminating), initial, false};
}

Fluent Fluent::for_action(std::string label)
{
    Fluent f;
    f.name = label;
    f.initiating = {std::move(label)};
    f.terminates_on_other = true;
    return f;
}

bool Fluent::initiated_by(std::string_view action) const { return contains(initiating, action); }

bool Fluent::terminated_by(std::string_view action) const
{
    if (terminates_on_other)
        return !initiated_by(action);
    return contains(terminating, action);
}

bool fluent_step(const Fluent& fluent, bool current, std::string_view action)
{
    if (fluent.initiated_by(action))
        return true;
    if (fluent.terminated_by(action))
        return false;
    return current;
}

Valuation initial_valuation(std::span<const Fluent> fluents)
{
    Valuation v;
    v.values.reserve(fluents.size());
    for (const auto& f : fluents)
        v.values.push_back(f.initial);
    return v;
}

std::vector<Valuation> evaluate_trace(std::span<const std::string> trace, std::span<const Fluent> fluents)
{
    std::vector<Valuation> out;
    out.reserve(trace.size() + 1);
    out.push_back(initial_valuation(fluents));
    for (const auto& action : trace) {
        Valuation next = out.back();
        for (std::size_t i = 0; i < fluents.size(); ++i)
            next.values[i] = fluent_step(fluents[i], next.values[i], action);
        out.push_back(std::move(next));
    }
    return out;
}

FluentTable::FluentTable(std::vector<Fluent> fluents, const std::vector<ActionLabel>& alphabet)
    : fluents_(std::move(fluents)), effects_(alphabet.size())
{
    for (std::size_t l = 0; l < alphabet.size(); ++l) {
        for (std::size_t f = 0; f < fluents_.size(); ++f) {
            if (fluents_[f].initiated_by(alphabet[l].name))
                effects_[l].push_back({static_cast<std::uint32_t>(f), true});
            else if (fluents_[f].terminated_by(alphabet[l].name))
                effects_[l].push_back({static_cast<std::uint32_t>(f), false});
        }
    }
}

std::optional<std::size_t> FluentTable::index(std::string_view name) const
{
    for (std::size_t i = 0; i < fluents_.size(); ++i) {
        if (fluents_[i].name == name)
            return i;
    }
    return std::nullopt;
}

std::vector<std::string> FluentTable::names() const
{
    std::vector<std::string> out;
    for (const auto& f : fluents_)
        out.push_back(f.name);
    return out;
}

void FluentTable::apply(Valuation& v, LabelId label) const
{
    for (const auto& e : effects_[label])
        v.values[e.fluent] = e.value;
}

} // namespace iterplan

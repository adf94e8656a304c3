#pragma once

#include "iterplan/lts.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace iterplan {

/// Event-defined boolean state variable.
///
/// An action-label fluent (true exactly right after its action) is
/// represented with `terminates_on_other`; its name is the label itself.
struct Fluent {
    std::string name;
    std::vector<std::string> initiating;
    std::vector<std::string> terminating;
    bool initial = false;
    bool terminates_on_other = false;

    /// Sorts and de-duplicates both sets, then validates disjointness and non-emptiness.
    static Fluent make(std::string name, std::vector<std::string> initiating, std::vector<std::string> terminating,
                       bool initial = false);
    static Fluent for_action(std::string label);

    [[nodiscard]] bool initiated_by(std::string_view action) const;
    [[nodiscard]] bool terminated_by(std::string_view action) const;

    friend bool operator==(const Fluent&, const Fluent&) = default;
};

[[nodiscard]] bool fluent_step(const Fluent& fluent, bool current, std::string_view action);

/// Values of an ordered fluent list at one trace position.
struct Valuation {
    std::vector<bool> values;

    [[nodiscard]] bool operator[](std::size_t i) const { return values[i]; }
    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }

    friend bool operator==(const Valuation&, const Valuation&) = default;
    friend auto operator<=>(const Valuation& a, const Valuation& b) { return a.values <=> b.values; }
};

[[nodiscard]] Valuation initial_valuation(std::span<const Fluent> fluents);

/// Element k is the valuation after the first k actions; the result has trace.size()+1 entries.
[[nodiscard]] std::vector<Valuation> evaluate_trace(std::span<const std::string> trace, std::span<const Fluent> fluents);

/// Fluent effects precomputed against an alphabet, for stepping valuations by label id.
class FluentTable {
public:
    FluentTable() = default;
    FluentTable(std::vector<Fluent> fluents, const std::vector<ActionLabel>& alphabet);

    [[nodiscard]] const std::vector<Fluent>& fluents() const noexcept { return fluents_; }
    [[nodiscard]] std::optional<std::size_t> index(std::string_view name) const;
    [[nodiscard]] std::vector<std::string> names() const;

    [[nodiscard]] Valuation initial() const { return initial_valuation(fluents_); }
    void apply(Valuation& v, LabelId label) const;

private:
    struct Effect {
        std::uint32_t fluent;
        bool value;
    };
    std::vector<Fluent> fluents_;
    std::vector<std::vector<Effect>> effects_;
};

} // namespace iterplan

#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace iterplan {

enum class Controllability : std::uint8_t { controlled, uncontrolled };

struct ActionLabel {
    std::string name;
    Controllability controllability = Controllability::controlled;

    [[nodiscard]] bool controlled() const noexcept { return controllability == Controllability::controlled; }

    auto operator<=>(const ActionLabel&) const = default;
};

/// `[a-z][A-Za-z0-9]*(\.[A-Za-z0-9]+)*` with an optional trailing `?`.
/// Upper case is allowed after the first character so names like `yes.next.inP` work;
/// a lower-case first letter still separates labels from fluent names.
[[nodiscard]] bool is_valid_label_name(std::string_view name) noexcept;

using StateId = std::uint32_t;
using LabelId = std::uint32_t;

struct Transition {
    StateId source = 0;
    LabelId label = 0;
    StateId target = 0;

    auto operator<=>(const Transition&) const = default;
};

/// Transition given by label name, used when constructing an Lts.
struct NamedTransition {
    StateId source = 0;
    std::string label;
    StateId target = 0;
};

/// Deterministic finite labelled transition system.
///
/// The alphabet is kept sorted by name and transitions are sorted by
/// (source, label), so two systems built from the same data compare equal
/// and serialize identically.
class Lts {
public:
    Lts() = default;

    /// Throws ValidationError on unknown labels, out-of-range states,
    /// duplicate alphabet entries, invalid label names or nondeterminism.
    Lts(std::string name, std::size_t num_states, StateId initial, std::vector<ActionLabel> alphabet,
        const std::vector<NamedTransition>& transitions);

    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] std::size_t num_states() const noexcept { return num_states_; }
    [[nodiscard]] StateId initial() const noexcept { return initial_; }
    [[nodiscard]] const std::vector<ActionLabel>& alphabet() const noexcept { return alphabet_; }
    [[nodiscard]] const std::vector<Transition>& transitions() const noexcept { return transitions_; }

    [[nodiscard]] std::optional<LabelId> label_id(std::string_view name) const;
    [[nodiscard]] const ActionLabel& label(LabelId id) const { return alphabet_[id]; }
    [[nodiscard]] bool has_label(std::string_view name) const { return label_id(name).has_value(); }

    /// Outgoing transitions of `state`, sorted by label.
    [[nodiscard]] std::span<const Transition> out(StateId state) const;
    [[nodiscard]] std::optional<StateId> successor(StateId state, LabelId label) const;
    [[nodiscard]] std::optional<StateId> successor(StateId state, std::string_view label) const;

    /// Restriction to the states reachable from the initial state, renumbered
    /// in breadth-first order (labels explored alphabetically).
    [[nodiscard]] Lts pruned() const;

    /// Copy with a different name.
    [[nodiscard]] Lts renamed(std::string name) const;

    friend bool operator==(const Lts&, const Lts&) = default;

private:
    std::string name_;
    std::size_t num_states_ = 1;
    StateId initial_ = 0;
    std::vector<ActionLabel> alphabet_;
    std::vector<Transition> transitions_;
    std::vector<std::uint32_t> offsets_{0, 0};
};

/// Parallel composition: shared labels synchronise, the rest interleave.
/// The result is restricted to reachable states and numbered canonically.
[[nodiscard]] Lts compose(std::span<const Lts> parts, std::string name = "");

/// Whether `trace` (label names) can be executed from the initial state.
[[nodiscard]] bool accepts(const Lts& lts, std::span<const std::string> trace);

/// Graphviz rendering; controlled edges are dashed.
[[nodiscard]] std::string to_dot(const Lts& lts);

} // namespace iterplan

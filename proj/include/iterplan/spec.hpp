#pragma once

#include "iterplan/error.hpp"
#include "iterplan/fltl.hpp"
#include "iterplan/lts.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace iterplan::spec {

/// A named process: either a template invocation or an explicit transition list.
struct ProcessDef {
    std::string name;
    std::optional<std::string> template_name;
    std::vector<std::string> template_args;
    std::size_t num_states = 1;
    StateId initial = 0;
    /// Explicit processes only: sorted alphabet (transition labels plus any listed extras).
    std::vector<std::string> alphabet;
    std::vector<NamedTransition> transitions;

    friend bool operator==(const ProcessDef& a, const ProcessDef& b);
};

struct Define {
    std::string name;
    Formula body;
    friend bool operator==(const Define&, const Define&) = default;
};

enum class GoalKind : std::uint8_t { liveness, safety };

struct Goal {
    GoalKind kind = GoalKind::liveness;
    Formula formula;
    friend bool operator==(const Goal&, const Goal&) = default;
};

struct SpecDocument {
    std::vector<std::string> controlled;   // sorted, unique
    std::vector<std::string> uncontrolled; // sorted, unique
    std::vector<ProcessDef> processes;
    std::vector<Fluent> fluents;
    std::vector<Define> defines;
    std::vector<Formula> assumptions; // each □◇φ
    std::vector<Goal> goals;
    std::vector<std::string> plant;

    [[nodiscard]] std::optional<Controllability> controllability(std::string_view label) const;
    [[nodiscard]] const ProcessDef* process(std::string_view name) const;

    friend bool operator==(const SpecDocument&, const SpecDocument&) = default;
};

/// Parses and validates. Throws SpecError with a 1-based source location.
[[nodiscard]] SpecDocument parse(std::string_view text);

/// Canonical text; parse(print(d)) == d for every valid document.
[[nodiscard]] std::string print(const SpecDocument& doc);

/// The process as an Lts, with controllability taken from the document's declarations.
[[nodiscard]] Lts process_lts(const SpecDocument& doc, const ProcessDef& def);

/// Composition of the plant processes (throws ValidationError if the plant is empty).
[[nodiscard]] Lts plant_lts(const SpecDocument& doc);

/// Every define expanded; the result mentions only fluents and labels.
[[nodiscard]] Formula expand(const SpecDocument& doc, const Formula& f);

/// Declared fluents followed by action-label fluents for labels used as atoms
/// in assumptions, goals or defines (in first-use order).
[[nodiscard]] std::vector<Fluent> effective_fluents(const SpecDocument& doc);

/// Bundled task names: fire_patrol, find_nemo, search_and_map, ordered_patrol, cover.
[[nodiscard]] const std::vector<std::string>& builtin_names();

/// Text of a bundled specification. `arity` is used by ordered_patrol only.
[[nodiscard]] std::string builtin_text(const std::string& name, int arity = 3, int max_arity = 5);

/// Parsed bundled specifications; ordered_patrol is instantiated with 3 locations.
[[nodiscard]] std::map<std::string, SpecDocument> builtin_specs();

[[nodiscard]] SpecDocument builtin_spec(const std::string& name, int arity = 3, int max_arity = 5);

} // namespace iterplan::spec

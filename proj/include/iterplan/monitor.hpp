#pragma once

#include "iterplan/fltl.hpp"
#include "iterplan/lts.hpp"

namespace iterplan {

enum class MonitorStatus : std::uint8_t { idle, watching, error };

/// Activation tracker for one safety pattern. It reads fluent values from the
/// valuation at each position instead of re-deriving them from actions.
class SafetyMonitor {
public:
    /// Throws ValidationError if `pattern` is not one of the two safety shapes.
    SafetyMonitor(const Formula& pattern, std::span<const std::string> fluent_names);

    [[nodiscard]] const SafetyPattern& pattern() const noexcept { return pattern_; }

    /// Status after observing position 0.
    [[nodiscard]] MonitorStatus start(const Valuation& initial) const { return step(MonitorStatus::idle, initial); }

    /// Status after observing the next position's valuation. Error is absorbing.
    [[nodiscard]] MonitorStatus step(MonitorStatus status, const Valuation& v) const;

    /// Status after each position of a valuation sequence (as from evaluate_trace).
    [[nodiscard]] std::vector<MonitorStatus> run(std::span<const Valuation> positions) const;

private:
    SafetyPattern pattern_;
    BoolProgram trigger_;
    BoolProgram response_;
    BoolProgram release_;
};

struct MonitorAutomaton {
    Lts lts;
    StateId error = 0;
};

/// Deterministic monitor LTS over `alphabet`. States pair a status with the
/// fluent valuation that drives it; all error states collapse into one sink.
[[nodiscard]] MonitorAutomaton safety_monitor(const Formula& pattern, const std::vector<Fluent>& fluents,
                                              const std::vector<ActionLabel>& alphabet);

} // namespace iterplan

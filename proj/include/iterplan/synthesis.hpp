#pragma once

#include "iterplan/fltl.hpp"
#include "iterplan/lts.hpp"
#include "iterplan/monitor.hpp"
#include "iterplan/spec.hpp"

#include <boost/dynamic_bitset.hpp>

#include <optional>
#include <string>
#include <vector>

namespace iterplan::synth {

using StateSet = boost::dynamic_bitset<>;

/// Plant, fluents and formulas with every define expanded.
struct ControlProblem {
    Lts plant;
    std::vector<Fluent> fluents;
    std::vector<Formula> assumptions; // boolean bodies of □◇φ
    std::vector<Formula> goals;       // boolean bodies of □◇φ
    std::vector<Formula> safety;      // safety patterns
};

[[nodiscard]] ControlProblem make_problem(const spec::SpecDocument& doc);

struct Move {
    LabelId label = 0;
    StateId target = 0;
    friend bool operator==(const Move&, const Move&) = default;
};

/// Explicit two-player arena. Moves are stored per state, sorted by label.
struct GameArena {
    std::vector<ActionLabel> alphabet; // sorted by name; Move::label indexes it
    std::size_t num_states = 0;
    StateId initial = 0;
    std::vector<std::uint32_t> offsets; // CSR, size num_states + 1
    std::vector<Move> moves;
    StateSet error;
    std::vector<StateSet> assumptions; // never empty
    std::vector<StateSet> goals;       // never empty

    // Annotations; empty for hand-built arenas.
    std::vector<std::string> fluent_names;
    std::vector<StateId> plant_state;
    std::vector<Valuation> valuation;
    std::vector<std::vector<MonitorStatus>> monitor_status;

    [[nodiscard]] std::span<const Move> out(StateId s) const
    {
        return {moves.data() + offsets[s], moves.data() + offsets[s + 1]};
    }
    [[nodiscard]] bool controllable(LabelId l) const { return alphabet[l].controlled(); }

    /// Builds an arena from per-state move lists. Throws ValidationError on
    /// bad indices or nondeterminism. Empty goal/assumption lists become {all states}.
    static GameArena make(std::vector<ActionLabel> alphabet, std::size_t num_states, StateId initial,
                          std::vector<std::vector<Move>> moves, StateSet error, std::vector<StateSet> assumptions,
                          std::vector<StateSet> goals);
};

struct BuildOptions {
    std::size_t state_cap = 1'000'000;
};

/// Thrown when the product exceeds BuildOptions::state_cap.
class StateCapExceeded : public Error {
public:
    using Error::Error;
};

[[nodiscard]] GameArena build_game(const ControlProblem& problem, const BuildOptions& options = {});
[[nodiscard]] GameArena build_game(const spec::SpecDocument& doc, const BuildOptions& options = {});

/// Controller decision at one (state, memory) pair.
struct Decision {
    static constexpr std::int32_t wait = -1; // allow only uncontrollables
    static constexpr std::int32_t none = -2; // pair outside the winning region
};

struct Strategy {
    std::size_t memory_size = 1;
    StateSet winning;
    /// decision[m][s] is a controllable LabelId, Decision::wait or Decision::none.
    std::vector<std::vector<std::int32_t>> decision;

    /// Memory in effect at `s` when arriving with memory `m`: advances past every goal `s` satisfies.
    [[nodiscard]] std::size_t update(const GameArena& arena, StateId s, std::size_t m) const;
};

/// Solves the GR(1) game. Returns std::nullopt when the initial state is not winning.
[[nodiscard]] std::optional<Strategy> solve_gr1(const GameArena& arena);

/// Winning region only.
[[nodiscard]] StateSet winning_region(const GameArena& arena);

/// Controller over reachable (state, memory) pairs, renumbered breadth-first.
[[nodiscard]] Lts extract_controller(const GameArena& arena, const Strategy& strategy);

enum class Check : std::uint8_t { deadlock, blocking, safety, liveness };

struct Violation {
    Check check = Check::deadlock;
    std::string message;
    std::vector<std::string> path; // from the initial state
    std::vector<std::string> loop; // liveness only: repeated suffix
};

struct VerificationReport {
    std::size_t product_states = 0;
    std::vector<Violation> violations;

    [[nodiscard]] bool passed(Check c) const;
    [[nodiscard]] bool ok() const { return violations.empty(); }
};

/// Model-checks plant ‖ controller against the deadlock, non-blocking,
/// safety and GR(1) liveness conditions.
[[nodiscard]] VerificationReport verify_controller(const Lts& plant, const Lts& controller,
                                                   const std::vector<Fluent>& fluents,
                                                   const std::vector<Formula>& assumptions,
                                                   const std::vector<Formula>& goals,
                                                   const std::vector<Formula>& safety);

[[nodiscard]] VerificationReport verify_controller(const ControlProblem& problem, const Lts& controller);

/// The same four checks on arena ‖ controller, with arena error states in
/// place of monitor errors and the arena's own A/G sets.
[[nodiscard]] VerificationReport verify_on_arena(const GameArena& arena, const Lts& controller);

/// Exhaustive search over deterministic strategies with goal-counter memory.
/// Throws ValidationError beyond 8 states, 2 goals or 2 assumptions.
[[nodiscard]] bool brute_force_realizability(const GameArena& arena);

/// A reachable cycle violating the GR(1) condition, as graph node ids, if any.
/// `succ` lists successors per node; node 0 is initial. Used by both the
/// verifier and the brute-force oracle.
struct Lasso {
    std::size_t goal = 0;
    std::vector<std::size_t> stem; // initial ... first loop node
    std::vector<std::size_t> loop; // first loop node ... back (exclusive)
};
[[nodiscard]] std::optional<Lasso> find_fair_cycle(const std::vector<std::vector<std::size_t>>& succ,
                                                   const std::vector<StateSet>& assumptions,
                                                   const std::vector<StateSet>& goals);

/// Controller text: controlled/uncontrolled headers plus `process CONTROLLER = ...`.
[[nodiscard]] std::string serialize_controller(const Lts& controller);

/// Deterministic text dump of the arena (states, annotations, moves, sets).
[[nodiscard]] std::string serialize_arena(const GameArena& arena);

struct SynthesisResult {
    bool realizable = false;
    GameArena arena;
    std::optional<Strategy> strategy;
    std::optional<Lts> controller;
    std::optional<VerificationReport> report;
    double build_ms = 0, solve_ms = 0, extract_ms = 0, verify_ms = 0;
};

/// build_game, solve_gr1, extract_controller and verify_controller in sequence.
[[nodiscard]] SynthesisResult synthesize(const spec::SpecDocument& doc, const BuildOptions& options = {},
                                         bool verify = true);

} // namespace iterplan::synth

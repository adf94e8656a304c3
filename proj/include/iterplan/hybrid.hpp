#pragma once

#include "iterplan/error.hpp"
#include "iterplan/lts.hpp"
#include "iterplan/motion.hpp"
#include "iterplan/workspace.hpp"

#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace iterplan {

enum class SorterKind : std::uint8_t { distance, last, random };

struct SorterStrategy {
    SorterKind kind = SorterKind::distance;
    std::uint64_t seed = 0; // random only
};

[[nodiscard]] std::string_view sorter_name(SorterKind kind);
/// Throws ValidationError for anything but "distance", "last" or "random".
[[nodiscard]] SorterKind parse_sorter(std::string_view name);

/// What the sorters need besides the reference pose.
struct SortContext {
    GridMap grid;
    VehicleLimits limits;
    double arrival_axis = 0;
    /// Cells the last sorter puts at the end.
    std::function<bool(CellId)> interesting;
};

/// Trajectory length from `reference` to the cell center; the distance sorter's key.
[[nodiscard]] double travel_key(const SortContext& ctx, const VehicleState& reference, CellId cell);

/// Full ordering of `cells`. `round` selects the shuffle for the random sorter.
[[nodiscard]] std::vector<CellId> sort_order(const SorterStrategy& strategy, const VehicleState& reference,
                                             std::span<const CellId> cells, const SortContext& ctx,
                                             std::uint64_t round = 0);

/// The ⟨done, next, remaining⟩ triple over a fixed universe.
///
/// Only the head of `remaining` is materialized. For the distance sorter the
/// keys of the remaining cells are computed once per reference pose and kept
/// in a heap, so consecutive removals from the same pose cost O(log n).
class LocationIterator {
public:
    /// Throws ValidationError for an empty universe or duplicate cells.
    LocationIterator(std::vector<CellId> universe, SorterStrategy strategy, SortContext ctx,
                     const VehicleState& start);

    [[nodiscard]] bool has_next() const noexcept { return next_.has_value(); }
    [[nodiscard]] std::optional<CellId> next() const noexcept { return next_; }

    /// Moves next to done and selects the new head from `reference`.
    /// Throws ValidationError when next is null.
    void remove_next(const VehicleState& reference);

    /// Reinitializes over the whole universe, sorted from `reference`.
    void reset(const VehicleState& reference);

    [[nodiscard]] const std::vector<CellId>& universe() const noexcept { return universe_; }
    [[nodiscard]] std::size_t done_count() const noexcept { return done_count_; }
    [[nodiscard]] std::size_t remaining_count() const;
    [[nodiscard]] bool is_done(CellId cell) const;
    [[nodiscard]] std::size_t resets() const noexcept { return resets_; }

    /// Remaining cells in the order they would be offered from `reference`
    /// (for the distance sorter) or in the fixed order otherwise. O(n log n).
    [[nodiscard]] std::vector<CellId> remaining(const VehicleState& reference) const;

    /// Throws Error if done, next and remaining do not partition the universe.
    void check_invariant() const;

private:
    void start_round(const VehicleState& reference);
    void select(const VehicleState& reference);
    void rebuild_heap(const VehicleState& reference);
    [[nodiscard]] std::size_t slot(CellId cell) const;

    std::vector<CellId> universe_;
    SorterStrategy strategy_;
    SortContext ctx_;
    std::vector<CellId> slot_of_cell_; // grid-sized, universe position + 1, or 0
    std::vector<char> done_;           // by universe position
    std::size_t done_count_ = 0;
    std::optional<CellId> next_;
    std::size_t resets_ = 0;

    // last / random: fixed order and cursor of the next element.
    std::vector<CellId> order_;
    std::size_t cursor_ = 0;

    // distance: min-heap of (key, cell) valid for heap_ref_.
    std::vector<std::pair<double, CellId>> heap_;
    std::optional<VehicleState> heap_ref_;
};

enum class SensorScope : std::uint8_t { next_location, current_location };

struct SensorBinding {
    std::string query;
    std::string yes;
    std::string no;
    SensorScope scope = SensorScope::next_location;
    std::function<bool(CellId, double)> predicate;
};

/// Thrown when the environment produces an event the controller does not enable.
class InterpreterAbort : public Error {
public:
    using Error::Error;
};

/// Services the interpreter needs from the simulation.
class HybridHost {
public:
    virtual ~HybridHost() = default;
    [[nodiscard]] virtual double now() const = 0;
    /// Predicted arrival pose while flying, current pose otherwise.
    [[nodiscard]] virtual VehicleState reference_pose() const = 0;
    virtual void start_motion(CellId target) = 0;
    /// Actuator labels (take.photo, land, takeoff, ...), with the current cell if any.
    virtual void actuate(std::string_view label, std::optional<CellId> current) = 0;
    virtual void sensor_answer(std::string_view label, CellId cell) = 0;
};

/// Walks the controller LTS and routes its actions to the iterator, sensors,
/// motion and actuators. Uncontrollable answers go to a FIFO queue.
class Interpreter {
public:
    /// Throws ValidationError if a sensor label is not in the controller alphabet.
    Interpreter(const Lts& controller, LocationIterator& iterator, std::vector<SensorBinding> sensors);

    /// Consumes one queued uncontrollable, or fires the enabled controllable
    /// (lowest label if several). Returns the label, or nullopt when idle.
    /// Throws InterpreterAbort on a queued event the controller does not enable.
    std::optional<LabelId> step(HybridHost& host);

    /// Queues an externally produced uncontrollable (e.g. `arrived`).
    void inject(std::string_view label);

    [[nodiscard]] const Lts& controller() const noexcept { return *controller_; }
    [[nodiscard]] StateId state() const noexcept { return state_; }
    [[nodiscard]] std::optional<CellId> current() const noexcept { return current_; }
    [[nodiscard]] std::optional<CellId> target() const noexcept { return target_; }
    [[nodiscard]] const std::string& name(LabelId l) const { return controller_->label(l).name; }

private:
    enum class Role : std::uint8_t { none, has_next, remove_next, reset, go_next, arrived, sensor, actuator };

    [[nodiscard]] LabelId id(std::string_view label) const;

    const Lts* controller_;
    LocationIterator* iterator_;
    std::vector<SensorBinding> sensors_;
    std::vector<Role> role_;
    std::vector<std::size_t> sensor_of_;
    std::vector<LabelId> yes_, no_;
    LabelId y_next_ = 0, n_next_ = 0;
    StateId state_ = 0;
    std::deque<LabelId> pending_;
    std::optional<CellId> current_;
    std::optional<CellId> target_;
};

} // namespace iterplan

#pragma once

#include "iterplan/hybrid.hpp"
#include "iterplan/spec.hpp"
#include "iterplan/synthesis.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace iterplan::missions {

enum class Task : std::uint8_t { fire_patrol, find_nemo, search_and_map, ordered_patrol, cover };

[[nodiscard]] std::string_view task_name(Task task);
/// Throws ValidationError for unknown names.
[[nodiscard]] Task parse_task(std::string_view name);

/// Per-second switching rates of the two-state Nemo process in each region-of-interest cell.
struct NemoModel {
    double appear_rate = 0.001;
    double disappear_rate = 0.0005;
};

enum class StopKind : std::uint8_t { loops, time, complete };

/// loops: `value` complete loops measured (value + 1 loop boundaries);
/// time: simulated seconds; complete: cover finished or search_and_map landed.
struct StopCondition {
    StopKind kind = StopKind::loops;
    double value = 2;
};

enum class LogDetail : std::uint8_t {
    full,
    /// Drops iterator bookkeeping (has.next?, y.next, remove.next) and
    /// next-scope queries with negative answers.
    compact,
};

struct MissionConfig {
    Task task = Task::fire_patrol;
    GridMap grid;
    std::vector<CellId> universe; // empty: every grid cell

    std::vector<CellId> patrol;    // fire_patrol P
    std::vector<CellId> fire;      // fire_patrol
    std::vector<CellId> roi;       // find_nemo
    std::vector<CellId> cover;     // cover C
    std::vector<CellId> waypoints; // ordered_patrol, in visit order
    std::optional<CellId> target;  // search_and_map
    double visibility_radius = 60;
    NemoModel nemo;

    SorterStrategy sorter;
    VehicleLimits limits;
    std::optional<double> arrival_axis; // default: grid axis
    CellId home = 0;

    std::uint64_t seed = 1;
    StopCondition stop;
    double dt = 0.1;
    /// Simulated seconds charged per discrete controller event.
    double event_latency = 1.4e-5;
    LogDetail log = LogDetail::compact;
    int pose_every = 10; // dt steps between pose records; 0 disables
    double max_time = 1e7;
};

/// Throws ValidationError if regions leave the grid, required cells are
/// outside the universe, or the stop condition does not fit the task.
void validate(const MissionConfig& config);

enum class RecordKind : std::uint8_t { event, pose, photo, answer, stop };

struct LogRecord {
    double t = 0;
    RecordKind kind = RecordKind::event;
    std::string label;
    std::optional<CellId> cell;
    VehicleState pose; // pose records only
};

struct MissionLog {
    std::vector<LogRecord> records;

    /// One `t=<s> kind=<k> ...` line per record, fixed field order and precision.
    [[nodiscard]] std::string to_text(const GridMap& grid) const;
};

struct Metrics {
    double sim_duration = 0;   // mean loop (patrol tasks) or takeoff-to-complete
    double ideal_duration = 0; // NaN when the ideal is not computable
    double overhead_ratio = 0;
    std::vector<double> loop_durations;
    std::size_t covered = 0; // distinct cells arrived at
    double wall_clock = 0;
};

/// Throws ValidationError if the log does not contain what the task's metric needs.
[[nodiscard]] Metrics compute_metrics(const MissionLog& log, const MissionConfig& config);

struct MissionResult {
    MissionLog log;
    Metrics metrics;
    std::size_t events = 0;
    double end_time = 0;
    std::string stop_reason;
};

/// Thrown when the stop condition is not met before config.max_time.
class StopTimeout : public Error {
public:
    using Error::Error;
};

/// Builtin specification of the task. Only the task and, for ordered_patrol,
/// the number of waypoints are read: the workspace never reaches synthesis.
[[nodiscard]] spec::SpecDocument spec_for(Task task, int arity = 3);
[[nodiscard]] spec::SpecDocument spec_for(const MissionConfig& config);

/// Synthesized and verified controller for the task, cached per (task, arity).
/// Throws Error if the builtin specification is unrealizable or fails verification.
[[nodiscard]] std::shared_ptr<const synth::SynthesisResult> controller_for(Task task, int arity = 3);

[[nodiscard]] MissionResult run_mission(const MissionConfig& config);

/// Seeded environment: fire cells, regions, Nemo processes, target and sightings.
class Environment {
public:
    explicit Environment(const MissionConfig& config);

    [[nodiscard]] bool fire_at(CellId cell) const;
    [[nodiscard]] static bool in_region(CellId cell, const std::vector<CellId>& sorted_region);
    [[nodiscard]] bool nemo_present(CellId cell, double time);
    [[nodiscard]] bool target_visible(CellId cell) const;
    [[nodiscard]] bool adjacent_to_sighting(CellId cell) const;
    void record_sighting(CellId cell);
    [[nodiscard]] const std::vector<CellId>& sightings() const noexcept { return sightings_; }

private:
    struct NemoTimeline {
        std::uint64_t rng_state;
        bool initial;
        std::vector<double> switches; // increasing switch times
    };

    const MissionConfig* config_;
    std::vector<CellId> fire_;
    std::map<CellId, NemoTimeline> nemo_;
    std::vector<CellId> sightings_;
    std::vector<char> sighted_;
};

/// Grid of side ceil(sqrt(n)) whose first n cells (row-major) form the universe.
struct Universe {
    GridMap grid;
    std::vector<CellId> cells;
};
[[nodiscard]] Universe square_universe(std::size_t n, double pitch = 50);

/// ordered_patrol(3) with waypoints at cells (2,2), (2,12), (10,7) of a square universe.
[[nodiscard]] MissionConfig ordered_patrol_scenario(std::size_t universe, SorterKind sorter, std::uint64_t seed,
                                                    int loops = 2);

/// Cover of the `cells` cells nearest a seeded center inside the first 23x31
/// cells, starting from cell 0. A universe of 713 is exactly that 23x31 grid;
/// other sizes use square_universe.
[[nodiscard]] MissionConfig cover_scenario(std::size_t universe, std::size_t cells, SorterKind sorter,
                                           std::uint64_t seed);

} // namespace iterplan::missions

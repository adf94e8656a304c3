#include "iterplan/missions.hpp"
#include "iterplan/spec.hpp"

#include <algorithm>
#include <chrono>
#include <mutex>

namespace iterplan::missions {

namespace {

// How an event is tagged with a cell in the log.
enum class CellTag : std::uint8_t { none, next, current };

class Simulation final : public HybridHost {
public:
    Simulation(const MissionConfig& config, const Lts& controller)
        : cfg_(config), env_(config), visited_(config.grid.size(), 0)
    {
        sorted(patrol_, cfg_.patrol);
        sorted(roi_, cfg_.roi);
        sorted(cover_, cfg_.cover);

        SortContext ctx;
        ctx.grid = cfg_.grid;
        ctx.limits = cfg_.limits;
        ctx.arrival_axis = axis();
        const std::vector<CellId>* interesting = nullptr;
        std::vector<CellId> waypoints = cfg_.waypoints;
        std::sort(waypoints.begin(), waypoints.end());
        switch (cfg_.task) {
        case Task::fire_patrol:
            interesting = &patrol_;
            break;
        case Task::find_nemo:
            interesting = &roi_;
            break;
        case Task::cover:
            interesting = &cover_;
            break;
        case Task::ordered_patrol:
            waypoints_sorted_ = std::move(waypoints);
            interesting = &waypoints_sorted_;
            break;
        case Task::search_and_map:
            break;
        }
        if (interesting)
            ctx.interesting = [interesting](CellId c) { return Environment::in_region(c, *interesting); };

        std::vector<CellId> universe = cfg_.universe;
        if (universe.empty()) {
            universe.resize(cfg_.grid.size());
            for (CellId c = 0; c < universe.size(); ++c)
                universe[c] = c;
        }
        home_ = {cell_center(cfg_.grid, cfg_.home), axis(), cfg_.limits.cruise_speed};
        pose_ = home_;
        anchor_ = home_;
        iterator_ = std::make_unique<LocationIterator>(std::move(universe), cfg_.sorter, std::move(ctx), pose_);
        interp_ = std::make_unique<Interpreter>(controller, *iterator_, sensors());

        const auto& alphabet = controller.alphabet();
        tag_.assign(alphabet.size(), CellTag::none);
        compact_skip_.assign(alphabet.size(), 0);
        for (LabelId l = 0; l < alphabet.size(); ++l) {
            const std::string& n = alphabet[l].name;
            if (n == "has.next?" || n == "y.next" || n == "remove.next")
                compact_skip_[l] = 1;
            if (n == "remove.next" || n == "go.next")
                tag_[l] = CellTag::next;
            else if (n == "arrived" || (alphabet[l].controlled() && n != "takeoff" && n != "land" &&
                                        n != "has.next?" && n != "reset"))
                tag_[l] = CellTag::current;
        }
        for (const auto& s : next_sensors_) {
            for (const auto* name : {&s.query, &s.yes, &s.no})
                tag_[*controller.label_id(*name)] = CellTag::next;
            compact_skip_[*controller.label_id(s.query)] = 1;
            compact_skip_[*controller.label_id(s.no)] = 1;
        }
        for (const auto& s : current_sensors_)
            for (const auto* name : {&s.yes, &s.no})
                tag_[*controller.label_id(*name)] = CellTag::current;

        const std::string boundary =
            cfg_.task == Task::ordered_patrol ? "photo.loc" + std::to_string(cfg_.waypoints.size()) : "reset";
        boundary_ = *controller.label_id(boundary);
        arrived_ = *controller.label_id("arrived");
        land_ = *controller.label_id("land");
        for (const char* name : {"has.next?", "remove.next", "reset"})
            if (auto id = controller.label_id(name))
                new_target_labels_.push_back(*id);
    }

    MissionResult run()
    {
        MissionResult result;
        const bool compact = cfg_.log == LogDetail::compact;
        const Lts& ctl = interp_->controller();
        std::size_t boundaries = 0, covered_targets = 0;
        while (true) {
            if (time_ > cfg_.max_time)
                throw StopTimeout("stop condition not reached within " + std::to_string(cfg_.max_time) + " s");
            if (cfg_.stop.kind == StopKind::time && time_ >= cfg_.stop.value) {
                stop(result, "time");
                break;
            }
            const std::optional<CellId> pre_next = iterator_->next();
            const auto l = interp_->step(*this);
            if (!l) {
                if (!flying_)
                    throw InterpreterAbort("controller is idle with no motion in progress");
                fly();
                interp_->inject("arrived");
                continue;
            }
            ++result.events;
            if (!compact || !compact_skip_[*l]) {
                std::optional<CellId> cell;
                if (tag_[*l] == CellTag::next)
                    cell = pre_next;
                else if (tag_[*l] == CellTag::current)
                    cell = interp_->current();
                log_.records.push_back({time_, RecordKind::event, ctl.label(*l).name, cell, {}});
            }
            time_ += cfg_.event_latency;
            if (*l == arrived_)
                fresh_target_ = false;
            else if (std::find(new_target_labels_.begin(), new_target_labels_.end(), *l) != new_target_labels_.end())
                fresh_target_ = true;

            if (*l == arrived_) {
                const CellId c = *interp_->current();
                if (!visited_[c]) {
                    visited_[c] = 1;
                    if (cfg_.task == Task::cover && Environment::in_region(c, cover_))
                        ++covered_targets;
                }
                if (cfg_.stop.kind == StopKind::complete && cfg_.task == Task::cover &&
                    covered_targets == cover_.size()) {
                    stop(result, "complete");
                    break;
                }
            }
            else if (*l == land_ && cfg_.stop.kind == StopKind::complete && cfg_.task == Task::search_and_map) {
                stop(result, "complete");
                break;
            }
            if (*l == boundary_ && cfg_.stop.kind == StopKind::loops &&
                static_cast<double>(++boundaries) >= cfg_.stop.value + 1) {
                stop(result, "loops");
                break;
            }
        }
        result.log = std::move(log_);
        result.end_time = time_;
        return result;
    }

    // HybridHost
    double now() const override { return time_; }
    // Between flights the sort reference stays at the last arrival pose even
    // though the vehicle keeps drifting.
    VehicleState reference_pose() const override { return flying_ ? predicted_arrival_state(traj_) : anchor_; }

    void start_motion(CellId target) override
    {
        settle_drift();
        const Point center = cell_center(cfg_.grid, target);
        // Already within the arrival radius of a new target (e.g. drifted just
        // past it): no flight. Repeating go.next on the current location is a
        // revisit and flies a full loiter back to it.
        if (fresh_target_ && distance(pose_.position, center) <= cfg_.limits.arrival_radius)
            traj_ = Trajectory{pose_, pose_, {}};
        else
            traj_ = plan_trajectory(pose_, center, axis(), cfg_.limits);
        target_ = target;
        flying_ = true;
    }

    void actuate(std::string_view label, std::optional<CellId> current) override
    {
        if (label == "takeoff" || label == "land") {
            airborne_ = label == "takeoff";
            pose_ = home_;
            anchor_ = home_;
            drift_start_ = time_;
            return;
        }
        log_.records.push_back({time_, RecordKind::photo, std::string(label), current, {}});
    }

    void sensor_answer(std::string_view label, CellId cell) override
    {
        if (label == "yes.target")
            env_.record_sighting(cell);
        if (cfg_.log == LogDetail::compact && negative_next_answer(label))
            return;
        log_.records.push_back({time_, RecordKind::answer, std::string(label), cell, {}});
    }

private:
    static void sorted(std::vector<CellId>& out, const std::vector<CellId>& in)
    {
        out = in;
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
    }

    double axis() const { return cfg_.arrival_axis.value_or(cfg_.grid.axis_heading); }

    bool negative_next_answer(std::string_view label) const
    {
        return std::any_of(next_sensors_.begin(), next_sensors_.end(), [&](const auto& s) { return s.no == label; });
    }

    std::vector<SensorBinding> sensors()
    {
        auto next = [&](std::string query, std::string yes, std::string no, std::function<bool(CellId)> p) {
            next_sensors_.push_back({std::move(query), std::move(yes), std::move(no), SensorScope::next_location,
                                     [p = std::move(p)](CellId c, double) { return p(c); }});
        };
        auto current = [&](std::string query, std::string yes, std::string no,
                           std::function<bool(CellId, double)> p) {
            current_sensors_.push_back(
                {std::move(query), std::move(yes), std::move(no), SensorScope::current_location, std::move(p)});
        };
        switch (cfg_.task) {
        case Task::fire_patrol:
            next("is.next.inP?", "yes.next.inP", "no.next.inP",
                 [this](CellId c) { return Environment::in_region(c, patrol_); });
            current("fire?", "yes.fire", "no.fire", [this](CellId c, double) { return env_.fire_at(c); });
            break;
        case Task::find_nemo:
            next("is.next.roi?", "yes.next.roi", "no.next.roi",
                 [this](CellId c) { return Environment::in_region(c, roi_); });
            current("nemo?", "yes.nemo", "no.nemo", [this](CellId c, double t) { return env_.nemo_present(c, t); });
            break;
        case Task::search_and_map:
            next("adjacent.next?", "y.adjacent.next", "n.adjacent.next",
                 [this](CellId c) { return !visited_[c] && env_.adjacent_to_sighting(c); });
            current("target?", "yes.target", "no.target", [this](CellId c, double) { return env_.target_visible(c); });
            break;
        case Task::ordered_patrol:
            for (std::size_t k = 0; k < cfg_.waypoints.size(); ++k) {
                const std::string n = std::to_string(k + 1);
                const CellId w = cfg_.waypoints[k];
                next("is.next.loc" + n + "?", "yes.next.loc" + n, "no.next.loc" + n,
                     [w](CellId c) { return c == w; });
            }
            break;
        case Task::cover:
            next("is.next.inC?", "yes.next.inC", "no.next.inC",
                 [this](CellId c) { return Environment::in_region(c, cover_); });
            break;
        }
        std::vector<SensorBinding> all = next_sensors_;
        all.insert(all.end(), current_sensors_.begin(), current_sensors_.end());
        return all;
    }

    void fly()
    {
        int steps = 0;
        while (!traj_.segments.empty()) {
            // The last step is shortened so arrival time is exact.
            const double dt = std::min(cfg_.dt, trajectory_length(traj_) / pose_.speed);
            auto [pose, rest] = step(pose_, traj_, dt);
            pose_ = pose;
            traj_ = std::move(rest);
            time_ += dt;
            if (cfg_.pose_every > 0 && ++steps % cfg_.pose_every == 0)
                log_.records.push_back({time_, RecordKind::pose, {}, {}, pose_});
        }
        if (distance(pose_.position, cell_center(cfg_.grid, target_)) > cfg_.limits.arrival_radius)
            throw InterpreterAbort("trajectory ended outside the arrival radius of " + name_of(cfg_.grid, target_));
        flying_ = false;
        anchor_ = pose_;
        drift_start_ = time_;
        if (cfg_.pose_every > 0)
            log_.records.push_back({time_, RecordKind::pose, {}, {}, pose_});
    }

    // While airborne and not flying to a target the vehicle holds its heading
    // at cruise speed. Materializes that straight leg up to the current time.
    void settle_drift()
    {
        if (!airborne_ || time_ <= drift_start_)
            return;
        const VehicleState from = pose_;
        auto at = [&](double t) {
            VehicleState p = from;
            p.position = from.position + (cfg_.limits.cruise_speed * (t - drift_start_)) * direction(from.heading);
            return p;
        };
        if (cfg_.pose_every > 0) {
            // Events were logged during the drift; merge the samples in by time.
            auto& recs = log_.records;
            const auto first = std::upper_bound(recs.begin(), recs.end(), drift_start_,
                                                [](double t, const LogRecord& r) { return t < r.t; }) -
                               recs.begin();
            const auto mid = static_cast<std::ptrdiff_t>(recs.size());
            const double every = cfg_.dt * cfg_.pose_every;
            for (double t = drift_start_ + every; t < time_; t += every)
                recs.push_back({t, RecordKind::pose, {}, {}, at(t)});
            std::inplace_merge(recs.begin() + first, recs.begin() + mid, recs.end(),
                               [](const LogRecord& a, const LogRecord& b) { return a.t < b.t; });
        }
        pose_ = at(time_);
        drift_start_ = time_;
    }

    void stop(MissionResult& result, std::string reason)
    {
        result.stop_reason = reason;
        log_.records.push_back({time_, RecordKind::stop, std::move(reason), {}, {}});
    }

    const MissionConfig& cfg_;
    Environment env_;
    std::vector<CellId> patrol_, roi_, cover_, waypoints_sorted_;
    std::vector<char> visited_;
    std::vector<SensorBinding> next_sensors_, current_sensors_;
    std::unique_ptr<LocationIterator> iterator_;
    std::unique_ptr<Interpreter> interp_;
    std::vector<CellTag> tag_;
    std::vector<char> compact_skip_;
    LabelId boundary_ = 0, arrived_ = 0, land_ = 0;
    std::vector<LabelId> new_target_labels_;
    bool fresh_target_ = true;

    VehicleState home_, pose_, anchor_;
    double drift_start_ = 0;
    bool airborne_ = false;
    Trajectory traj_;
    CellId target_ = 0;
    bool flying_ = false;
    double time_ = 0;
    MissionLog log_;
};

} // namespace

spec::SpecDocument spec_for(Task task, int arity)
{
    if (task != Task::ordered_patrol)
        return spec::builtin_spec(std::string(task_name(task)));
    return spec::builtin_spec(std::string(task_name(task)), std::max(arity, 1), std::max(arity, 5));
}

spec::SpecDocument spec_for(const MissionConfig& config)
{
    return spec_for(config.task, static_cast<int>(config.waypoints.size()));
}

std::shared_ptr<const synth::SynthesisResult> controller_for(Task task, int arity)
{
    static std::mutex mutex;
    static std::map<std::pair<Task, int>, std::shared_ptr<const synth::SynthesisResult>> cache;
    if (task != Task::ordered_patrol)
        arity = 0;
    std::lock_guard lock(mutex);
    auto& slot = cache[{task, arity}];
    if (!slot) {
        auto result = std::make_shared<synth::SynthesisResult>(synth::synthesize(spec_for(task, arity)));
        if (!result->realizable)
            throw Error(std::string(task_name(task)) + " is unrealizable");
        if (!result->report || !result->report->ok())
            throw Error(std::string(task_name(task)) + " controller failed verification");
        slot = std::move(result);
    }
    return slot;
}

MissionResult run_mission(const MissionConfig& config)
{
    const auto t0 = std::chrono::steady_clock::now();
    validate(config);
    auto synthesis = controller_for(config.task, static_cast<int>(config.waypoints.size()));
    Simulation sim(config, *synthesis->controller);
    MissionResult result = sim.run();
    result.metrics = compute_metrics(result.log, config);
    result.metrics.wall_clock = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

} // namespace iterplan::missions

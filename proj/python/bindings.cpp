#include "iterplan/cli.hpp"
#include "iterplan/spec.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

namespace py = pybind11;
using namespace iterplan;

namespace {

py::dict mission_dict(const missions::MissionConfig& c, const missions::MissionResult& r)
{
    py::dict d;
    const auto row = cli::row_of(c, r);
    d["task"] = row.task;
    d["sorter"] = row.sorter;
    d["universe"] = row.universe;
    d["targets"] = row.targets;
    d["seed"] = row.seed;
    d["sim_s"] = r.metrics.sim_duration;
    d["ideal_s"] = r.metrics.ideal_duration;
    d["overhead"] = r.metrics.overhead_ratio;
    d["loop_durations"] = r.metrics.loop_durations;
    d["covered"] = r.metrics.covered;
    d["events"] = r.events;
    d["end_time"] = r.end_time;
    d["stop_reason"] = r.stop_reason;
    d["csv_row"] = cli::csv_line(row);
    d["log"] = r.log.to_text(c.grid);
    return d;
}

missions::MissionResult run_released(const missions::MissionConfig& c)
{
    py::gil_scoped_release release;
    return missions::run_mission(c);
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "iterplan native core";

    py::register_exception<Error>(m, "IterplanError", PyExc_RuntimeError);

    m.def("builtin_names", [] {
        std::vector<std::string> names;
        for (const auto& [name, doc] : spec::builtin_specs())
            names.push_back(name);
        return names;
    });

    m.def("canonical_spec", [](const std::string& text) { return spec::print(spec::parse(text)); }, py::arg("text"),
          "Parse a specification and print it in canonical form.");

    m.def(
        "synthesize",
        [](const std::optional<std::string>& text, const std::optional<std::string>& builtin, int arity) {
            if (text.has_value() == builtin.has_value())
                throw py::value_error("give exactly one of text or builtin");
            const auto doc = text ? spec::parse(*text) : spec::builtin_spec(*builtin, arity, std::max(arity, 5));
            synth::SynthesisResult r;
            {
                py::gil_scoped_release release;
                r = synth::synthesize(doc);
            }
            py::dict d;
            d["realizable"] = r.realizable;
            d["verified"] = r.report.has_value() && r.report->ok();
            d["arena_states"] = r.arena.num_states;
            d["arena"] = synth::serialize_arena(r.arena);
            if (r.controller) {
                d["controller"] = synth::serialize_controller(*r.controller);
                d["controller_states"] = r.controller->num_states();
                d["controller_transitions"] = r.controller->transitions().size();
            }
            d["ms"] = py::dict(py::arg("build") = r.build_ms, py::arg("solve") = r.solve_ms,
                               py::arg("extract") = r.extract_ms, py::arg("verify") = r.verify_ms);
            return d;
        },
        py::kw_only(), py::arg("text") = py::none(), py::arg("builtin") = py::none(), py::arg("arity") = 3);

    m.def(
        "run_config",
        [](const std::string& text, std::optional<std::uint64_t> seed, const std::string& base_dir) {
            auto c = cli::mission_from_config(cli::ConfigTable::parse(text), base_dir);
            if (seed) {
                c.seed = *seed;
                c.sorter.seed = *seed;
            }
            return mission_dict(c, run_released(c));
        },
        py::arg("text"), py::arg("seed") = py::none(), py::arg("base_dir") = "",
        "Run a mission from config text (same schema as the command-line tool).");

    m.def(
        "ordered_patrol_scenario",
        [](std::size_t universe, const std::string& sorter, std::uint64_t seed, int loops) {
            const auto c = missions::ordered_patrol_scenario(universe, parse_sorter(sorter), seed, loops);
            return mission_dict(c, run_released(c));
        },
        py::arg("universe"), py::arg("sorter") = "last", py::arg("seed") = 1, py::arg("loops") = 2);

    m.def(
        "cover_scenario",
        [](std::size_t universe, std::size_t cells, const std::string& sorter, std::uint64_t seed) {
            const auto c = missions::cover_scenario(universe, cells, parse_sorter(sorter), seed);
            return mission_dict(c, run_released(c));
        },
        py::arg("universe"), py::arg("cells"), py::arg("sorter") = "distance", py::arg("seed") = 1);

    m.def(
        "sort_order",
        [](std::uint32_t rows, std::uint32_t cols, double pitch, std::tuple<double, double, double> pose,
           const std::vector<CellId>& cells, const std::string& sorter, std::uint64_t seed, std::uint64_t round,
           const std::vector<CellId>& interesting) {
            SortContext ctx;
            ctx.grid = build_grid({0, 0}, pitch, rows, cols);
            std::vector<CellId> keep = interesting;
            std::sort(keep.begin(), keep.end());
            ctx.interesting = [keep](CellId c) { return std::binary_search(keep.begin(), keep.end(), c); };
            VehicleState ref{{std::get<0>(pose), std::get<1>(pose)}, std::get<2>(pose), ctx.limits.cruise_speed};
            return sort_order({parse_sorter(sorter), seed}, ref, cells, ctx, round);
        },
        py::arg("rows"), py::arg("cols"), py::arg("pitch"), py::arg("pose"), py::arg("cells"),
        py::arg("sorter") = "distance", py::arg("seed") = 1, py::arg("round") = 0,
        py::arg("interesting") = std::vector<CellId>{});

    m.def(
        "plan_trajectory",
        [](std::tuple<double, double, double> start, std::tuple<double, double> target, double arrival_axis,
           double min_turn_radius, double cruise_speed) {
            VehicleLimits limits{min_turn_radius, cruise_speed, 15};
            VehicleState s{{std::get<0>(start), std::get<1>(start)}, std::get<2>(start), cruise_speed};
            const auto t = plan_trajectory(s, {std::get<0>(target), std::get<1>(target)}, arrival_axis, limits);
            py::list segments;
            for (const auto& seg : t.segments) {
                if (seg.kind == Segment::Kind::straight)
                    segments.append(py::make_tuple("straight", seg.length));
                else
                    segments.append(py::make_tuple("arc", seg.radius, seg.angle));
            }
            py::dict d;
            const double length = trajectory_length(t);
            d["length"] = length;
            d["duration"] = length / cruise_speed;
            d["end"] = py::make_tuple(t.end.position.x, t.end.position.y, t.end.heading);
            d["segments"] = segments;
            return d;
        },
        py::arg("start"), py::arg("target"), py::arg("arrival_axis") = 0.0, py::arg("min_turn_radius") = 60.0,
        py::arg("cruise_speed") = 17.0);

    m.def(
        "name_of",
        [](std::uint32_t rows, std::uint32_t cols, CellId id) { return name_of(build_grid({0, 0}, 50, rows, cols), id); },
        py::arg("rows"), py::arg("cols"), py::arg("id"));
    m.def(
        "id_of",
        [](std::uint32_t rows, std::uint32_t cols, const std::string& name) {
            return id_of(build_grid({0, 0}, 50, rows, cols), name);
        },
        py::arg("rows"), py::arg("cols"), py::arg("name"));

    m.def("csv_header", [] { return cli::csv_header(); });
    m.def(
        "plot_csv",
        [](const std::string& csv, const std::string& kind) {
            return cli::svg_chart(cli::parse_csv(csv), cli::parse_plot_kind(kind));
        },
        py::arg("csv"), py::arg("kind") = "duration", "SVG chart of a runs CSV.");
}

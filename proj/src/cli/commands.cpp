#include "iterplan/cli.hpp"
#include "iterplan/spec.hpp"

#include <json.hpp>

#include <chrono>
#include <ostream>

namespace iterplan::cli {

namespace {

class Unrealizable : public Error {
public:
    using Error::Error;
};

template <class F>
int guarded(std::ostream& err, F&& body)
{
    try {
        return body();
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const SpecError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const Unrealizable& e) {
        err << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace

int cmd_synth(const SynthOptions& o, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        spec::SpecDocument doc;
        std::string name;
        if (!o.spec.empty()) {
            doc = spec::parse(read_file(o.spec));
            name = o.spec.stem().string();
        } else {
            try {
                doc = spec::builtin_spec(o.builtin, o.arity, std::max(o.arity, 5));
            } catch (const ValidationError& e) {
                throw ConfigError(0, e.what());
            }
            name = o.builtin;
        }

        const auto t0 = std::chrono::steady_clock::now();
        const auto result = synth::synthesize(doc);
        const double total_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

        nlohmann::ordered_json report;
        report["spec"] = name;
        report["realizable"] = result.realizable;
        report["arena_states"] = result.arena.num_states;
        report["arena_moves"] = result.arena.moves.size();
        if (result.controller) {
            report["controller_states"] = result.controller->num_states();
            report["controller_transitions"] = result.controller->transitions().size();
        }
        if (result.report) {
            report["verified"] = result.report->ok();
            auto& v = report["violations"] = nlohmann::ordered_json::array();
            for (const auto& violation : result.report->violations)
                v.push_back(violation.message);
        }
        report["ms"] = {{"build", result.build_ms},     {"solve", result.solve_ms},
                        {"extract", result.extract_ms}, {"verify", result.verify_ms},
                        {"total", total_ms}};

        write_file(o.out / (name + ".report.json"), report.dump(2) + "\n");
        if (o.write_arena)
            write_file(o.out / (name + ".arena"), synth::serialize_arena(result.arena));
        if (!result.realizable)
            throw Unrealizable(name + ": unrealizable");
        if (!result.report || !result.report->ok())
            throw Unrealizable(name + ": controller failed verification");
        const auto path = o.out / (name + ".ctrl");
        write_file(path, synth::serialize_controller(*result.controller));
        out << name << ": " << result.controller->num_states() << " states, "
            << result.controller->transitions().size() << " transitions, " << static_cast<long long>(total_ms + 0.5)
            << " ms -> " << path.string() << "\n";
        return 0;
    });
}

int cmd_run(const RunOptions& o, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        auto config = mission_from_config(ConfigTable::parse(read_file(o.config)), o.config.parent_path());
        if (o.seed) {
            config.seed = *o.seed;
            config.sorter.seed = *o.seed;
        }
        const auto result = missions::run_mission(config);
        const RunRow row = row_of(config, result);
        write_file(o.out / "mission.log", result.log.to_text(config.grid));
        write_file(o.out / "metrics.csv", csv_header() + "\n" + csv_line(row) + "\n");
        write_file(o.out / "path.svg", svg_flight_path(config, result));
        out << csv_header() << "\n" << csv_line(row) << "\n";
        return 0;
    });
}

int cmd_sweep(const SweepOptions& o, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        auto plan = sweep_from_config(ConfigTable::parse(read_file(o.plan)));
        if (o.seed)
            plan.base_seed = *o.seed;
        const auto cells = run_sweep(plan, o.jobs);

        std::string csv = csv_header() + "\n", status;
        std::vector<RunRow> rows;
        std::size_t failed = 0;
        for (const auto& cell : cells) {
            csv += csv_line(cell.row) + "\n";
            rows.push_back(cell.row);
            status += std::to_string(cell.row.run_id) + " " + cell.row.sorter + " universe=" +
                      std::to_string(cell.row.universe) + " targets=" + std::to_string(cell.row.targets) +
                      " seed=" + std::to_string(cell.row.seed) + " " + (cell.ok ? "ok" : "FAILED: " + cell.error) +
                      "\n";
            failed += cell.ok ? 0 : 1;
        }
        write_file(o.out / "runs.csv", csv);
        write_file(o.out / "summary.csv", summary_csv(rows));
        write_file(o.out / "status.txt", status);
        write_file(o.out / "duration.svg", svg_chart(rows, PlotKind::duration));
        write_file(o.out / "overhead.svg", svg_chart(rows, PlotKind::overhead));
        out << summary_csv(rows);
        if (failed) {
            err << failed << " of " << cells.size() << " runs failed; see " << (o.out / "status.txt").string()
                << "\n";
            return 1;
        }
        return 0;
    });
}

int cmd_plot(const PlotOptions& o, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const PlotKind kind = parse_plot_kind(o.kind);
        const auto rows = parse_csv(read_file(o.csv));
        auto path = o.out;
        if (path.empty()) {
            path = o.csv;
            path.replace_extension("." + o.kind + ".svg");
        }
        write_file(path, svg_chart(rows, kind));
        out << path.string() << "\n";
        return 0;
    });
}

} // namespace iterplan::cli

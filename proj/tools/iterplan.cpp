#include "iterplan/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <thread>

#ifdef ITERPLAN_HAVE_SPDLOG
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>
#endif

namespace {

// ITERPLAN_LOG: trace, debug, info, warn, error or off (default warn). Logs go to stderr.
void configure_logging()
{
#ifdef ITERPLAN_HAVE_SPDLOG
    auto logger = spdlog::stderr_color_mt("iterplan");
    spdlog::set_default_logger(logger);
    const char* level = std::getenv("ITERPLAN_LOG");
    spdlog::set_level(level ? spdlog::level::from_str(level) : spdlog::level::warn);
#endif
}

template <class... Args>
void log_info(const char* format, Args&&... args)
{
#ifdef ITERPLAN_HAVE_SPDLOG
    spdlog::info(fmt::runtime(format), std::forward<Args>(args)...);
#else
    (void)format;
    ((void)args, ...);
#endif
}

} // namespace

int main(int argc, char** argv)
{
    using namespace iterplan::cli;
    configure_logging();

    CLI::App app{"Iterator-based task planning: synthesize controllers, run missions, sweep and plot."};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    std::string synth_out, run_out, sweep_out, plot_out;

    SynthOptions synth;
    std::string spec_path;
    auto* synth_cmd = app.add_subcommand("synth", "Synthesize and verify a controller");
    auto* spec_opt = synth_cmd->add_option("spec", spec_path, "Specification file")->check(CLI::ExistingFile);
    synth_cmd->add_option("--builtin", synth.builtin, "Builtin specification name instead of a file")
        ->excludes(spec_opt);
    synth_cmd->add_option("--arity", synth.arity, "Arity for ordered_patrol")->check(CLI::Range(1, 5));
    synth_cmd->add_flag("--arena", synth.write_arena, "Also write the serialized arena");
    synth_cmd->add_option("--out", synth_out, "Output directory")->default_val(".");

    RunOptions run;
    std::string run_config;
    auto* run_cmd = app.add_subcommand("run", "Run one mission from a config file");
    run_cmd->add_option("config", run_config, "Mission config (.toml)")->required();
    auto* run_seed = run_cmd->add_option("--seed", seed, "Override the config seed");
    run_cmd->add_option("--out", run_out, "Output directory")->default_val(".");

    SweepOptions sweep;
    std::string plan_path;
    auto* sweep_cmd = app.add_subcommand("sweep", "Run a grid of missions and aggregate");
    sweep_cmd->add_option("plan", plan_path, "Sweep plan (.toml)")->required();
    auto* sweep_seed = sweep_cmd->add_option("--seed", seed, "Override the base seed");
    sweep_cmd->add_option("--jobs,-j", jobs, "Concurrent missions")->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--out", sweep_out, "Output directory")->default_val(".");

    PlotOptions plot;
    std::string csv_path;
    auto* plot_cmd = app.add_subcommand("plot", "Render a chart from a runs CSV");
    plot_cmd->add_option("csv", csv_path, "Runs CSV")->required();
    plot_cmd->add_option("--kind", plot.kind, "duration, overhead or scatter")->default_val("duration");
    plot_cmd->add_option("--out", plot_out, "Output SVG path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }

    if (*synth_cmd) {
        if (spec_path.empty() && synth.builtin.empty()) {
            std::cerr << "error: give a spec file or --builtin\n";
            return 3;
        }
        synth.spec = spec_path;
        synth.out = synth_out;
        log_info("synth {}", spec_path.empty() ? synth.builtin : spec_path);
        return cmd_synth(synth, std::cout, std::cerr);
    }
    if (*run_cmd) {
        run.config = run_config;
        run.out = run_out;
        if (*run_seed)
            run.seed = seed;
        log_info("run {}", run_config);
        return cmd_run(run, std::cout, std::cerr);
    }
    if (*sweep_cmd) {
        sweep.plan = plan_path;
        sweep.out = sweep_out;
        sweep.jobs = jobs;
        if (*sweep_seed)
            sweep.seed = seed;
        log_info("sweep {} with {} jobs", plan_path, jobs);
        return cmd_sweep(sweep, std::cout, std::cerr);
    }
    plot.csv = csv_path;
    plot.out = plot_out;
    log_info("plot {} ({})", csv_path, plot.kind);
    return cmd_plot(plot, std::cout, std::cerr);
}

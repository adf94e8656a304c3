#include "iterplan/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>
#include <thread>

namespace iterplan::cli {

namespace {

std::string fmt_double(double v, const char* format)
{
    if (std::isnan(v))
        return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

std::vector<std::string_view> split(std::string_view line, char sep)
{
    std::vector<std::string_view> out;
    for (std::size_t start = 0;;) {
        const auto p = line.find(sep, start);
        out.push_back(line.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start));
        if (p == std::string_view::npos)
            return out;
        start = p + 1;
    }
}

double parse_double(std::string_view s, int line)
{
    const std::string text(s);
    if (text == "nan")
        return std::nan("");
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size())
        throw ConfigError(line, "invalid number '" + text + "'");
    return v;
}

std::uint64_t parse_count(std::string_view s, int line)
{
    std::uint64_t v = 0;
    if (s.empty())
        throw ConfigError(line, "missing integer field");
    for (char c : s) {
        if (c < '0' || c > '9')
            throw ConfigError(line, "invalid integer '" + std::string(s) + "'");
        v = v * 10 + static_cast<std::uint64_t>(c - '0');
    }
    return v;
}

} // namespace

const std::string& csv_header()
{
    static const std::string header = "run_id,task,sorter,universe,targets,seed,sim_s,ideal_s,overhead,wall_s";
    return header;
}

std::string csv_line(const RunRow& r)
{
    std::string out = std::to_string(r.run_id) + "," + r.task + "," + r.sorter + "," + std::to_string(r.universe) +
                      "," + std::to_string(r.targets) + "," + std::to_string(r.seed) + ",";
    out += fmt_double(r.sim_s, "%.6f") + "," + fmt_double(r.ideal_s, "%.6f") + "," +
           fmt_double(r.overhead, "%.6f") + "," + fmt_double(r.wall_s, "%.3f");
    return out;
}

std::vector<RunRow> parse_csv(std::string_view text)
{
    std::vector<RunRow> rows;
    int line_no = 0;
    bool header_seen = false;
    for (std::size_t start = 0; start < text.size();) {
        auto nl = text.find('\n', start);
        if (nl == std::string_view::npos)
            nl = text.size();
        std::string_view line = text.substr(start, nl - start);
        start = nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        if (line.empty())
            continue;
        if (!header_seen) {
            if (line != csv_header())
                throw ConfigError(line_no, "CSV header does not match the run schema");
            header_seen = true;
            continue;
        }
        const auto f = split(line, ',');
        if (f.size() != 10)
            throw ConfigError(line_no, "expected 10 fields, got " + std::to_string(f.size()));
        RunRow r;
        r.run_id = parse_count(f[0], line_no);
        r.task = std::string(f[1]);
        r.sorter = std::string(f[2]);
        r.universe = parse_count(f[3], line_no);
        r.targets = parse_count(f[4], line_no);
        r.seed = parse_count(f[5], line_no);
        r.sim_s = parse_double(f[6], line_no);
        r.ideal_s = parse_double(f[7], line_no);
        r.overhead = parse_double(f[8], line_no);
        r.wall_s = parse_double(f[9], line_no);
        rows.push_back(std::move(r));
    }
    return rows;
}

RunRow row_of(const missions::MissionConfig& c, const missions::MissionResult& result, std::size_t run_id)
{
    using missions::Task;
    RunRow r;
    r.run_id = run_id;
    r.task = std::string(missions::task_name(c.task));
    r.sorter = std::string(sorter_name(c.sorter.kind));
    r.universe = c.universe.empty() ? c.grid.size() : c.universe.size();
    switch (c.task) {
    case Task::fire_patrol: r.targets = c.patrol.size(); break;
    case Task::find_nemo: r.targets = c.roi.size(); break;
    case Task::search_and_map: r.targets = 1; break;
    case Task::ordered_patrol: r.targets = c.waypoints.size(); break;
    case Task::cover: r.targets = c.cover.size(); break;
    }
    r.seed = c.seed;
    r.sim_s = result.metrics.sim_duration;
    r.ideal_s = result.metrics.ideal_duration;
    r.overhead = result.metrics.overhead_ratio;
    r.wall_s = result.metrics.wall_clock;
    return r;
}

std::vector<SweepCell> run_sweep(const SweepPlan& plan, unsigned jobs)
{
    struct Job {
        SorterKind sorter;
        std::size_t universe, targets;
        std::uint64_t seed;
    };
    std::vector<Job> work;
    for (SorterKind s : plan.sorters)
        for (std::size_t u : plan.universes)
            for (std::size_t t : plan.targets)
                for (std::size_t rep = 0; rep < plan.repetitions; ++rep)
                    work.push_back({s, u, t, plan.base_seed + rep});

    std::vector<SweepCell> cells(work.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < work.size(); i = next++) {
            const Job& j = work[i];
            SweepCell& cell = cells[i];
            cell.row.run_id = i;
            cell.row.task = std::string(missions::task_name(plan.task));
            cell.row.sorter = std::string(sorter_name(j.sorter));
            cell.row.universe = j.universe;
            cell.row.targets = j.targets;
            cell.row.seed = j.seed;
            try {
                const auto config = plan.task == missions::Task::cover
                                        ? missions::cover_scenario(j.universe, j.targets, j.sorter, j.seed)
                                        : missions::ordered_patrol_scenario(j.universe, j.sorter, j.seed, plan.loops);
                cell.row = row_of(config, missions::run_mission(config), i);
                cell.ok = true;
            } catch (const std::exception& e) {
                cell.error = e.what();
                cell.row.sim_s = cell.row.ideal_s = cell.row.overhead = std::nan("");
            }
        }
    };

    const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(work.size())));
    std::vector<std::thread> threads;
    for (unsigned k = 1; k < n; ++k)
        threads.emplace_back(worker);
    worker();
    for (auto& t : threads)
        t.join();
    return cells;
}

PlotKind parse_plot_kind(std::string_view name)
{
    if (name == "duration" || name == "line")
        return PlotKind::duration;
    if (name == "overhead")
        return PlotKind::overhead;
    if (name == "scatter")
        return PlotKind::scatter;
    throw ConfigError(0, "unknown plot kind '" + std::string(name) + "' (duration, overhead, scatter)");
}

namespace {

bool x_is_targets(const std::vector<RunRow>& rows)
{
    std::set<std::size_t> universes, targets;
    for (const auto& r : rows) {
        universes.insert(r.universe);
        targets.insert(r.targets);
    }
    return universes.size() <= 1 && targets.size() > 1;
}

} // namespace

std::vector<SeriesPoint> aggregate(const std::vector<RunRow>& rows, bool overhead)
{
    const bool by_targets = x_is_targets(rows);
    std::map<std::pair<std::string, std::size_t>, std::vector<double>> groups;
    for (const auto& r : rows) {
        const double v = overhead ? r.overhead : r.sim_s;
        if (std::isnan(v))
            continue;
        groups[{r.sorter, by_targets ? r.targets : r.universe}].push_back(v);
    }
    std::vector<SeriesPoint> out;
    for (auto& [key, values] : groups) {
        // Sorted so the sums do not depend on run order.
        std::sort(values.begin(), values.end());
        const double n = static_cast<double>(values.size());
        const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
        double ss = 0;
        for (double v : values)
            ss += (v - mean) * (v - mean);
        const double se = values.size() > 1 ? std::sqrt(ss / (n - 1)) / std::sqrt(n) : 0.0;
        out.push_back({key.first, static_cast<double>(key.second), mean, 3 * se, values.size()});
    }
    return out;
}

std::string summary_csv(const std::vector<RunRow>& rows)
{
    const auto sim = aggregate(rows, false);
    const auto over = aggregate(rows, true);
    std::map<std::pair<std::string, double>, const SeriesPoint*> over_at;
    for (const auto& p : over)
        over_at[{p.sorter, p.x}] = &p;

    std::string out = std::string("sorter,") + (x_is_targets(rows) ? "targets" : "universe") +
                      ",n,sim_mean,sim_err3,overhead_mean,overhead_err3\n";
    for (const auto& p : sim) {
        const auto it = over_at.find({p.sorter, p.x});
        const double om = it == over_at.end() ? std::nan("") : it->second->mean;
        const double oe = it == over_at.end() ? std::nan("") : it->second->err3;
        out += p.sorter + "," + fmt_double(p.x, "%.0f") + "," + std::to_string(p.n) + "," +
               fmt_double(p.mean, "%.6f") + "," + fmt_double(p.err3, "%.6f") + "," + fmt_double(om, "%.6f") + "," +
               fmt_double(oe, "%.6f") + "\n";
    }
    return out;
}

} // namespace iterplan::cli

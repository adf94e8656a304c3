#pragma once

#include "iterplan/missions.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace iterplan::cli {

/// Malformed configuration, plan or CSV input. Maps to exit code 3.
class ConfigError : public Error {
public:
    ConfigError(int line, const std::string& message)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line)
    {
    }
    [[nodiscard]] int line() const noexcept { return line_; }

private:
    int line_;
};

/// Unreadable or unwritable file. Maps to exit code 2.
class IoError : public Error {
public:
    using Error::Error;
};

struct ConfigValue {
    enum class Kind : std::uint8_t { string, number, boolean, array };
    Kind kind = Kind::string;
    std::string text;
    double number = 0;
    bool boolean = false;
    std::vector<ConfigValue> items;
    int line = 0;
};

/// TOML subset: `[section]` headers, `key = value` with strings, numbers,
/// booleans and flat arrays, `#` comments. Keys are addressed as
/// "section.key" (or "key" before the first header).
class ConfigTable {
public:
    [[nodiscard]] static ConfigTable parse(std::string_view text);

    [[nodiscard]] bool has(const std::string& key) const { return values_.count(key) > 0; }
    [[nodiscard]] bool is_string(const std::string& key) const;
    /// 0 when the key is absent.
    [[nodiscard]] int line_of(const std::string& key) const;
    [[nodiscard]] std::string get_string(const std::string& key) const;
    [[nodiscard]] std::string get_string(const std::string& key, const std::string& fallback) const;
    [[nodiscard]] double get_number(const std::string& key) const;
    [[nodiscard]] double get_number(const std::string& key, double fallback) const;
    [[nodiscard]] bool get_bool(const std::string& key, bool fallback) const;
    [[nodiscard]] std::vector<std::string> get_strings(const std::string& key) const;
    [[nodiscard]] std::vector<double> get_numbers(const std::string& key) const;

    /// Throws ConfigError naming the first key not in `known`.
    void reject_unknown(const std::vector<std::string>& known) const;

private:
    [[nodiscard]] const ConfigValue& at(const std::string& key) const;
    std::map<std::string, ConfigValue> values_;
};

/// Mission configuration from a table; region files are resolved against `base_dir`.
[[nodiscard]] missions::MissionConfig mission_from_config(const ConfigTable& table,
                                                          const std::filesystem::path& base_dir = {});

struct SweepPlan {
    missions::Task task = missions::Task::ordered_patrol;
    std::vector<SorterKind> sorters;
    std::vector<std::size_t> universes;
    std::vector<std::size_t> targets; // cover sizes; ordered_patrol uses {3}
    std::size_t repetitions = 1;
    std::uint64_t base_seed = 1;
    int loops = 2;
};

[[nodiscard]] SweepPlan sweep_from_config(const ConfigTable& table);

struct RunRow {
    std::size_t run_id = 0;
    std::string task;
    std::string sorter;
    std::size_t universe = 0;
    std::size_t targets = 0;
    std::uint64_t seed = 0;
    double sim_s = 0;
    double ideal_s = 0;
    double overhead = 0;
    double wall_s = 0;
};

[[nodiscard]] const std::string& csv_header();
[[nodiscard]] std::string csv_line(const RunRow& row);
/// Throws ConfigError on a header or column mismatch. An empty text has no rows.
[[nodiscard]] std::vector<RunRow> parse_csv(std::string_view text);

[[nodiscard]] RunRow row_of(const missions::MissionConfig& config, const missions::MissionResult& result,
                            std::size_t run_id = 0);

struct SweepCell {
    RunRow row;
    bool ok = false;
    std::string error;
};

/// Every (sorter, universe, target, repetition) mission, in plan order, using
/// up to `jobs` threads. Results do not depend on `jobs`.
[[nodiscard]] std::vector<SweepCell> run_sweep(const SweepPlan& plan, unsigned jobs);

/// Mean and three standard errors per (sorter, x).
struct SeriesPoint {
    std::string sorter;
    double x = 0;
    double mean = 0;
    double err3 = 0;
    std::size_t n = 0;
};

enum class PlotKind : std::uint8_t { duration, overhead, scatter };
[[nodiscard]] PlotKind parse_plot_kind(std::string_view name);

/// x is the universe unless only the target count varies.
[[nodiscard]] std::vector<SeriesPoint> aggregate(const std::vector<RunRow>& rows, bool overhead);
[[nodiscard]] std::string summary_csv(const std::vector<RunRow>& rows);

[[nodiscard]] std::string svg_chart(const std::vector<RunRow>& rows, PlotKind kind);
[[nodiscard]] std::string svg_flight_path(const missions::MissionConfig& config,
                                          const missions::MissionResult& result);

[[nodiscard]] std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

/// Command bodies; each returns the process exit code and never throws.
struct SynthOptions {
    std::filesystem::path spec; // empty with `builtin` set
    std::string builtin;
    int arity = 3;
    std::filesystem::path out = ".";
    bool write_arena = false;
};
int cmd_synth(const SynthOptions& options, std::ostream& out, std::ostream& err);

struct RunOptions {
    std::filesystem::path config;
    std::optional<std::uint64_t> seed;
    std::filesystem::path out = ".";
};
int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err);

struct SweepOptions {
    std::filesystem::path plan;
    std::optional<std::uint64_t> seed;
    unsigned jobs = 1;
    std::filesystem::path out = ".";
};
int cmd_sweep(const SweepOptions& options, std::ostream& out, std::ostream& err);

struct PlotOptions {
    std::filesystem::path csv;
    std::string kind = "duration";
    std::filesystem::path out;
};
int cmd_plot(const PlotOptions& options, std::ostream& out, std::ostream& err);

} // namespace iterplan::cli

#include "iterplan/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace iterplan::cli {

namespace {

using Kind = ConfigValue::Kind;

bool is_key_char(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

// Cursor over one logical value (possibly spanning lines for arrays).
class ValueParser {
public:
    ValueParser(std::string_view text, int line) : text_(text), line_(line) {}

    ConfigValue parse()
    {
        ConfigValue v = value();
        skip_blank();
        if (pos_ != text_.size())
            fail("unexpected text after value");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& message) const { throw ConfigError(line_, message); }

    void skip_blank()
    {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n')
                    ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                if (c == '\n')
                    ++line_;
                ++pos_;
            } else {
                return;
            }
        }
    }

    ConfigValue value()
    {
        skip_blank();
        if (pos_ >= text_.size())
            fail("missing value");
        ConfigValue v;
        v.line = line_;
        const char c = text_[pos_];
        if (c == '"' || c == '\'') {
            v.kind = Kind::string;
            v.text = string(c);
        } else if (c == '[') {
            v.kind = Kind::array;
            ++pos_;
            for (;;) {
                skip_blank();
                if (pos_ < text_.size() && text_[pos_] == ']') {
                    ++pos_;
                    break;
                }
                ConfigValue item = value();
                if (item.kind == Kind::array)
                    fail("nested arrays are not supported");
                v.items.push_back(std::move(item));
                skip_blank();
                if (pos_ < text_.size() && text_[pos_] == ',') {
                    ++pos_;
                    continue;
                }
                if (pos_ < text_.size() && text_[pos_] == ']') {
                    ++pos_;
                    break;
                }
                fail("expected ',' or ']' in array");
            }
        } else {
            std::size_t end = pos_;
            while (end < text_.size() && !std::isspace(static_cast<unsigned char>(text_[end])) && text_[end] != ',' &&
                   text_[end] != ']' && text_[end] != '#')
                ++end;
            const std::string_view word = text_.substr(pos_, end - pos_);
            pos_ = end;
            if (word == "true" || word == "false") {
                v.kind = Kind::boolean;
                v.boolean = word == "true";
            } else {
                v.kind = Kind::number;
                v.number = number(word);
            }
            v.text = std::string(word);
        }
        return v;
    }

    std::string string(char quote)
    {
        ++pos_;
        std::string out;
        while (pos_ < text_.size() && text_[pos_] != quote) {
            char c = text_[pos_++];
            if (c == '\n')
                fail("unterminated string");
            if (c == '\\' && quote == '"') {
                if (pos_ >= text_.size())
                    fail("unterminated string");
                const char e = text_[pos_++];
                switch (e) {
                case 'n': c = '\n'; break;
                case 't': c = '\t'; break;
                case '"': c = '"'; break;
                case '\\': c = '\\'; break;
                default: fail(std::string("unknown escape '\\") + e + "'");
                }
            }
            out.push_back(c);
        }
        if (pos_ >= text_.size())
            fail("unterminated string");
        ++pos_;
        return out;
    }

    double number(std::string_view word) const
    {
        std::string digits;
        for (char c : word)
            if (c != '_')
                digits.push_back(c);
        if (digits.empty())
            fail("missing value");
        const char* first = digits.data();
        if (*first == '+')
            ++first;
        double out = 0;
        auto [ptr, ec] = std::from_chars(first, digits.data() + digits.size(), out);
        if (ec != std::errc() || ptr != digits.data() + digits.size() || !std::isfinite(out))
            fail("invalid value '" + std::string(word) + "'");
        return out;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_;
};

// Bracket depth outside strings and comments; used to join multi-line arrays.
int bracket_balance(std::string_view s)
{
    int depth = 0;
    char quote = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        if (quote) {
            if (c == '\\' && quote == '"')
                ++i;
            else if (c == quote)
                quote = 0;
        } else if (c == '"' || c == '\'') {
            quote = c;
        } else if (c == '#') {
            while (i < s.size() && s[i] != '\n')
                ++i;
        } else if (c == '[') {
            ++depth;
        } else if (c == ']') {
            --depth;
        }
    }
    return depth;
}

const char* kind_name(Kind k)
{
    switch (k) {
    case Kind::string: return "a string";
    case Kind::number: return "a number";
    case Kind::boolean: return "a boolean";
    case Kind::array: return "an array";
    }
    return "?";
}

} // namespace

ConfigTable ConfigTable::parse(std::string_view text)
{
    ConfigTable table;
    std::string section;
    std::vector<std::string_view> lines;
    for (std::size_t start = 0; start <= text.size();) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos)
            nl = text.size();
        lines.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }

    for (std::size_t i = 0; i < lines.size(); ++i) {
        const int line_no = static_cast<int>(i) + 1;
        std::string_view line = trim(lines[i]);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        if (line.empty() || line.front() == '#')
            continue;

        if (line.front() == '[') {
            const auto close = line.find(']');
            if (close == std::string_view::npos)
                throw ConfigError(line_no, "unterminated section header");
            const auto rest = trim(line.substr(close + 1));
            if (!rest.empty() && rest.front() != '#')
                throw ConfigError(line_no, "unexpected text after section header");
            const auto name = trim(line.substr(1, close - 1));
            if (name.empty() || !std::all_of(name.begin(), name.end(), is_key_char))
                throw ConfigError(line_no, "invalid section name");
            section = std::string(name);
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(line_no, "expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        if (key.empty() || !std::all_of(key.begin(), key.end(), is_key_char))
            throw ConfigError(line_no, "invalid key '" + std::string(key) + "'");

        // Arrays may continue over following lines until brackets balance.
        std::string value(line.substr(eq + 1));
        int depth = bracket_balance(value);
        while (depth > 0 && i + 1 < lines.size()) {
            value += '\n';
            value += lines[++i];
            depth = bracket_balance(value);
        }
        if (depth > 0)
            throw ConfigError(line_no, "unterminated array");

        const std::string full = section.empty() ? std::string(key) : section + "." + std::string(key);
        if (table.values_.count(full))
            throw ConfigError(line_no, "duplicate key '" + full + "'");
        table.values_.emplace(full, ValueParser(value, line_no).parse());
    }
    return table;
}

bool ConfigTable::is_string(const std::string& key) const
{
    return has(key) && at(key).kind == Kind::string;
}

int ConfigTable::line_of(const std::string& key) const
{
    auto it = values_.find(key);
    return it == values_.end() ? 0 : it->second.line;
}

const ConfigValue& ConfigTable::at(const std::string& key) const
{
    auto it = values_.find(key);
    if (it == values_.end())
        throw ConfigError(0, "missing key '" + key + "'");
    return it->second;
}

std::string ConfigTable::get_string(const std::string& key) const
{
    const auto& v = at(key);
    if (v.kind != Kind::string)
        throw ConfigError(v.line, "'" + key + "' must be a string, got " + kind_name(v.kind));
    return v.text;
}

std::string ConfigTable::get_string(const std::string& key, const std::string& fallback) const
{
    return has(key) ? get_string(key) : fallback;
}

double ConfigTable::get_number(const std::string& key) const
{
    const auto& v = at(key);
    if (v.kind != Kind::number)
        throw ConfigError(v.line, "'" + key + "' must be a number, got " + kind_name(v.kind));
    return v.number;
}

double ConfigTable::get_number(const std::string& key, double fallback) const
{
    return has(key) ? get_number(key) : fallback;
}

bool ConfigTable::get_bool(const std::string& key, bool fallback) const
{
    if (!has(key))
        return fallback;
    const auto& v = at(key);
    if (v.kind != Kind::boolean)
        throw ConfigError(v.line, "'" + key + "' must be a boolean, got " + kind_name(v.kind));
    return v.boolean;
}

std::vector<std::string> ConfigTable::get_strings(const std::string& key) const
{
    const auto& v = at(key);
    if (v.kind != Kind::array)
        throw ConfigError(v.line, "'" + key + "' must be an array, got " + kind_name(v.kind));
    std::vector<std::string> out;
    for (const auto& item : v.items) {
        if (item.kind != Kind::string)
            throw ConfigError(item.line, "'" + key + "' items must be strings");
        out.push_back(item.text);
    }
    return out;
}

std::vector<double> ConfigTable::get_numbers(const std::string& key) const
{
    const auto& v = at(key);
    if (v.kind == Kind::number)
        return {v.number};
    if (v.kind != Kind::array)
        throw ConfigError(v.line, "'" + key + "' must be an array, got " + kind_name(v.kind));
    std::vector<double> out;
    for (const auto& item : v.items) {
        if (item.kind != Kind::number)
            throw ConfigError(item.line, "'" + key + "' items must be numbers");
        out.push_back(item.number);
    }
    return out;
}

void ConfigTable::reject_unknown(const std::vector<std::string>& known) const
{
    const std::set<std::string> allowed(known.begin(), known.end());
    for (const auto& [key, value] : values_)
        if (!allowed.count(key))
            throw ConfigError(value.line, "unknown key '" + key + "'");
}

namespace {

const std::vector<std::string> mission_keys = {
    "task",
    "seed",
    "sorter",
    "grid.rows",
    "grid.cols",
    "grid.pitch",
    "grid.origin_x",
    "grid.origin_y",
    "grid.axis_heading",
    "grid.universe",
    "regions.patrol",
    "regions.fire",
    "regions.roi",
    "regions.cover",
    "regions.waypoints",
    "regions.target",
    "environment.visibility_radius",
    "environment.nemo_appear_rate",
    "environment.nemo_disappear_rate",
    "vehicle.min_turn_radius",
    "vehicle.cruise_speed",
    "vehicle.arrival_radius",
    "vehicle.arrival_axis",
    "vehicle.home",
    "stop.kind",
    "stop.value",
    "sim.dt",
    "sim.event_latency",
    "sim.log",
    "sim.pose_every",
    "sim.max_time",
};

std::uint64_t to_count(const ConfigTable& t, const std::string& key, double fallback)
{
    const double v = t.get_number(key, fallback);
    if (v < 0 || v != std::floor(v) || v > 1e15)
        throw ConfigError(t.line_of(key), "'" + key + "' must be a non-negative integer");
    return static_cast<std::uint64_t>(v);
}

// Region value: array of cell names / NAME@RxC rectangles, or a string naming a region file.
std::vector<CellId> region(const ConfigTable& t, const std::string& key, const GridMap& grid,
                           const std::filesystem::path& base)
{
    if (!t.has(key))
        return {};
    std::string text;
    if (t.is_string(key)) {
        text = read_file(base / t.get_string(key));
    } else {
        for (const auto& n : t.get_strings(key))
            text += n + "\n";
    }
    try {
        return parse_region(text, grid, key).members;
    } catch (const ValidationError& e) {
        throw ConfigError(t.line_of(key), key + ": " + e.what());
    }
}

CellId cell(const ConfigTable& t, const GridMap& grid, const std::string& name, const std::string& key)
{
    try {
        return id_of(grid, name);
    } catch (const Error& e) {
        throw ConfigError(t.line_of(key), key + ": " + e.what());
    }
}

} // namespace

missions::MissionConfig mission_from_config(const ConfigTable& t, const std::filesystem::path& base)
{
    using namespace missions;
    t.reject_unknown(mission_keys);
    MissionConfig c;
    try {
        c.task = parse_task(t.get_string("task"));
        c.sorter.kind = parse_sorter(t.get_string("sorter", "distance"));
    } catch (const ValidationError& e) {
        throw ConfigError(t.line_of(t.has("sorter") ? "sorter" : "task"), e.what());
    }
    c.seed = to_count(t, "seed", 1);
    c.sorter.seed = c.seed;

    const auto rows = to_count(t, "grid.rows", 0);
    const auto cols = to_count(t, "grid.cols", 0);
    if (rows == 0 || cols == 0 || rows * cols > 50'000'000)
        throw ConfigError(0, "grid.rows and grid.cols must be positive");
    try {
        c.grid = build_grid({t.get_number("grid.origin_x", 0), t.get_number("grid.origin_y", 0)},
                            t.get_number("grid.pitch", 50), static_cast<std::uint32_t>(rows),
                            static_cast<std::uint32_t>(cols), t.get_number("grid.axis_heading", 0));
    } catch (const ValidationError& e) {
        throw ConfigError(0, e.what());
    }

    c.universe = region(t, "grid.universe", c.grid, base);
    c.patrol = region(t, "regions.patrol", c.grid, base);
    c.fire = region(t, "regions.fire", c.grid, base);
    c.roi = region(t, "regions.roi", c.grid, base);
    c.cover = region(t, "regions.cover", c.grid, base);
    if (t.has("regions.waypoints"))
        for (const auto& n : t.get_strings("regions.waypoints"))
            c.waypoints.push_back(cell(t, c.grid, n, "regions.waypoints"));
    if (t.has("regions.target"))
        c.target = cell(t, c.grid, t.get_string("regions.target"), "regions.target");

    c.visibility_radius = t.get_number("environment.visibility_radius", c.visibility_radius);
    c.nemo.appear_rate = t.get_number("environment.nemo_appear_rate", c.nemo.appear_rate);
    c.nemo.disappear_rate = t.get_number("environment.nemo_disappear_rate", c.nemo.disappear_rate);

    c.limits.min_turn_radius = t.get_number("vehicle.min_turn_radius", c.limits.min_turn_radius);
    c.limits.cruise_speed = t.get_number("vehicle.cruise_speed", c.limits.cruise_speed);
    c.limits.arrival_radius = t.get_number("vehicle.arrival_radius", c.limits.arrival_radius);
    if (t.has("vehicle.arrival_axis"))
        c.arrival_axis = t.get_number("vehicle.arrival_axis");
    if (t.has("vehicle.home"))
        c.home = cell(t, c.grid, t.get_string("vehicle.home"), "vehicle.home");

    const std::string stop = t.get_string("stop.kind", "loops");
    if (stop == "loops")
        c.stop.kind = StopKind::loops;
    else if (stop == "time")
        c.stop.kind = StopKind::time;
    else if (stop == "complete")
        c.stop.kind = StopKind::complete;
    else
        throw ConfigError(t.line_of("stop.kind"), "stop.kind must be loops, time or complete");
    c.stop.value = t.get_number("stop.value", c.stop.kind == StopKind::complete ? 0 : 2);

    c.dt = t.get_number("sim.dt", c.dt);
    c.event_latency = t.get_number("sim.event_latency", c.event_latency);
    const std::string log = t.get_string("sim.log", "compact");
    if (log == "compact")
        c.log = LogDetail::compact;
    else if (log == "full")
        c.log = LogDetail::full;
    else
        throw ConfigError(t.line_of("sim.log"), "sim.log must be compact or full");
    c.pose_every = static_cast<int>(to_count(t, "sim.pose_every", c.pose_every));
    c.max_time = t.get_number("sim.max_time", c.max_time);

    try {
        validate(c);
    } catch (const ValidationError& e) {
        throw ConfigError(0, e.what());
    }
    return c;
}

SweepPlan sweep_from_config(const ConfigTable& t)
{
    t.reject_unknown({"task", "sorters", "universes", "targets", "repetitions", "seed", "loops"});
    SweepPlan plan;
    try {
        plan.task = missions::parse_task(t.get_string("task"));
        for (const auto& s : t.get_strings("sorters"))
            plan.sorters.push_back(parse_sorter(s));
    } catch (const ValidationError& e) {
        throw ConfigError(0, e.what());
    }
    if (plan.task != missions::Task::ordered_patrol && plan.task != missions::Task::cover)
        throw ConfigError(0, "sweeps support the ordered_patrol and cover tasks");
    if (plan.sorters.empty())
        throw ConfigError(0, "sorters must not be empty");

    auto counts = [&](const std::string& key) {
        std::vector<std::size_t> out;
        for (double v : t.get_numbers(key)) {
            if (v < 1 || v != std::floor(v) || v > 1e9)
                throw ConfigError(t.line_of(key), "'" + key + "' entries must be positive integers");
            out.push_back(static_cast<std::size_t>(v));
        }
        if (out.empty())
            throw ConfigError(0, "'" + key + "' must not be empty");
        return out;
    };
    plan.universes = counts("universes");
    if (plan.task == missions::Task::cover)
        plan.targets = counts("targets");
    else if (t.has("targets"))
        throw ConfigError(0, "targets only applies to cover sweeps");
    else
        plan.targets = {3};

    plan.repetitions = to_count(t, "repetitions", 1);
    if (plan.repetitions < 1)
        throw ConfigError(0, "repetitions must be at least 1");
    plan.base_seed = to_count(t, "seed", 1);
    plan.loops = static_cast<int>(to_count(t, "loops", 2));
    if (plan.loops < 1)
        throw ConfigError(0, "loops must be at least 1");
    return plan;
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot read '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content)
{
    std::error_code ec;
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot write '" + path.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out)
        throw IoError("write failed for '" + path.string() + "'");
}

} // namespace iterplan::cli

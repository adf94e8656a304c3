#include <doctest.h>

#include "iterplan/cli.hpp"

#include <algorithm>
#include <random>
#include <sstream>

using namespace iterplan;
using namespace iterplan::cli;
namespace fs = std::filesystem;

namespace {

const fs::path configs = ITERPLAN_CONFIG_DIR;
const fs::path data = ITERPLAN_TEST_DATA;

struct TempDir {
    fs::path path;
    TempDir()
    {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("iterplan_cli_" + std::to_string(std::random_device{}()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir()
    {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

std::string without_wall(const std::string& csv)
{
    std::string out;
    std::istringstream in(csv);
    for (std::string line; std::getline(in, line);)
        out += line.substr(0, line.rfind(',')) + "\n";
    return out;
}

int expect_error_line(std::string_view text)
{
    try {
        (void)ConfigTable::parse(text);
    } catch (const ConfigError& e) {
        return e.line();
    }
    return -1;
}

} // namespace

TEST_CASE("config parser reads sections, arrays and comments")
{
    const auto t = ConfigTable::parse(R"(# header
task = "cover"   # trailing comment
seed = 1_000
[grid]
rows = 23
pitch = 5.0e1
flag = true
[regions]
cover = [
  "A1",  # first
  'B2@2x2',
]
sizes = [10, 30, 61]
)");
    CHECK(t.get_string("task") == "cover");
    CHECK(t.get_number("seed") == 1000);
    CHECK(t.get_number("grid.rows") == 23);
    CHECK(t.get_number("grid.pitch") == 50);
    CHECK(t.get_bool("grid.flag", false));
    CHECK(t.get_strings("regions.cover") == std::vector<std::string>{"A1", "B2@2x2"});
    CHECK(t.get_numbers("regions.sizes") == std::vector<double>{10, 30, 61});
    CHECK(t.line_of("regions.sizes") == 13);
    CHECK(t.get_number("grid.cols", 7) == 7);
    CHECK_THROWS_AS((void)t.get_number("task"), ConfigError);
    CHECK_THROWS_AS(t.reject_unknown({"task", "seed"}), ConfigError);
}

TEST_CASE("config parse errors carry the line number")
{
    CHECK(expect_error_line("a = 1\nb = \"open\n") == 2);
    CHECK(expect_error_line("a = 1\n\n[grid\n") == 3);
    CHECK(expect_error_line("a = 1\na = 2\n") == 2);
    CHECK(expect_error_line("x = 12abc\n") == 1);
    CHECK(expect_error_line("novalue\n") == 1);
    CHECK(expect_error_line("a = [1, 2\n") == 1);
    CHECK(expect_error_line("a = [[1]]\n") == 1);
    CHECK(expect_error_line("a = 1 2\n") == 1);
}

TEST_CASE("bundled fire patrol config builds the 7x7 mission")
{
    const auto c = mission_from_config(ConfigTable::parse(read_file(configs / "fire_patrol_7x7.toml")));
    CHECK(c.task == missions::Task::fire_patrol);
    CHECK(c.grid.rows == 7);
    CHECK(c.grid.cols == 7);
    CHECK(c.patrol == std::vector<CellId>{id_of(c.grid, "A2"), id_of(c.grid, "B2"), id_of(c.grid, "C5")});
    CHECK(c.fire == std::vector<CellId>{id_of(c.grid, "C5")});
    CHECK(c.stop.value == 3);
}

TEST_CASE("every bundled mission config loads")
{
    for (const auto& entry : fs::directory_iterator(configs))
        if (entry.path().extension() == ".toml") {
            CAPTURE(entry.path().string());
            CHECK_NOTHROW((void)mission_from_config(ConfigTable::parse(read_file(entry.path()))));
        }
    for (const auto& entry : fs::directory_iterator(configs / "sweeps")) {
        CAPTURE(entry.path().string());
        CHECK_NOTHROW((void)sweep_from_config(ConfigTable::parse(read_file(entry.path()))));
    }
}

TEST_CASE("mission config rejects unknown keys and bad cells")
{
    CHECK_THROWS_AS((void)mission_from_config(ConfigTable::parse("task = \"cover\"\n[grid]\nrows = 3\ncols = 3\n"
                                                                 "[regions]\ncover = [\"A1\"]\ncolour = 1\n")),
                    ConfigError);
    CHECK_THROWS_AS((void)mission_from_config(ConfigTable::parse("task = \"cover\"\n[grid]\nrows = 3\ncols = 3\n"
                                                                 "[regions]\ncover = [\"Z9\"]\n")),
                    ConfigError);
    CHECK_THROWS_AS((void)mission_from_config(ConfigTable::parse("task = \"swim\"\n[grid]\nrows = 3\ncols = 3\n")),
                    ConfigError);
    CHECK_THROWS_AS((void)sweep_from_config(ConfigTable::parse("task = \"fire_patrol\"\nsorters = [\"last\"]\n"
                                                               "universes = [100]\n")),
                    ConfigError);
    CHECK_THROWS_AS((void)sweep_from_config(ConfigTable::parse("task = \"cover\"\nsorters = [\"last\"]\n"
                                                               "universes = [713]\ntargets = [0]\n")),
                    ConfigError);
}

TEST_CASE("CSV rows round-trip and the header is exact")
{
    CHECK(csv_header() == "run_id,task,sorter,universe,targets,seed,sim_s,ideal_s,overhead,wall_s");
    RunRow r{7, "cover", "distance", 713, 61, 3, 123.456789, std::nan(""), std::nan(""), 0.5};
    const auto text = csv_header() + "\n" + csv_line(r) + "\n";
    CHECK(csv_line(r) == "7,cover,distance,713,61,3,123.456789,nan,nan,0.500");
    const auto rows = parse_csv(text);
    REQUIRE(rows.size() == 1);
    CHECK(csv_line(rows[0]) == csv_line(r));
    CHECK(parse_csv("").empty());
    CHECK_THROWS_AS((void)parse_csv("run_id,task\n"), ConfigError);
    CHECK_THROWS_AS((void)parse_csv(csv_header() + "\n1,cover,last\n"), ConfigError);
}

TEST_CASE("aggregation is independent of row order")
{
    std::vector<RunRow> rows;
    std::mt19937 rng(4);
    for (std::size_t i = 0; i < 40; ++i)
        rows.push_back({i, "ordered_patrol", i % 2 ? "last" : "random", i % 4 < 2 ? 1000u : 10000u, 3, i,
                        100 + std::uniform_real_distribution<double>(0, 10)(rng), 85, 0.2, 0});
    const auto before = summary_csv(rows);
    std::shuffle(rows.begin(), rows.end(), rng);
    CHECK(summary_csv(rows) == before);

    const auto points = aggregate(rows, false);
    CHECK(points.size() == 4);
    for (const auto& p : points)
        CHECK(p.n == 10);
}

TEST_CASE("synth writes a deterministic controller and distinct exit codes")
{
    TempDir dir;
    std::ostringstream out, err;
    SynthOptions o;
    o.builtin = "fire_patrol";
    o.out = dir.path / "a";
    REQUIRE(cmd_synth(o, out, err) == 0);
    o.out = dir.path / "b";
    REQUIRE(cmd_synth(o, out, err) == 0);
    CHECK(read_file(dir.path / "a" / "fire_patrol.ctrl") == read_file(dir.path / "b" / "fire_patrol.ctrl"));
    const auto report = read_file(dir.path / "a" / "fire_patrol.report.json");
    CHECK(report.find("\"controller_states\"") != std::string::npos);
    CHECK(report.find("\"verified\": true") != std::string::npos);

    write_file(dir.path / "unreal.spec", "controlled a\nuncontrolled u\n"
                                         "process P = states 1 ; init 0 ; 0 -a-> 0 ; 0 -u-> 0\n"
                                         "plant P\ngoal safety always (not u)\n");
    SynthOptions bad;
    bad.spec = dir.path / "unreal.spec";
    bad.out = dir.path;
    CHECK(cmd_synth(bad, out, err) == 4);
    CHECK(err.str().find("unrealizable") != std::string::npos);

    write_file(dir.path / "broken.spec", "controlled a\nprocess P = states 1 ; init 0 ; 0 -a 0\n");
    bad.spec = dir.path / "broken.spec";
    CHECK(cmd_synth(bad, out, err) == 3);
    bad.spec = dir.path / "missing.spec";
    CHECK(cmd_synth(bad, out, err) == 2);
}

TEST_CASE("run writes log, metrics row and flight path; reruns match")
{
    TempDir dir;
    std::ostringstream out, err;
    RunOptions o;
    o.config = configs / "fire_patrol_7x7.toml";
    o.out = dir.path / "a";
    REQUIRE(cmd_run(o, out, err) == 0);
    o.out = dir.path / "b";
    REQUIRE(cmd_run(o, out, err) == 0);

    const auto a = read_file(dir.path / "a" / "metrics.csv");
    CHECK(without_wall(a) == without_wall(read_file(dir.path / "b" / "metrics.csv")));
    CHECK(read_file(dir.path / "a" / "mission.log") == read_file(dir.path / "b" / "mission.log"));
    CHECK(read_file(dir.path / "a" / "path.svg") == read_file(dir.path / "b" / "path.svg"));
    CHECK(a.find('\r') == std::string::npos);

    const auto rows = parse_csv(a);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].overhead >= 0);
    CHECK(rows[0].targets == 3);

    const auto svg = read_file(dir.path / "a" / "path.svg");
    CHECK(svg.find("class=\"patrol\"") != std::string::npos);
    CHECK(svg.find("class=\"fire\"") != std::string::npos);
    CHECK(svg.find("class=\"path\"") != std::string::npos);
    CHECK(svg.find("class=\"photos\"") != std::string::npos);

    o.seed = 11;
    o.out = dir.path / "c";
    REQUIRE(cmd_run(o, out, err) == 0);
    CHECK(parse_csv(read_file(dir.path / "c" / "metrics.csv"))[0].seed == 11);

    RunOptions missing;
    missing.config = dir.path / "nope.toml";
    CHECK(cmd_run(missing, out, err) == 2);
    write_file(dir.path / "bad.toml", "task = \"fire_patrol\"\n[grid]\nrows = x\n");
    missing.config = dir.path / "bad.toml";
    CHECK(cmd_run(missing, out, err) == 3);
}

TEST_CASE("find_nemo demo loiters on found cells")
{
    TempDir dir;
    std::ostringstream out, err;
    RunOptions o;
    o.config = configs / "find_nemo_demo.toml";
    o.out = dir.path;
    REQUIRE(cmd_run(o, out, err) == 0);
    const auto svg = read_file(dir.path / "path.svg");
    // Some cell was photographed on several consecutive revisits.
    bool cluster = false;
    for (auto p = svg.find("data-count=\""); p != std::string::npos; p = svg.find("data-count=\"", p + 1))
        cluster = cluster || std::stoi(svg.substr(p + 12)) > 1;
    CHECK(cluster);
}

TEST_CASE("sweep row count, per-cell status and job independence")
{
    TempDir dir;
    write_file(dir.path / "plan.toml", "task = \"ordered_patrol\"\nsorters = [\"last\", \"random\", \"distance\"]\n"
                                       "universes = [400, 500, 600]\nrepetitions = 5\nseed = 1\n");
    std::ostringstream out, err;
    SweepOptions o;
    o.plan = dir.path / "plan.toml";
    o.out = dir.path / "j1";
    o.jobs = 1;
    REQUIRE(cmd_sweep(o, out, err) == 0);
    o.out = dir.path / "j4";
    o.jobs = 4;
    REQUIRE(cmd_sweep(o, out, err) == 0);

    const auto csv = read_file(dir.path / "j1" / "runs.csv");
    CHECK(parse_csv(csv).size() == 45);
    CHECK(without_wall(csv) == without_wall(read_file(dir.path / "j4" / "runs.csv")));
    CHECK(read_file(dir.path / "j1" / "summary.csv") == read_file(dir.path / "j4" / "summary.csv"));
    CHECK(read_file(dir.path / "j1" / "duration.svg") == read_file(dir.path / "j4" / "duration.svg"));
    const auto svg = read_file(dir.path / "j1" / "duration.svg");
    for (const char* s : {"last", "random", "distance"})
        CHECK(svg.find(std::string("data-sorter=\"") + s + "\"") != std::string::npos);

    // A 100-cell universe is too small for the patrol scenario: the cell fails, the rest run.
    write_file(dir.path / "partial.toml", "task = \"ordered_patrol\"\nsorters = [\"last\"]\n"
                                          "universes = [100, 400]\n");
    o.plan = dir.path / "partial.toml";
    o.out = dir.path / "p";
    CHECK(cmd_sweep(o, out, err) == 1);
    const auto status = read_file(dir.path / "p" / "status.txt");
    CHECK(status.find("FAILED") != std::string::npos);
    CHECK(status.find(" ok\n") != std::string::npos);
    CHECK(parse_csv(read_file(dir.path / "p" / "runs.csv")).size() == 2);

    write_file(dir.path / "single.toml", "task = \"cover\"\nsorters = [\"distance\"]\nuniverses = [713]\n"
                                         "targets = [10]\n");
    o.plan = dir.path / "single.toml";
    o.out = dir.path / "s";
    REQUIRE(cmd_sweep(o, out, err) == 0);
    CHECK(parse_csv(read_file(dir.path / "s" / "runs.csv")).size() == 1);
}

TEST_CASE("plot: empty CSV gives empty axes, fixture matches golden SVG")
{
    TempDir dir;
    std::ostringstream out, err;
    write_file(dir.path / "empty.csv", "");
    PlotOptions o;
    o.csv = dir.path / "empty.csv";
    o.out = dir.path / "empty.svg";
    REQUIRE(cmd_plot(o, out, err) == 0);
    const auto empty = read_file(o.out);
    CHECK(empty.find("<line") != std::string::npos);
    CHECK(empty.find("class=\"series\"") == std::string::npos);

    for (const char* kind : {"duration", "overhead", "scatter"}) {
        CAPTURE(kind);
        o.csv = data / "sweep_fixture.csv";
        o.kind = kind;
        o.out = dir.path / (std::string(kind) + ".svg");
        REQUIRE(cmd_plot(o, out, err) == 0);
        CHECK(read_file(o.out) == read_file(data / "golden" / (std::string("sweep_fixture.") + kind + ".svg")));
    }

    write_file(dir.path / "bad.csv", "a,b,c\n");
    o.csv = dir.path / "bad.csv";
    CHECK(cmd_plot(o, out, err) == 3);
    o.csv = data / "sweep_fixture.csv";
    o.kind = "pie";
    CHECK(cmd_plot(o, out, err) == 3);
}

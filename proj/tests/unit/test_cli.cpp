#include "dpg/cli/artifacts.hpp"
#include "dpg/cli/commands.hpp"
#include "dpg/cli/state_io.hpp"
#include "dpg/dynamics.hpp"
#include "dpg/equilibrium.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <sstream>

#include <unistd.h>

using namespace dpg;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir()
    {
        static int counter = 0;
        path = fs::temp_directory_path() / ("dpg_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

struct Result {
    int code;
    std::string out, err;
};

Result dpg_run(std::vector<std::string> args)
{
    args.insert(args.begin(), "dpg");
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

// sweep.csv without its text column (scenario name)
cli::CsvTable numeric_sweep_table(const fs::path& file)
{
    std::istringstream in(cli::read_file(file));
    std::string out, line;
    while (std::getline(in, line)) {
        const auto first = line.find(',');
        const auto second = line.find(',', first + 1);
        out += line.substr(0, first) + line.substr(second) + "\n";
    }
    return cli::parse_csv(out);
}

} // namespace

TEST_CASE("header shape depends only on the zone count")
{
    for (int z = 1; z <= 4; ++z) {
        const auto h = cli::timeseries_header(Dimensions(z, 6));
        CHECK(h.size() == static_cast<std::size_t>(1 + 5 * z + 3 * z + z * (z - 1) + 1));
        CHECK(h.front() == "day");
        CHECK(h.back() == "welfare");
        CHECK(cli::timeseries_header(Dimensions(z, 2)) == h);
    }
    const auto h2 = cli::timeseries_header(Dimensions(2, 6));
    CHECK(h2[1] == "d_S_z0");
    CHECK(h2[6] == "d_S_z1");
    CHECK(h2[11] == "mean_a_healthy_z0");
    CHECK(h2[17] == "flow_z0_to_z1");
    CHECK(h2[18] == "flow_z1_to_z0");
}

TEST_CASE("number format keeps every bit")
{
    for (double x : {0.1, 1.0 / 3.0, 4e-4, 1e-300, 2.9999999999999996, -0.06110513401742428, 0.0}) {
        const auto s = cli::format_double(x);
        CHECK(std::stod(s) == x);
    }
    CHECK(cli::format_double(0.5) == "0.5");
    CHECK(cli::format_double(4e-4).find('e') == std::string::npos);
}

TEST_CASE("CSV round trip reproduces the trajectory")
{
    const auto res = simulate(preset("fig4_migration"));
    const auto table = cli::parse_csv(cli::timeseries_csv(res.trajectory));
    REQUIRE(table.rows.size() == res.trajectory.records.size());
    CHECK(table.header == cli::timeseries_header(Dimensions(2, 6)));
    double worst = 0.0;
    for (std::size_t k = 0; k < table.rows.size(); ++k) {
        const auto expected = cli::timeseries_row(res.trajectory.records[k]);
        REQUIRE(expected.size() == table.rows[k].size());
        CHECK(table.rows[k][0] == static_cast<double>(k));
        for (std::size_t j = 0; j < expected.size(); ++j) {
            worst = std::max(worst, std::abs(expected[j] - table.rows[k][j]));
        }
    }
    CHECK(worst <= 1e-12);
    CHECK_THROWS_AS(cli::parse_csv("a,b\n1,2,3\n"), ValidationError);
    CHECK_THROWS_AS(cli::parse_csv("a,b\n1,x\n"), ValidationError);
}

TEST_CASE("social-state file round trip")
{
    const auto cfg = preset("fig4_migration");
    const auto s = initial_social_state(cfg);
    const auto back = cli::social_state_from_json(cli::social_state_to_json(s), Dimensions(cfg.params));
    CHECK(back == s);
    CHECK_THROWS_AS(cli::social_state_from_json(cli::social_state_to_json(s), Dimensions(1, 6)), ValidationError);
    CHECK_THROWS_AS(cli::social_state_from_json("[]", Dimensions(1, 6)), ValidationError);
}

TEST_CASE("mass tokens")
{
    const Dimensions dims(2, 6);
    const auto m = cli::parse_mass_tokens({"S:0=0.7", "R:1=0.3"}, dims);
    CHECK(m[dims.state_index(InfectionState::S, 0)] == 0.7);
    CHECK(m[dims.state_index(InfectionState::R, 1)] == 0.3);
    CHECK_THROWS_AS(cli::parse_mass_tokens({"S:2=1"}, dims), ValidationError);
    CHECK_THROWS_AS(cli::parse_mass_tokens({"S0=1"}, dims), ValidationError);
    CHECK_THROWS_AS(cli::parse_mass_tokens({"Q:0=1"}, dims), ValidationError);
    CHECK_THROWS_AS(cli::parse_mass_tokens({"S:0=-1"}, dims), ValidationError);
    const auto j = cli::parse_mass_json(R"({"S": [0.25, 0.0], "R": [0.5, 0.25]})", dims);
    CHECK(j[dims.state_index(InfectionState::R, 0)] == 0.5);
}

TEST_CASE("presets subcommand")
{
    const auto list = dpg_run({"presets"});
    CHECK(list.code == 0);
    CHECK(list.out == "fig2a\nfig2b\nfig2c\nfig3_sweep\nfig4_migration\n");
    const auto show = dpg_run({"presets", "fig2c"});
    CHECK(show.code == 0);
    CHECK(scenario_from_json(show.out) == preset("fig2c"));
    CHECK(dpg_run({"presets", "nope"}).code == cli::kValidation);
}

TEST_CASE("simulate writes deterministic artifacts")
{
    TempDir tmp;
    const auto a = dpg_run({"simulate", "--preset", "fig2c", "--out", (tmp.path / "a").string()});
    REQUIRE(a.code == 0);
    CHECK(a.out.find("total_infections") != std::string::npos);
    const auto b = dpg_run({"simulate", "--preset", "fig2c", "--out", (tmp.path / "b").string()});
    REQUIRE(b.code == 0);
    CHECK(cli::read_file(tmp.path / "a" / "timeseries.csv") == cli::read_file(tmp.path / "b" / "timeseries.csv"));

    auto summary = nlohmann::json::parse(cli::read_file(tmp.path / "a" / "summary.json"));
    auto other = nlohmann::json::parse(cli::read_file(tmp.path / "b" / "summary.json"));
    CHECK(summary.contains("metadata"));
    summary.erase("metadata");
    other.erase("metadata");
    CHECK(summary == other);
    CHECK(summary["metrics"]["total_infections"].get<double>() == simulate(preset("fig2c")).metrics.total_infections);
    CHECK_FALSE(fs::exists(tmp.path / "a" / "plot_timeseries.py"));

    const auto table = cli::parse_csv(cli::read_file(tmp.path / "a" / "timeseries.csv"));
    for (std::size_t k = 0; k < table.rows.size(); ++k) {
        CHECK(table.rows[k][0] == static_cast<double>(k));
    }
}

TEST_CASE("simulate from a config file with overrides")
{
    TempDir tmp;
    auto cfg = preset("fig2a");
    cfg.initial_distribution = {1.0, 0.0, 0.0, 0.0, 0.0};
    cli::write_file_atomic(tmp.path / "clean.json", scenario_to_json(cfg));
    const auto r = dpg_run({"simulate", "--config", (tmp.path / "clean.json").string(), "--horizon", "40", "--set",
                            "params.alpha=0.5", "--out", tmp.path.string(), "--emit-plot-script"});
    REQUIRE(r.code == 0);
    const auto summary = nlohmann::json::parse(cli::read_file(tmp.path / "summary.json"));
    CHECK(summary["metrics"]["total_infections"].get<double>() == 0.0);
    CHECK(summary["config"]["params"]["alpha"].get<double>() == 0.5);
    CHECK(fs::exists(tmp.path / "plot_timeseries.py"));
    const auto table = cli::parse_csv(cli::read_file(tmp.path / "timeseries.csv"));
    for (const auto& row : table.rows) {
        CHECK(row[1] == 1.0);
    }
}

TEST_CASE("simulate rejects bad input")
{
    TempDir tmp;
    CHECK(dpg_run({"simulate", "--preset", "fig2a"}).code == cli::kValidation);
    CHECK(dpg_run({"simulate", "--out", tmp.path.string()}).code == cli::kValidation);
    CHECK(dpg_run({"simulate", "--preset", "fig2a", "--horizon", "0", "--out", tmp.path.string()}).code ==
          cli::kValidation);
    CHECK(dpg_run({"simulate", "--preset", "fig2a", "--set", "params.alpha=2", "--out", tmp.path.string()}).code ==
          cli::kValidation);
    cli::write_file_atomic(tmp.path / "broken.json", "{\"params\": ");
    const auto bad = dpg_run({"simulate", "--config", (tmp.path / "broken.json").string(), "--out", tmp.path.string()});
    CHECK(bad.code == cli::kValidation);
    CHECK(bad.err.find("JSON") != std::string::npos);
    CHECK(dpg_run({"bogus"}).code == cli::kValidation);
}

TEST_CASE("sweep aggregate matches the per-point summaries")
{
    TempDir tmp;
    const auto r = dpg_run({"sweep", "--preset", "fig2b", "--grid", "lockdown.a_lock=1,3", "--grid",
                            "params.epsilon=0.01,0.1", "--jobs", "2", "--out", tmp.path.string()});
    REQUIRE(r.code == 0);
    const auto table = numeric_sweep_table(tmp.path / "sweep.csv");
    CHECK(table.header == std::vector<std::string>{"point", "lockdown.a_lock", "params.epsilon", "total_infections",
                                                   "peak_infections", "average_welfare"});
    REQUIRE(table.rows.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "point_%03zu", i);
        const auto s = nlohmann::json::parse(cli::read_file(tmp.path / name / "summary.json"));
        CHECK(table.rows[i][3] == s["metrics"]["total_infections"].get<double>());
        CHECK(table.rows[i][4] == s["metrics"]["peak_infections"].get<double>());
        CHECK(table.rows[i][5] == s["metrics"]["average_welfare"].get<double>());
        CHECK(s["config"]["params"]["epsilon"].get<double>() == table.rows[i][2]);
    }
    CHECK(table.rows[0][1] == 1.0);
    CHECK(table.rows[3][1] == 3.0);

    TempDir one;
    REQUIRE(dpg_run({"sweep", "--preset", "fig2a", "--out", one.path.string()}).code == 0);
    CHECK(numeric_sweep_table(one.path / "sweep.csv").rows.size() == 1);
}

TEST_CASE("sweep reports failing points and keeps the rest")
{
    TempDir tmp;
    // a_lock = 9 exceeds a_max
    const auto r = dpg_run({"sweep", "--preset", "fig2a", "--grid", "lockdown.a_lock=2,9", "--out", tmp.path.string()});
    CHECK(r.code == cli::kRuntime);
    CHECK(r.err.find("point 1") != std::string::npos);
    const auto table = numeric_sweep_table(tmp.path / "sweep.csv");
    REQUIRE(table.rows.size() == 1);
    CHECK(table.rows[0][1] == 2.0);
    CHECK(fs::exists(tmp.path / "point_000" / "timeseries.csv"));
    CHECK_FALSE(fs::exists(tmp.path / "point_001"));
}

TEST_CASE("equilibrium commands round trip")
{
    TempDir tmp;
    const auto file = (tmp.path / "eq.json").string();
    const auto built = dpg_run({"construct-equilibrium", "--preset", "fig4_migration", "--mass", "S:0=1", "--out", file});
    REQUIRE(built.code == 0);
    const auto pass = dpg_run({"check-equilibrium", "--preset", "fig4_migration", "--state", file});
    CHECK(pass.code == 0);
    CHECK(pass.out.find("verdict PASS") != std::string::npos);

    const auto all_r = (tmp.path / "r.json").string();
    REQUIRE(dpg_run({"construct-equilibrium", "--preset", "fig4_migration", "--mass", "R:0=0.9", "--mass", "R:1=0.1",
                     "--out", all_r})
                .code == 0);
    CHECK(dpg_run({"check-equilibrium", "--preset", "fig4_migration", "--state", all_r}).code == 0);

    const auto rejected =
        dpg_run({"construct-equilibrium", "--preset", "fig4_migration", "--mass", "S:1=1", "--out", file});
    CHECK(rejected.code == cli::kValidation);
    CHECK(rejected.err.find("d[s, z ∈ Z⁰_s] = 0") != std::string::npos);

    CHECK(dpg_run({"check-equilibrium", "--preset", "fig2a", "--state", file}).code == cli::kValidation);
}

TEST_CASE("check-equilibrium on a mid-run snapshot")
{
    TempDir tmp;
    auto cfg = preset("fig2b");
    cfg.stopping.horizon = 15;
    const auto snapshot = simulate(cfg).trajectory.records.back().state;
    const auto file = (tmp.path / "mid.json").string();
    cli::write_file_atomic(file, cli::social_state_to_json(snapshot));
    const auto strict = dpg_run({"check-equilibrium", "--preset", "fig2b", "--state", file, "--tol", "1e-12"});
    const auto loose = dpg_run({"check-equilibrium", "--preset", "fig2b", "--state", file, "--tol", "1e3"});
    CHECK(strict.code == cli::kVerdictFail);
    CHECK(strict.out.find("verdict FAIL") != std::string::npos);
    CHECK(loose.code == 0);
    auto gaps = [](const std::string& s) { return s.substr(0, s.find("tolerance")); };
    CHECK(gaps(strict.out) == gaps(loose.out));
}

#include "dpg/cli/commands.hpp"

#include "dpg/cli/artifacts.hpp"
#include "dpg/cli/state_io.hpp"
#include "dpg/dynamics.hpp"
#include "dpg/equilibrium.hpp"
#include "dpg/scenarios.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

namespace dpg::cli {

namespace fs = std::filesystem;

namespace {

const char* kColumnHelp =
    "timeseries.csv columns: day, d_<S|A|I|R|U>_z<k> (zone-major), "
    "mean_a_<healthy|infected|recovered>_z<k>, flow_z<i>_to_z<j> (i != j), welfare";

struct ScenarioSource {
    std::string preset;
    std::string config;
    std::vector<std::string> set;
    std::optional<int> horizon;

    void attach(CLI::App* cmd)
    {
        auto* p = cmd->add_option("--preset", preset, "built-in scenario (see `dpg presets`)");
        auto* c = cmd->add_option("--config", config, "scenario JSON file")->check(CLI::ExistingFile);
        p->excludes(c);
        cmd->add_option("--set", set, "field override path=value, repeatable");
        cmd->add_option("--horizon", horizon, "override the day horizon");
    }

    bool from_preset() const { return config.empty(); }

    void customize(ScenarioConfig& cfg) const
    {
        for (const auto& kv : set) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) {
                throw ValidationError("--set expects path=value, got '" + kv + "'");
            }
            apply_override(cfg, std::string_view(kv).substr(0, eq), std::string_view(kv).substr(eq + 1));
        }
        if (horizon) {
            cfg.stopping.horizon = *horizon;
        }
    }

    ScenarioConfig load() const
    {
        if (preset.empty() && config.empty()) {
            throw ValidationError("need --preset or --config");
        }
        ScenarioConfig cfg = from_preset() ? dpg::preset(preset) : scenario_from_json(read_file(config));
        customize(cfg);
        return validate_scenario(std::move(cfg));
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct RunOutput {
    SimulationResult result;
    double seconds = 0.0;
};

RunOutput run_and_write(const ScenarioConfig& cfg, const fs::path& dir, bool plot)
{
    const auto t0 = std::chrono::steady_clock::now();
    RunOutput out{simulate(cfg), 0.0};
    out.seconds = seconds_since(t0);
    write_file_atomic(dir / "timeseries.csv", timeseries_csv(out.result.trajectory));
    write_file_atomic(dir / "summary.json", summary_json(cfg, out.result, RunInfo{out.seconds}));
    if (plot) {
        write_file_atomic(dir / "plot_timeseries.py", plot_script(Dimensions(cfg.params)));
    }
    return out;
}

std::vector<std::string> split_commas(std::string_view s)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = s.find(',', start);
        out.emplace_back(s.substr(start, comma - start));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

SweepAxis parse_axis(const std::string& spec)
{
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
        throw ValidationError("--grid expects path=v1,v2,..., got '" + spec + "'");
    }
    return {spec.substr(0, eq), split_commas(std::string_view(spec).substr(eq + 1))};
}

std::string state_label(StateIndex s) { return std::string(to_string(s.state)) + " z" + std::to_string(s.zone); }

int cmd_presets(const std::string& name, const std::string& out_path, std::ostream& out)
{
    if (name.empty()) {
        for (const auto& n : preset_names()) {
            out << n << '\n';
        }
        return kOk;
    }
    const auto text = scenario_to_json(preset(name)) + "\n";
    if (out_path.empty()) {
        out << text;
    } else {
        write_file_atomic(out_path, text);
    }
    return kOk;
}

int cmd_simulate(const ScenarioSource& src, const std::string& dir, bool plot, std::ostream& out)
{
    const auto cfg = src.load();
    const auto run = run_and_write(cfg, dir, plot);
    const auto& m = run.result.metrics;
    out << "scenario " << cfg.name << ": total_infections " << format_double(m.total_infections)
        << ", peak_infections " << format_double(m.peak_infections) << " (day " << m.peak_day << ")"
        << ", average_welfare " << format_double(m.average_welfare) << ", days " << m.days << '\n';
    out << "wrote " << (fs::path(dir) / "timeseries.csv").string() << " and summary.json\n";
    return kOk;
}

int cmd_sweep(const ScenarioSource& src, const std::vector<std::string>& grid_specs, int jobs,
              const std::string& dir, bool plot, std::ostream& out, std::ostream& err)
{
    std::vector<ScenarioConfig> bases;
    SweepGrid grid;
    if (src.from_preset() && !src.preset.empty()) {
        auto plan = sweep_plan(src.preset);
        bases = std::move(plan.bases);
        grid = std::move(plan.grid);
        for (auto& base : bases) {
            src.customize(base);
        }
    } else {
        bases.push_back(src.load());
    }
    if (!grid_specs.empty()) {
        grid.clear();
        for (const auto& g : grid_specs) {
            grid.push_back(parse_axis(g));
        }
    }
    std::vector<SweepPoint> points;
    for (const auto& base : bases) {
        for (auto& p : sweep_points(grid, base)) {
            points.push_back(std::move(p));
        }
    }

    const auto n = points.size();
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers =
        jobs > 0 ? std::min<std::size_t>(static_cast<std::size_t>(jobs), n) : std::min<std::size_t>(hw, n);

    std::vector<std::optional<EpidemicMetrics>> results(n);
    std::vector<std::string> failures(n);
    std::atomic<std::size_t> next{0};
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    char name[32];
                    std::snprintf(name, sizeof name, "point_%03zu", i);
                    try {
                        results[i] = run_and_write(points[i].config, fs::path(dir) / name, plot).result.metrics;
                    } catch (const std::exception& e) {
                        failures[i] = e.what();
                    }
                }
            });
        }
    }

    std::string csv = "point,scenario";
    for (const auto& axis : grid) {
        csv += "," + axis.path;
    }
    csv += ",total_infections,peak_infections,average_welfare\n";
    std::size_t failed = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!results[i]) {
            ++failed;
            err << "point " << i << " (" << points[i].config.name << ") failed: " << failures[i] << '\n';
            continue;
        }
        csv += std::to_string(i) + "," + points[i].config.name;
        for (const auto& [path, value] : points[i].assignment) {
            csv += "," + value;
        }
        csv += "," + format_double(results[i]->total_infections) + "," + format_double(results[i]->peak_infections) +
               "," + format_double(results[i]->average_welfare) + "\n";
    }
    write_file_atomic(fs::path(dir) / "sweep.csv", csv);
    out << "sweep: " << n - failed << " of " << n << " points written to " << (fs::path(dir) / "sweep.csv").string()
        << '\n';
    return failed ? kRuntime : kOk;
}

int cmd_check(const ScenarioSource& src, const std::string& state_path, double tol, std::ostream& out)
{
    const auto cfg = src.load();
    const auto model = build_model(cfg);
    const auto social = social_state_from_json(read_file(state_path), Dimensions(cfg.params));
    const auto rep = check_equilibrium(social, model, tol);
    out << "se1_gap " << format_double(rep.se1_gap) << " (worst " << state_label(rep.worst_state) << ")\n"
        << "se1_gap_unoccupied " << format_double(rep.se1_gap_unoccupied) << '\n'
        << "se2_gap " << format_double(rep.se2_gap) << '\n'
        << "tolerance " << format_double(tol) << '\n'
        << "verdict " << (rep.verdict ? "PASS" : "FAIL") << '\n';
    return rep.verdict ? kOk : kVerdictFail;
}

int cmd_construct(const ScenarioSource& src, const std::vector<std::string>& mass_tokens,
                  const std::string& mass_file, const std::string& out_path, std::ostream& out)
{
    const auto cfg = src.load();
    const Dimensions dims(cfg.params);
    if (mass_tokens.empty() == mass_file.empty()) {
        throw ValidationError("give the mass split with --mass tokens or --mass-file, not both");
    }
    const auto mass = mass_file.empty() ? parse_mass_tokens(mass_tokens, dims) : parse_mass_json(read_file(mass_file), dims);
    const auto model = build_model(cfg);
    const auto zc = classify_zones(model.rewards, cfg.params);
    const auto social = construct_equilibrium(zc, mass, model.rules);
    write_file_atomic(out_path, social_state_to_json(social));
    for (auto s : kAllInfectionStates) {
        out << to_string(s) << ": Z_bar {";
        for (std::size_t k = 0; k < zc.z_bar[rank(s)].size(); ++k) {
            out << (k ? "," : "") << zc.z_bar[rank(s)][k];
        }
        out << "} Z_zero {";
        for (std::size_t k = 0; k < zc.z_zero[rank(s)].size(); ++k) {
            out << (k ? "," : "") << zc.z_zero[rank(s)][k];
        }
        out << "}\n";
    }
    out << "wrote " << out_path << '\n';
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Dynamic population game epidemic simulator"};
    app.name("dpg");
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(tool_version()));

    auto* presets = app.add_subcommand("presets", "list built-in scenarios or print one as JSON");
    std::string preset_name, preset_out;
    presets->add_option("name", preset_name, "preset to print");
    presets->add_option("--out", preset_out, "write the JSON here instead of stdout");

    ScenarioSource sim_src;
    std::string sim_out;
    bool sim_plot = false;
    auto* sim = app.add_subcommand("simulate", "run one scenario and write timeseries.csv and summary.json");
    sim->footer(kColumnHelp);
    sim_src.attach(sim);
    sim->add_option("--out", sim_out, "output directory")->required();
    sim->add_flag("--emit-plot-script", sim_plot, "also write plot_timeseries.py (convenience only)");

    ScenarioSource sweep_src;
    std::vector<std::string> grid_specs;
    int jobs = 0;
    std::string sweep_out;
    bool sweep_plot = false;
    auto* sw = app.add_subcommand("sweep", "run a grid of scenarios; writes point_NNN/ and sweep.csv");
    sw->footer("With --preset fig3_sweep and no --grid, runs the four lockdown families over lockdown.a_lock 0..6.\n" +
               std::string(kColumnHelp));
    sweep_src.attach(sw);
    sw->add_option("--grid", grid_specs, "axis path=v1,v2,..., repeatable (first axis varies slowest)");
    sw->add_option("--jobs", jobs, "concurrent points (default: min(points, hardware threads))")
        ->check(CLI::NonNegativeNumber);
    sw->add_option("--out", sweep_out, "output directory")->required();
    sw->add_flag("--emit-plot-script", sweep_plot, "also write plot_timeseries.py per point");

    ScenarioSource check_src;
    std::string state_path;
    double tol = 1e-8;
    auto* check = app.add_subcommand("check-equilibrium", "check best-response optimality and stationarity of a social-state file");
    check_src.attach(check);
    check->add_option("--state", state_path, "social-state JSON file")->required()->check(CLI::ExistingFile);
    check->add_option("--tol", tol, "tolerance on both gaps")->check(CLI::NonNegativeNumber);

    ScenarioSource cons_src;
    std::vector<std::string> mass_tokens;
    std::string mass_file, cons_out;
    auto* cons = app.add_subcommand("construct-equilibrium", "build a stationary equilibrium from a mass split");
    cons_src.attach(cons);
    cons->add_option("--mass", mass_tokens, "mass token <S|R>:<zone>=<value>, repeatable");
    cons->add_option("--mass-file", mass_file, "JSON object {\"S\": [per zone], \"R\": [...]}")
        ->check(CLI::ExistingFile);
    cons->add_option("--out", cons_out, "social-state file to write")->required();

    std::vector<std::string> argv_rest(args.begin() + (args.empty() ? 0 : 1), args.end());
    std::reverse(argv_rest.begin(), argv_rest.end());
    try {
        app.parse(argv_rest);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kValidation;
    }

    try {
        if (*presets) {
            return cmd_presets(preset_name, preset_out, out);
        }
        if (*sim) {
            return cmd_simulate(sim_src, sim_out, sim_plot, out);
        }
        if (*sw) {
            return cmd_sweep(sweep_src, grid_specs, jobs, sweep_out, sweep_plot, out, err);
        }
        if (*check) {
            return cmd_check(check_src, state_path, tol, out);
        }
        if (*cons) {
            return cmd_construct(cons_src, mass_tokens, mass_file, cons_out, out);
        }
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kRuntime;
    }
    return kValidation;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    return run(std::vector<std::string>(argv, argv + argc), out, err);
}

} // namespace dpg::cli

#include "dpg/cli/artifacts.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace dpg::cli {

namespace {

using json = nlohmann::ordered_json;

std::string zone_tag(int z) { return "z" + std::to_string(z); }

} // namespace

std::string_view tool_version() { return DPG_VERSION; }

std::string format_double(double x)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::vector<std::string> timeseries_header(const Dimensions& dims)
{
    std::vector<std::string> cols{"day"};
    for (int z = 0; z < dims.num_zones(); ++z) {
        for (auto s : kAllInfectionStates) {
            cols.push_back("d_" + std::string(to_string(s)) + "_" + zone_tag(z));
        }
    }
    for (auto c : kAllBehaviorClasses) {
        for (int z = 0; z < dims.num_zones(); ++z) {
            cols.push_back("mean_a_" + std::string(to_string(c)) + "_" + zone_tag(z));
        }
    }
    for (int i = 0; i < dims.num_zones(); ++i) {
        for (int j = 0; j < dims.num_zones(); ++j) {
            if (i != j) {
                cols.push_back("flow_" + zone_tag(i) + "_to_" + zone_tag(j));
            }
        }
    }
    cols.emplace_back("welfare");
    return cols;
}

std::vector<double> timeseries_row(const StepRecord& rec)
{
    const auto& dims = rec.state.dims();
    std::vector<double> row{static_cast<double>(rec.day)};
    const auto mass = rec.state.dist.values();
    row.insert(row.end(), mass.begin(), mass.end());
    row.insert(row.end(), rec.mean_activation.begin(), rec.mean_activation.end());
    for (int i = 0; i < dims.num_zones(); ++i) {
        for (int j = 0; j < dims.num_zones(); ++j) {
            if (i != j) {
                row.push_back(rec.flow(i, j));
            }
        }
    }
    row.push_back(rec.welfare);
    return row;
}

std::string timeseries_csv(const Trajectory& traj)
{
    if (traj.records.empty()) {
        throw ValidationError("cannot write an empty trajectory");
    }
    std::string out;
    const auto header = timeseries_header(traj.records.front().state.dims());
    for (std::size_t i = 0; i < header.size(); ++i) {
        out += (i ? "," : "") + header[i];
    }
    out += '\n';
    for (const auto& rec : traj.records) {
        out += std::to_string(rec.day);
        const auto row = timeseries_row(rec);
        for (std::size_t i = 1; i < row.size(); ++i) {
            out += ',';
            out += format_double(row[i]);
        }
        out += '\n';
    }
    return out;
}

CsvTable parse_csv(std::string_view text)
{
    CsvTable table;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::vector<std::string_view> cells;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            cells.push_back(line.substr(start, comma - start));
            if (comma == std::string_view::npos) {
                break;
            }
            start = comma + 1;
        }
        if (table.header.empty()) {
            for (auto c : cells) {
                table.header.emplace_back(c);
            }
            continue;
        }
        if (cells.size() != table.header.size()) {
            throw ValidationError("csv line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                                  " cells, header has " + std::to_string(table.header.size()));
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (auto c : cells) {
            double v = 0.0;
            const auto res = std::from_chars(c.data(), c.data() + c.size(), v);
            if (res.ec != std::errc{} || res.ptr != c.data() + c.size()) {
                throw ValidationError("csv line " + std::to_string(line_no) + ": not a number: " + std::string(c));
            }
            row.push_back(v);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::string summary_json(const ScenarioConfig& cfg, const SimulationResult& result, const RunInfo& info)
{
    const auto& m = result.metrics;
    json j;
    j["scenario"] = cfg.name;
    j["metrics"] = {{"total_infections", m.total_infections},
                    {"total_infections_by_zone", m.total_infections_by_zone},
                    {"peak_infections", m.peak_infections},
                    {"peak_infections_by_zone", m.peak_infections_by_zone},
                    {"peak_day", m.peak_day},
                    {"peak_day_by_zone", m.peak_day_by_zone},
                    {"average_welfare", m.average_welfare},
                    {"second_wave_by_zone", m.second_wave_by_zone},
                    {"days", m.days}};
    j["run"] = {{"stopped_early", result.stopped_early},
                {"final_day", result.trajectory.records.back().day},
                {"max_mass_deviation", result.max_mass_deviation}};
    j["config"] = json::parse(scenario_to_json(cfg));
    j["metadata"] = {{"tool", "dpg"}, {"version", tool_version()}, {"wall_clock_seconds", info.wall_clock_seconds}};
    return j.dump(2) + "\n";
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content)
{
    namespace fs = std::filesystem;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        }
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        f.flush();
        if (!f) {
            throw std::runtime_error("write failed: " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw std::runtime_error("cannot move " + tmp.string() + " to " + path.string());
    }
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot read " + path.string());
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string plot_script(const Dimensions& dims)
{
    std::string zones = "[";
    for (int z = 0; z < dims.num_zones(); ++z) {
        zones += (z ? ", " : "") + std::to_string(z);
    }
    zones += "]";
    return "#!/usr/bin/env python3\n"
           "# Convenience output: quick look at timeseries.csv. Needs pandas and matplotlib.\n"
           "import sys\n"
           "import pandas as pd\n"
           "import matplotlib.pyplot as plt\n\n"
           "df = pd.read_csv(sys.argv[1] if len(sys.argv) > 1 else 'timeseries.csv')\n"
           "zones = " + zones + "\n"
           "fig, axes = plt.subplots(len(zones), 2, figsize=(11, 3.5 * len(zones)), squeeze=False)\n"
           "for row, z in zip(axes, zones):\n"
           "    for s in 'SAIRU':\n"
           "        row[0].plot(df['day'], df[f'd_{s}_z{z}'], label=s)\n"
           "    row[0].set_title(f'zone {z}')\n"
           "    row[0].legend()\n"
           "    for c in ('healthy', 'infected', 'recovered'):\n"
           "        row[1].plot(df['day'], df[f'mean_a_{c}_z{z}'], label=c)\n"
           "    row[1].set_title(f'mean activation, zone {z}')\n"
           "    row[1].legend()\n"
           "fig.tight_layout()\n"
           "plt.savefig('timeseries.png', dpi=120)\n";
}

} // namespace dpg::cli

#pragma once

// On-disk run artifacts: the per-day time series table and the summary record.

#include "dpg/dynamics.hpp"
#include "dpg/scenarios.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace dpg::cli {

/// %.17g-style text; parses back to exactly `x`.
std::string format_double(double x);

/// Column order: day; d_<s>_z<z> for each zone, then state; mean_a_<class>_z<z>
/// class-major; flow_z<i>_to_z<j> for i != j, row-major; welfare.
std::vector<std::string> timeseries_header(const Dimensions& dims);
std::vector<double> timeseries_row(const StepRecord& rec);
std::string timeseries_csv(const Trajectory& traj);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};
/// Throws ValidationError on ragged rows or non-numeric cells.
CsvTable parse_csv(std::string_view text);

struct RunInfo {
    double wall_clock_seconds = 0.0;
};
/// metrics, config echo and a metadata block (tool version, wall clock).
std::string summary_json(const ScenarioConfig& cfg, const SimulationResult& result, const RunInfo& info);

/// Writes through a sibling temp file and renames it into place. Throws
/// std::runtime_error on I/O failure.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

/// Convenience matplotlib script for timeseries.csv; not used by any test.
std::string plot_script(const Dimensions& dims);

std::string_view tool_version();

} // namespace dpg::cli

#pragma once

// Declarative scenario definitions, the built-in presets and sweep grids.

#include "dpg/core.hpp"
#include "dpg/decision.hpp"
#include "dpg/rewards.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dpg {

/// Per-zone lockdown degrees for each behavior class.
struct LockdownSpec {
    std::vector<int> healthy;
    std::vector<int> infected;
    std::vector<int> recovered;
    double multiplier = 3.0;
    /// Recovered agents get a_lock = a_max in every zone.
    bool recovered_exempt = false;

    bool operator==(const LockdownSpec&) const = default;
};

struct StoppingRule {
    int horizon = 2000;
    /// Stop once A + I mass drops below this...
    double extinction_threshold = 1e-6;
    /// ...and the policy moved by less than this (sup norm) in the last step.
    double policy_tolerance = 1e-6;
    bool early_stop = true;

    bool operator==(const StoppingRule&) const = default;
};

struct MetricsOptions {
    bool subtract_initial_immunity = false;
    double wave_prominence = 0.01;

    bool operator==(const MetricsOptions&) const = default;
};

enum class InitialPolicy { UniformNoMove };

struct ScenarioConfig {
    std::string name;
    ModelParams params;
    /// Activation benefit o[a]; empty means linear, o[a] = a / a_max.
    std::vector<double> benefit;
    LockdownSpec lockdown;
    /// d[s,z] at day 0, flattened with Dimensions::state_index.
    std::vector<double> initial_distribution;
    InitialPolicy initial_policy = InitialPolicy::UniformNoMove;
    StoppingRule stopping;
    ChoiceRules rules;
    MetricsOptions metrics;

    bool operator==(const ScenarioConfig&) const = default;
};

/// Throws ValidationError if any part of the scenario is inconsistent.
ScenarioConfig validate_scenario(ScenarioConfig cfg);

LockdownLevels lockdown_levels(const ScenarioConfig& cfg);
RewardConfig build_rewards(const ScenarioConfig& cfg);
GameModel build_model(const ScenarioConfig& cfg);
/// Initial policy (projected onto the feasible actions) and distribution.
SocialState initial_social_state(const ScenarioConfig& cfg);

/// The epidemic starts in zone 0 with 2% A and 1% I of that zone's mass;
/// `zone_mass` gives each zone's share of the population.
std::vector<double> seeded_distribution(const std::vector<double>& zone_mass, double asymptomatic = 0.02,
                                        double infected = 0.01);

const std::vector<std::string>& preset_names();
/// Throws ValidationError for an unknown name.
ScenarioConfig preset(std::string_view name);

struct SweepAxis {
    std::string path;
    std::vector<std::string> values;
};
using SweepGrid = std::vector<SweepAxis>;

/// Sets one field of `cfg` from text. Supported paths:
///   params.<beta_A|beta_I|delta_A_I|delta_A_U|delta_I_R|delta_U_R|epsilon|alpha|lambda|eta|c_mig|c_dis>
///   lockdown.a_lock, lockdown.a_lock.<healthy|infected|recovered>, lockdown.multiplier,
///   lockdown.recovered_exempt, horizon, flags.infected_forced_home, flags.healthy_q,
///   metrics.wave_prominence
void apply_override(ScenarioConfig& cfg, std::string_view path, std::string_view value);

struct SweepPoint {
    ScenarioConfig config;
    std::vector<std::pair<std::string, std::string>> assignment;
};

/// Cartesian product of the grid applied to `base`, first axis varying slowest.
std::vector<SweepPoint> sweep_points(const SweepGrid& grid, const ScenarioConfig& base);
std::vector<ScenarioConfig> sweep(const SweepGrid& grid, const ScenarioConfig& base);

/// Several base scenarios sharing one grid.
struct SweepPlan {
    std::vector<ScenarioConfig> bases;
    SweepGrid grid;
};
/// "fig3_sweep" yields the four lockdown families over a_lock 0..6; any other
/// preset yields itself with an empty grid.
SweepPlan sweep_plan(std::string_view preset_name);

std::string scenario_to_json(const ScenarioConfig& cfg);
ScenarioConfig scenario_from_json(std::string_view text);

} // namespace dpg

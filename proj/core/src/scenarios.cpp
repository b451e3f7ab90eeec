#include "dpg/scenarios.hpp"

#include <charconv>
#include <cmath>

namespace dpg {

namespace {

// Calibrated against the single-zone lockdown and two-zone migration studies;
// see README "Calibration".
constexpr double kPresetEpsilon = 0.1;
constexpr HealthyQMode kPresetHealthyQ = HealthyQMode::AssumeSusceptible;

void require_zone_vector(const std::vector<int>& v, const ModelParams& p, std::string_view what)
{
    if (v.size() != static_cast<std::size_t>(p.num_zones)) {
        throw ValidationError("lockdown." + std::string(what) + " needs one entry per zone (" +
                              std::to_string(p.num_zones) + ")");
    }
    for (int level : v) {
        if (level < 0 || level > p.a_max) {
            throw ValidationError("lockdown." + std::string(what) + " entry " + std::to_string(level) +
                                  " outside 0.." + std::to_string(p.a_max));
        }
    }
}

double parse_double(std::string_view path, std::string_view text)
{
    double value = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
        throw ValidationError("value '" + std::string(text) + "' for " + std::string(path) + " is not a number");
    }
    return value;
}

int parse_int(std::string_view path, std::string_view text)
{
    const double value = parse_double(path, text);
    if (value != std::floor(value) || std::abs(value) > 1e9) {
        throw ValidationError("value '" + std::string(text) + "' for " + std::string(path) + " is not an integer");
    }
    return static_cast<int>(value);
}

bool parse_bool(std::string_view path, std::string_view text)
{
    if (text == "true" || text == "1") {
        return true;
    }
    if (text == "false" || text == "0") {
        return false;
    }
    throw ValidationError("value '" + std::string(text) + "' for " + std::string(path) + " is not a boolean");
}

ScenarioConfig single_zone_base(std::string name, double alpha, bool recovered_exempt)
{
    ScenarioConfig cfg;
    cfg.name = std::move(name);
    cfg.params = ModelParams{};
    cfg.params.beta_A = 0.2;
    cfg.params.beta_I = 0.2;
    cfg.params.delta_A_I = 0.08;
    cfg.params.delta_A_U = 0.08;
    cfg.params.delta_I_R = 0.04;
    cfg.params.delta_U_R = 0.0;
    cfg.params.epsilon = kPresetEpsilon;
    cfg.params.num_zones = 1;
    cfg.params.a_max = 6;
    cfg.params.alpha = alpha;
    cfg.params.lambda = 10.0;
    cfg.params.eta = 0.2;
    cfg.params.c_mig = 2.0;
    cfg.params.c_dis = 10.0;
    cfg.lockdown = LockdownSpec{{2}, {2}, {2}, 3.0, recovered_exempt};
    cfg.initial_distribution = seeded_distribution({1.0});
    cfg.rules = ChoiceRules{true, kPresetHealthyQ};
    return cfg;
}

ScenarioConfig migration_preset()
{
    ScenarioConfig cfg = single_zone_base("fig4_migration", 0.9, true);
    cfg.params.num_zones = 2;
    cfg.params.eta = 0.1;
    cfg.params.delta_U_R = 0.01;
    cfg.params.c_mig = 2.0;
    cfg.lockdown = LockdownSpec{{4, 2}, {4, 2}, {4, 2}, 3.0, true};
    cfg.initial_distribution = seeded_distribution({0.9, 0.1});
    return cfg;
}

} // namespace

ScenarioConfig validate_scenario(ScenarioConfig cfg)
{
    cfg.params = validate_params(cfg.params);
    const auto& p = cfg.params;
    require_zone_vector(cfg.lockdown.healthy, p, "healthy");
    require_zone_vector(cfg.lockdown.infected, p, "infected");
    require_zone_vector(cfg.lockdown.recovered, p, "recovered");
    if (!cfg.benefit.empty() && cfg.benefit.size() != static_cast<std::size_t>(p.a_max) + 1) {
        throw ValidationError("benefit needs a_max + 1 entries");
    }
    if (cfg.stopping.horizon <= 0) {
        throw ValidationError("horizon must be positive");
    }
    if (!(cfg.stopping.extinction_threshold >= 0.0) || !(cfg.stopping.policy_tolerance >= 0.0)) {
        throw ValidationError("stopping thresholds must be nonnegative");
    }
    if (!(cfg.metrics.wave_prominence >= 0.0)) {
        throw ValidationError("wave_prominence must be nonnegative");
    }
    StateDistribution(Dimensions(p), cfg.initial_distribution);
    build_rewards(cfg);
    return cfg;
}

LockdownLevels lockdown_levels(const ScenarioConfig& cfg)
{
    const Dimensions dims(cfg.params);
    std::vector<int> levels;
    levels.reserve(kNumBehaviorClasses * dims.num_zones());
    levels.insert(levels.end(), cfg.lockdown.healthy.begin(), cfg.lockdown.healthy.end());
    levels.insert(levels.end(), cfg.lockdown.infected.begin(), cfg.lockdown.infected.end());
    if (cfg.lockdown.recovered_exempt) {
        levels.insert(levels.end(), static_cast<std::size_t>(dims.num_zones()), dims.a_max());
    } else {
        levels.insert(levels.end(), cfg.lockdown.recovered.begin(), cfg.lockdown.recovered.end());
    }
    return LockdownLevels(dims, std::move(levels));
}

RewardConfig build_rewards(const ScenarioConfig& cfg)
{
    BenefitTable benefit = cfg.benefit.empty() ? linear_benefit(cfg.params.a_max) : cfg.benefit;
    CostTable cost = lockdown_cost(lockdown_levels(cfg), benefit, cfg.lockdown.multiplier);
    return validate_rewards(RewardConfig{std::move(benefit), std::move(cost), cfg.params.c_mig, cfg.params.c_dis});
}

GameModel build_model(const ScenarioConfig& cfg)
{
    return GameModel{cfg.params, build_rewards(cfg), cfg.rules};
}

SocialState initial_social_state(const ScenarioConfig& cfg)
{
    const Dimensions dims(cfg.params);
    Policy policy = project_to_feasible(uniform_no_move_policy(cfg.params), cfg.rules);
    return SocialState(std::move(policy), StateDistribution(dims, cfg.initial_distribution));
}

std::vector<double> seeded_distribution(const std::vector<double>& zone_mass, double asymptomatic, double infected)
{
    const Dimensions dims(static_cast<int>(zone_mass.size()), 0);
    std::vector<double> d(dims.num_states(), 0.0);
    for (int z = 0; z < dims.num_zones(); ++z) {
        const double m = zone_mass[static_cast<std::size_t>(z)];
        if (z == 0) {
            d[dims.state_index(InfectionState::A, z)] = asymptomatic * m;
            d[dims.state_index(InfectionState::I, z)] = infected * m;
            d[dims.state_index(InfectionState::S, z)] = (1.0 - asymptomatic - infected) * m;
        } else {
            d[dims.state_index(InfectionState::S, z)] = m;
        }
    }
    return d;
}

const std::vector<std::string>& preset_names()
{
    static const std::vector<std::string> names = {"fig2a", "fig2b", "fig2c", "fig3_sweep", "fig4_migration"};
    return names;
}

ScenarioConfig preset(std::string_view name)
{
    if (name == "fig2a") {
        return single_zone_base("fig2a", 0.0, false);
    }
    if (name == "fig2b") {
        return single_zone_base("fig2b", 0.9, false);
    }
    if (name == "fig2c") {
        return single_zone_base("fig2c", 0.9, true);
    }
    if (name == "fig3_sweep") {
        // Serological testing family; the full four-family plan is sweep_plan().
        ScenarioConfig cfg = single_zone_base("fig3_sweep", 0.9, true);
        cfg.params.delta_U_R = 0.05;
        return cfg;
    }
    if (name == "fig4_migration") {
        return migration_preset();
    }
    throw ValidationError("unknown preset '" + std::string(name) + "'");
}

void apply_override(ScenarioConfig& cfg, std::string_view path, std::string_view value)
{
    auto& p = cfg.params;
    struct ParamField {
        std::string_view name;
        double ModelParams::*field;
    };
    static constexpr ParamField param_fields[] = {
        {"beta_A", &ModelParams::beta_A},       {"beta_I", &ModelParams::beta_I},
        {"delta_A_I", &ModelParams::delta_A_I}, {"delta_A_U", &ModelParams::delta_A_U},
        {"delta_I_R", &ModelParams::delta_I_R}, {"delta_U_R", &ModelParams::delta_U_R},
        {"epsilon", &ModelParams::epsilon},     {"alpha", &ModelParams::alpha},
        {"lambda", &ModelParams::lambda},       {"eta", &ModelParams::eta},
        {"c_mig", &ModelParams::c_mig},         {"c_dis", &ModelParams::c_dis},
    };
    constexpr std::string_view params_prefix = "params.";
    if (path.starts_with(params_prefix)) {
        const auto field = path.substr(params_prefix.size());
        for (const auto& f : param_fields) {
            if (f.name == field) {
                p.*(f.field) = parse_double(path, value);
                return;
            }
        }
    } else if (path == "lockdown.a_lock") {
        const int level = parse_int(path, value);
        const auto zones = static_cast<std::size_t>(p.num_zones);
        cfg.lockdown.healthy.assign(zones, level);
        cfg.lockdown.infected.assign(zones, level);
        cfg.lockdown.recovered.assign(zones, level);
        return;
    } else if (path == "lockdown.a_lock.healthy" || path == "lockdown.a_lock.infected" ||
               path == "lockdown.a_lock.recovered") {
        const int level = parse_int(path, value);
        const auto cls = parse_behavior_class(path.substr(std::string_view("lockdown.a_lock.").size()));
        auto& v = cls == BehaviorClass::Healthy    ? cfg.lockdown.healthy
                  : cls == BehaviorClass::Infected ? cfg.lockdown.infected
                                                   : cfg.lockdown.recovered;
        v.assign(static_cast<std::size_t>(p.num_zones), level);
        return;
    } else if (path == "lockdown.multiplier") {
        cfg.lockdown.multiplier = parse_double(path, value);
        return;
    } else if (path == "lockdown.recovered_exempt") {
        cfg.lockdown.recovered_exempt = parse_bool(path, value);
        return;
    } else if (path == "horizon") {
        cfg.stopping.horizon = parse_int(path, value);
        return;
    } else if (path == "flags.infected_forced_home") {
        cfg.rules.infected_forced_home = parse_bool(path, value);
        return;
    } else if (path == "flags.healthy_q") {
        cfg.rules.healthy_q = parse_healthy_q_mode(value);
        return;
    } else if (path == "metrics.wave_prominence") {
        cfg.metrics.wave_prominence = parse_double(path, value);
        return;
    }
    throw ValidationError("invalid field path '" + std::string(path) + "'");
}

std::vector<SweepPoint> sweep_points(const SweepGrid& grid, const ScenarioConfig& base)
{
    std::vector<SweepPoint> points{SweepPoint{base, {}}};
    for (const auto& axis : grid) {
        if (axis.values.empty()) {
            throw ValidationError("sweep axis '" + axis.path + "' has no values");
        }
        std::vector<SweepPoint> next;
        next.reserve(points.size() * axis.values.size());
        for (const auto& point : points) {
            for (const auto& value : axis.values) {
                SweepPoint p = point;
                apply_override(p.config, axis.path, value);
                p.assignment.emplace_back(axis.path, value);
                next.push_back(std::move(p));
            }
        }
        points = std::move(next);
    }
    return points;
}

std::vector<ScenarioConfig> sweep(const SweepGrid& grid, const ScenarioConfig& base)
{
    std::vector<ScenarioConfig> out;
    for (auto& point : sweep_points(grid, base)) {
        out.push_back(std::move(point.config));
    }
    return out;
}

SweepPlan sweep_plan(std::string_view preset_name)
{
    if (preset_name != "fig3_sweep") {
        return SweepPlan{{preset(preset_name)}, {}};
    }
    ScenarioConfig serology = preset("fig3_sweep");
    serology.name = "fig3_serology";
    SweepAxis a_lock{"lockdown.a_lock", {}};
    for (int level = 0; level <= 6; ++level) {
        a_lock.values.push_back(std::to_string(level));
    }
    return SweepPlan{{preset("fig2a"), preset("fig2b"), preset("fig2c"), std::move(serology)}, {std::move(a_lock)}};
}

} // namespace dpg

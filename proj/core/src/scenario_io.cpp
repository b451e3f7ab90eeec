// JSON form of ScenarioConfig. Every section except "params.num_zones" and
// "initial_distribution" is optional and falls back to the struct defaults.

#include "dpg/scenarios.hpp"

#include <json.hpp>

namespace dpg {

namespace {

using json = nlohmann::ordered_json;

json distribution_to_json(const std::vector<double>& flat, const Dimensions& dims)
{
    json out = json::object();
    for (auto s : kAllInfectionStates) {
        json zones = json::array();
        for (int z = 0; z < dims.num_zones(); ++z) {
            zones.push_back(flat[dims.state_index(s, z)]);
        }
        out[std::string(to_string(s))] = std::move(zones);
    }
    return out;
}

std::vector<double> distribution_from_json(const json& j, const Dimensions& dims)
{
    if (!j.is_object()) {
        throw ValidationError("initial_distribution must be an object keyed by infection state");
    }
    std::vector<double> flat(dims.num_states(), 0.0);
    for (const auto& [key, zones] : j.items()) {
        const auto s = parse_infection_state(key);
        if (!zones.is_array() || zones.size() != static_cast<std::size_t>(dims.num_zones())) {
            throw ValidationError("initial_distribution." + key + " needs one entry per zone");
        }
        for (int z = 0; z < dims.num_zones(); ++z) {
            flat[dims.state_index(s, z)] = zones.at(static_cast<std::size_t>(z)).get<double>();
        }
    }
    return flat;
}

template <typename T>
void read_optional(const json& j, const char* key, T& out)
{
    if (j.contains(key)) {
        out = j.at(key).get<T>();
    }
}

} // namespace

std::string scenario_to_json(const ScenarioConfig& cfg)
{
    const auto& p = cfg.params;
    json j;
    j["name"] = cfg.name;
    j["params"] = {{"beta_A", p.beta_A},       {"beta_I", p.beta_I},       {"delta_A_I", p.delta_A_I},
                   {"delta_A_U", p.delta_A_U}, {"delta_I_R", p.delta_I_R}, {"delta_U_R", p.delta_U_R},
                   {"epsilon", p.epsilon},     {"num_zones", p.num_zones}, {"a_max", p.a_max},
                   {"alpha", p.alpha},         {"lambda", p.lambda},       {"eta", p.eta},
                   {"c_mig", p.c_mig},         {"c_dis", p.c_dis}};
    if (!cfg.benefit.empty()) {
        j["benefit"] = cfg.benefit;
    }
    j["lockdown"] = {{"healthy", cfg.lockdown.healthy},
                     {"infected", cfg.lockdown.infected},
                     {"recovered", cfg.lockdown.recovered},
                     {"multiplier", cfg.lockdown.multiplier},
                     {"recovered_exempt", cfg.lockdown.recovered_exempt}};
    const Dimensions dims(std::max(p.num_zones, 1), std::max(p.a_max, 0));
    j["initial_distribution"] = distribution_to_json(cfg.initial_distribution, dims);
    j["initial_policy"] = "uniform_no_move";
    j["stopping"] = {{"horizon", cfg.stopping.horizon},
                     {"extinction_threshold", cfg.stopping.extinction_threshold},
                     {"policy_tolerance", cfg.stopping.policy_tolerance},
                     {"early_stop", cfg.stopping.early_stop}};
    j["flags"] = {{"infected_forced_home", cfg.rules.infected_forced_home},
                  {"healthy_q", std::string(to_string(cfg.rules.healthy_q))}};
    j["metrics"] = {{"subtract_initial_immunity", cfg.metrics.subtract_initial_immunity},
                    {"wave_prominence", cfg.metrics.wave_prominence}};
    return j.dump(2);
}

ScenarioConfig scenario_from_json(std::string_view text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("scenario file is not valid JSON: ") + e.what());
    }
    try {
        ScenarioConfig cfg;
        read_optional(j, "name", cfg.name);
        if (!j.contains("params")) {
            throw ValidationError("scenario file needs a params section");
        }
        const auto& jp = j.at("params");
        auto& p = cfg.params;
        read_optional(jp, "beta_A", p.beta_A);
        read_optional(jp, "beta_I", p.beta_I);
        read_optional(jp, "delta_A_I", p.delta_A_I);
        read_optional(jp, "delta_A_U", p.delta_A_U);
        read_optional(jp, "delta_I_R", p.delta_I_R);
        read_optional(jp, "delta_U_R", p.delta_U_R);
        read_optional(jp, "epsilon", p.epsilon);
        read_optional(jp, "num_zones", p.num_zones);
        read_optional(jp, "a_max", p.a_max);
        read_optional(jp, "alpha", p.alpha);
        read_optional(jp, "lambda", p.lambda);
        read_optional(jp, "eta", p.eta);
        read_optional(jp, "c_mig", p.c_mig);
        read_optional(jp, "c_dis", p.c_dis);
        validate_params(p);
        const Dimensions dims(p);

        read_optional(j, "benefit", cfg.benefit);

        const auto zones = static_cast<std::size_t>(p.num_zones);
        cfg.lockdown.healthy.assign(zones, p.a_max);
        cfg.lockdown.infected.assign(zones, p.a_max);
        cfg.lockdown.recovered.assign(zones, p.a_max);
        if (j.contains("lockdown")) {
            const auto& jl = j.at("lockdown");
            read_optional(jl, "healthy", cfg.lockdown.healthy);
            if (jl.contains("healthy") && !jl.contains("infected")) {
                cfg.lockdown.infected = cfg.lockdown.healthy;
            }
            read_optional(jl, "infected", cfg.lockdown.infected);
            read_optional(jl, "recovered", cfg.lockdown.recovered);
            read_optional(jl, "multiplier", cfg.lockdown.multiplier);
            read_optional(jl, "recovered_exempt", cfg.lockdown.recovered_exempt);
        }

        if (!j.contains("initial_distribution")) {
            throw ValidationError("scenario file needs an initial_distribution section");
        }
        cfg.initial_distribution = distribution_from_json(j.at("initial_distribution"), dims);

        if (j.contains("initial_policy") && j.at("initial_policy").get<std::string>() != "uniform_no_move") {
            throw ValidationError("initial_policy must be \"uniform_no_move\"");
        }
        if (j.contains("stopping")) {
            const auto& js = j.at("stopping");
            read_optional(js, "horizon", cfg.stopping.horizon);
            read_optional(js, "extinction_threshold", cfg.stopping.extinction_threshold);
            read_optional(js, "policy_tolerance", cfg.stopping.policy_tolerance);
            read_optional(js, "early_stop", cfg.stopping.early_stop);
        }
        if (j.contains("flags")) {
            const auto& jf = j.at("flags");
            read_optional(jf, "infected_forced_home", cfg.rules.infected_forced_home);
            if (jf.contains("healthy_q")) {
                cfg.rules.healthy_q = parse_healthy_q_mode(jf.at("healthy_q").get<std::string>());
            }
        }
        if (j.contains("metrics")) {
            const auto& jm = j.at("metrics");
            read_optional(jm, "subtract_initial_immunity", cfg.metrics.subtract_initial_immunity);
            read_optional(jm, "wave_prominence", cfg.metrics.wave_prominence);
        }
        return validate_scenario(std::move(cfg));
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed scenario file: ") + e.what());
    }
}

} // namespace dpg

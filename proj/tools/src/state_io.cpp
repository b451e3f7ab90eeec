#include "dpg/cli/state_io.hpp"

#include <json.hpp>

#include <charconv>
#include <system_error>

namespace dpg::cli {

namespace {

using json = nlohmann::ordered_json;

std::vector<double> distribution_block(const json& j, const Dimensions& dims)
{
    if (!j.is_object()) {
        throw ValidationError("distribution must be an object keyed by infection state");
    }
    std::vector<double> flat(dims.num_states(), 0.0);
    for (const auto& [key, zones] : j.items()) {
        const auto s = parse_infection_state(key);
        if (!zones.is_array() || zones.size() != static_cast<std::size_t>(dims.num_zones())) {
            throw ValidationError("dimension mismatch: distribution." + key + " needs " +
                                  std::to_string(dims.num_zones()) + " zone entries");
        }
        for (int z = 0; z < dims.num_zones(); ++z) {
            flat[dims.state_index(s, z)] = zones.at(static_cast<std::size_t>(z)).get<double>();
        }
    }
    return flat;
}

} // namespace

std::string social_state_to_json(const SocialState& social)
{
    const auto& dims = social.dims();
    json j;
    j["num_zones"] = dims.num_zones();
    j["a_max"] = dims.a_max();
    json dist = json::object();
    for (auto s : kAllInfectionStates) {
        json zones = json::array();
        for (int z = 0; z < dims.num_zones(); ++z) {
            zones.push_back(social.dist(s, z));
        }
        dist[std::string(to_string(s))] = std::move(zones);
    }
    j["distribution"] = std::move(dist);
    json policy = json::object();
    for (auto c : kAllBehaviorClasses) {
        json rows = json::array();
        for (int z = 0; z < dims.num_zones(); ++z) {
            const auto row = social.policy.class_row(c, z);
            rows.push_back(std::vector<double>(row.begin(), row.end()));
        }
        policy[std::string(to_string(c))] = std::move(rows);
    }
    j["policy"] = std::move(policy);
    return j.dump(2) + "\n";
}

SocialState social_state_from_json(std::string_view text, const Dimensions& dims)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("social-state file is not valid JSON: ") + e.what());
    }
    try {
        const int zones = j.at("num_zones").get<int>();
        const int a_max = j.at("a_max").get<int>();
        if (zones != dims.num_zones() || a_max != dims.a_max()) {
            throw ValidationError("dimension mismatch: social state has Z=" + std::to_string(zones) +
                                  ", a_max=" + std::to_string(a_max) + "; config has Z=" +
                                  std::to_string(dims.num_zones()) + ", a_max=" + std::to_string(dims.a_max()));
        }
        auto mass = distribution_block(j.at("distribution"), dims);

        const auto& jp = j.at("policy");
        std::vector<double> rows;
        rows.reserve(kNumBehaviorClasses * static_cast<std::size_t>(zones) * dims.num_actions());
        for (auto c : kAllBehaviorClasses) {
            const auto& block = jp.at(std::string(to_string(c)));
            if (!block.is_array() || block.size() != static_cast<std::size_t>(zones)) {
                throw ValidationError("dimension mismatch: policy." + std::string(to_string(c)) + " needs " +
                                      std::to_string(zones) + " rows");
            }
            for (const auto& r : block) {
                const auto row = r.get<std::vector<double>>();
                if (row.size() != dims.num_actions()) {
                    throw ValidationError("dimension mismatch: policy rows need " +
                                          std::to_string(dims.num_actions()) + " entries");
                }
                rows.insert(rows.end(), row.begin(), row.end());
            }
        }
        return SocialState(Policy(dims, std::move(rows)), StateDistribution(dims, std::move(mass)));
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed social-state file: ") + e.what());
    }
}

std::vector<double> parse_mass_tokens(const std::vector<std::string>& tokens, const Dimensions& dims)
{
    std::vector<double> flat(dims.num_states(), 0.0);
    for (const auto& tok : tokens) {
        const auto colon = tok.find(':');
        const auto eq = tok.find('=');
        if (colon == std::string::npos || eq == std::string::npos || eq < colon) {
            throw ValidationError("mass token must look like S:0=0.5, got '" + tok + "'");
        }
        const auto s = parse_infection_state(std::string_view(tok).substr(0, colon));
        int zone = -1;
        const char* zb = tok.data() + colon + 1;
        const char* ze = tok.data() + eq;
        auto zr = std::from_chars(zb, ze, zone);
        if (zr.ec != std::errc{} || zr.ptr != ze || zone < 0 || zone >= dims.num_zones()) {
            throw ValidationError("mass token '" + tok + "': zone must be in 0.." +
                                  std::to_string(dims.num_zones() - 1));
        }
        double value = 0.0;
        const char* vb = tok.data() + eq + 1;
        const char* ve = tok.data() + tok.size();
        auto vr = std::from_chars(vb, ve, value);
        if (vr.ec != std::errc{} || vr.ptr != ve || !(value >= 0.0)) {
            throw ValidationError("mass token '" + tok + "': mass must be a nonnegative number");
        }
        flat[dims.state_index(s, zone)] += value;
    }
    return flat;
}

std::vector<double> parse_mass_json(std::string_view text, const Dimensions& dims)
{
    try {
        auto j = json::parse(text);
        return distribution_block(j.contains("distribution") ? j.at("distribution") : j, dims);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed mass split file: ") + e.what());
    }
}

} // namespace dpg::cli

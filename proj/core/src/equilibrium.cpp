#include "dpg/equilibrium.hpp"

#include "dpg/epidemic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dpg {

namespace {

bool contains(const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

} // namespace

bool ZoneClassification::in_z_bar(InfectionState s, int zone) const { return contains(z_bar[rank(s)], zone); }

bool ZoneClassification::in_z_zero(InfectionState s, int zone) const { return contains(z_zero[rank(s)], zone); }

std::vector<int> activation_argmax(InfectionState s, int zone, const RewardConfig& cfg)
{
    const auto& dims = cfg.dims();
    double best = cfg.activation_reward(s, zone, 0);
    for (int a = 1; a <= dims.a_max(); ++a) {
        best = std::max(best, cfg.activation_reward(s, zone, a));
    }
    std::vector<int> out;
    for (int a = 0; a <= dims.a_max(); ++a) {
        if (cfg.activation_reward(s, zone, a) >= best - kTieTolerance) {
            out.push_back(a);
        }
    }
    return out;
}

std::vector<int> dominant_activation(int zone, const RewardConfig& cfg)
{
    return activation_argmax(InfectionState::R, zone, cfg);
}

ZoneClassification classify_zones(const RewardConfig& cfg, const ModelParams& p)
{
    if (!(p.c_mig >= 0.0)) {
        throw ValidationError("zone classification needs c_mig >= 0");
    }
    if (!(p.alpha >= 0.0 && p.alpha < 1.0)) {
        throw ValidationError("zone classification needs 0 <= alpha < 1");
    }
    const auto& dims = cfg.dims();
    ZoneClassification zc{.dims = dims};
    zc.alpha = p.alpha;
    zc.c_mig = p.c_mig;
    if (p.alpha > 0.0) {
        zc.threshold = (1.0 - p.alpha) / p.alpha * p.c_mig;
    }
    zc.r_act_star.assign(dims.num_states(), 0.0);
    zc.a_star.assign(dims.num_states(), {});

    for (auto s : kAllInfectionStates) {
        const auto si = rank(s);
        double r_bar = -std::numeric_limits<double>::infinity();
        for (int z = 0; z < dims.num_zones(); ++z) {
            const auto degrees = activation_argmax(s, z, cfg);
            const double best = cfg.activation_reward(s, z, degrees.front());
            zc.r_act_star[dims.state_index(s, z)] = best;
            zc.a_star[dims.state_index(s, z)] = degrees;
            r_bar = std::max(r_bar, best);
        }
        zc.r_bar[si] = r_bar;
        for (int z = 0; z < dims.num_zones(); ++z) {
            const double gap = r_bar - zc.r_act_star[dims.state_index(s, z)];
            if (gap <= kTieTolerance) {
                zc.z_bar[si].push_back(z);
            } else if (gap > zc.threshold) {
                zc.z_zero[si].push_back(z);
            } else {
                zc.z_n[si].push_back(z);
            }
        }
    }
    return zc;
}

SocialState construct_equilibrium(const ZoneClassification& zc, const std::vector<double>& mass,
                                  const ChoiceRules& rules)
{
    const auto& dims = zc.dims;
    if (mass.size() != dims.num_states()) {
        throw ValidationError("mass split needs " + std::to_string(dims.num_states()) + " entries");
    }
    for (int z = 0; z < dims.num_zones(); ++z) {
        for (auto s : kAllInfectionStates) {
            const double m = mass[dims.state_index(s, z)];
            if (m == 0.0) {
                continue;
            }
            if (s == InfectionState::A || s == InfectionState::I || s == InfectionState::U) {
                throw ValidationError("mass split violates d[A,z] = d[I,z] = d[U,z] = 0 (state " +
                                      std::string(to_string(s)) + ", zone " + std::to_string(z) + ")");
            }
            if (zc.in_z_zero(s, z)) {
                throw ValidationError("mass split violates d[s, z ∈ Z⁰_s] = 0 (state " + std::string(to_string(s)) +
                                      ", zone " + std::to_string(z) + ")");
            }
        }
    }
    StateDistribution dist(dims, mass);

    std::vector<double> rows(kNumBehaviorClasses * dims.num_zones() * dims.num_actions(), 0.0);
    for (auto c : kAllBehaviorClasses) {
        const InfectionState representative = c == BehaviorClass::Healthy    ? InfectionState::S
                                              : c == BehaviorClass::Infected ? InfectionState::I
                                                                             : InfectionState::R;
        for (int z = 0; z < dims.num_zones(); ++z) {
            std::vector<int> degrees;
            for (int a : zc.best_degrees(representative, z)) {
                if (rules.feasible(c, ActionIndex{a, z})) {
                    degrees.push_back(a);
                }
            }
            if (degrees.empty()) {
                degrees.push_back(0);
            }
            const std::vector<int> targets =
                zc.in_z_zero(representative, z) ? zc.z_bar[rank(representative)] : std::vector<int>{z};
            const double share = 1.0 / static_cast<double>(degrees.size() * targets.size());
            const std::size_t offset = Policy::row_offset(dims, c, z);
            for (int target : targets) {
                for (int a : degrees) {
                    rows[offset + dims.action_index(a, target)] = share;
                }
            }
        }
    }
    return SocialState(Policy(dims, std::move(rows)), std::move(dist));
}

EquilibriumReport check_equilibrium(const SocialState& social, const GameModel& model, double tol)
{
    const auto& dims = social.dims();
    const auto& p = model.params;
    const auto kernel = transition_matrix(social, p);
    const auto reward = expected_reward(social.policy, model.rewards);
    const auto value = value_function(social, kernel, reward, p);
    const auto q = q_function(social, value, model.rewards, p);

    EquilibriumReport report;
    report.tolerance = tol;
    report.state_gaps.assign(dims.num_states(), 0.0);
    for (int z = 0; z < dims.num_zones(); ++z) {
        for (auto s : kAllInfectionStates) {
            const auto best = best_response(q, s, z, model.rules);
            const auto row = q.row(s, z);
            const auto pi = social.policy.row(s, z);
            double played = 0.0;
            for (std::size_t j = 0; j < row.size(); ++j) {
                played += pi[j] * row[j];
            }
            const double gap = std::max(0.0, best.value - played);
            report.state_gaps[dims.state_index(s, z)] = gap;
            if (social.dist(s, z) > 0.0) {
                if (gap > report.se1_gap) {
                    report.se1_gap = gap;
                    report.worst_state = {s, z};
                }
            } else {
                report.se1_gap_unoccupied = std::max(report.se1_gap_unoccupied, gap);
            }
        }
    }
    const auto next = kernel.propagate(social.dist);
    const auto current = social.dist.values();
    for (std::size_t i = 0; i < next.size(); ++i) {
        report.se2_gap = std::max(report.se2_gap, std::abs(next[i] - current[i]));
    }
    report.verdict = report.se1_gap <= tol && report.se2_gap <= tol;
    return report;
}

} // namespace dpg

#include "dpg/rewards.hpp"

#include <cmath>
#include <string>

namespace dpg {

BenefitTable linear_benefit(int a_max)
{
    if (a_max < 1) {
        throw ValidationError("linear benefit needs a_max >= 1");
    }
    BenefitTable o(static_cast<std::size_t>(a_max) + 1);
    for (int a = 0; a <= a_max; ++a) {
        o[static_cast<std::size_t>(a)] = static_cast<double>(a) / a_max;
    }
    return o;
}

LockdownLevels::LockdownLevels(Dimensions dims, std::vector<int> levels) : dims_(dims), levels_(std::move(levels))
{
    if (levels_.size() != kNumBehaviorClasses * static_cast<std::size_t>(dims_.num_zones())) {
        throw ValidationError("lockdown levels need one entry per behavior class and zone");
    }
    for (int level : levels_) {
        if (level < 0 || level > dims_.a_max()) {
            throw ValidationError("lockdown level " + std::to_string(level) + " outside 0.." +
                                  std::to_string(dims_.a_max()));
        }
    }
}

LockdownLevels LockdownLevels::uniform(Dimensions dims, int level)
{
    return LockdownLevels(dims, std::vector<int>(kNumBehaviorClasses * dims.num_zones(), level));
}

CostTable::CostTable(Dimensions dims, std::vector<double> costs) : dims_(dims), costs_(std::move(costs))
{
    if (costs_.size() != kNumBehaviorClasses * static_cast<std::size_t>(dims_.num_zones()) *
                             static_cast<std::size_t>(dims_.num_degrees())) {
        throw ValidationError("cost table has the wrong size");
    }
}

CostTable CostTable::zero(Dimensions dims)
{
    return CostTable(dims, std::vector<double>(kNumBehaviorClasses * dims.num_zones() * dims.num_degrees(), 0.0));
}

namespace {

void check_cost_ordering(const CostTable& c)
{
    const auto& dims = c.dims();
    for (int z = 0; z < dims.num_zones(); ++z) {
        for (int a = 0; a <= dims.a_max(); ++a) {
            const double infected = c(BehaviorClass::Infected, z, a);
            const double healthy = c(BehaviorClass::Healthy, z, a);
            const double recovered = c(BehaviorClass::Recovered, z, a);
            if (!(infected >= healthy && healthy >= recovered)) {
                throw ValidationError("lockdown cost violates c[I,z,a] >= c[S,z,a] >= c[R,z,a] at zone " +
                                      std::to_string(z) + ", degree " + std::to_string(a));
            }
        }
    }
}

} // namespace

CostTable lockdown_cost(const LockdownLevels& a_lock, const BenefitTable& benefit, double multiplier)
{
    const auto& dims = a_lock.dims();
    if (benefit.size() != static_cast<std::size_t>(dims.num_degrees())) {
        throw ValidationError("benefit table size does not match a_max");
    }
    if (!(multiplier >= 0.0) || !std::isfinite(multiplier)) {
        throw ValidationError("lockdown multiplier must be a nonnegative number");
    }
    std::vector<double> costs;
    costs.reserve(kNumBehaviorClasses * dims.num_zones() * dims.num_degrees());
    for (auto c : kAllBehaviorClasses) {
        for (int z = 0; z < dims.num_zones(); ++z) {
            for (int a = 0; a <= dims.a_max(); ++a) {
                costs.push_back(a <= a_lock(c, z) ? 0.0 : multiplier * benefit[static_cast<std::size_t>(a)]);
            }
        }
    }
    CostTable table(dims, std::move(costs));
    check_cost_ordering(table);
    return table;
}

RewardConfig validate_rewards(RewardConfig cfg)
{
    const auto& dims = cfg.dims();
    if (cfg.benefit.size() != static_cast<std::size_t>(dims.num_degrees())) {
        throw ValidationError("benefit table size does not match a_max");
    }
    if (cfg.benefit.front() != 0.0) {
        throw ValidationError("benefit o[0] must be 0");
    }
    for (std::size_t a = 1; a < cfg.benefit.size(); ++a) {
        if (!(cfg.benefit[a] >= cfg.benefit[a - 1])) {
            throw ValidationError("benefit o[a] must be nondecreasing in a");
        }
    }
    for (auto c : kAllBehaviorClasses) {
        for (int z = 0; z < dims.num_zones(); ++z) {
            for (int a = 0; a <= dims.a_max(); ++a) {
                if (!(cfg.cost(c, z, a) >= 0.0)) {
                    throw ValidationError("lockdown cost must be nonnegative");
                }
                if (a > 0 && cfg.cost(c, z, a) < cfg.cost(c, z, a - 1)) {
                    throw ValidationError("lockdown cost must be nondecreasing in a");
                }
            }
        }
    }
    check_cost_ordering(cfg.cost);
    if (!(cfg.c_mig >= 0.0) || !(cfg.c_dis >= 0.0)) {
        throw ValidationError("c_mig and c_dis must be nonnegative");
    }
    return cfg;
}

double immediate_reward(InfectionState s, int zone, int degree, int target, const RewardConfig& cfg)
{
    double r = cfg.activation_reward(s, zone, degree);
    if (target != zone) {
        r -= cfg.c_mig;
    }
    if (s == InfectionState::I) {
        r -= cfg.c_dis;
    }
    return r;
}

std::vector<double> expected_reward(const Policy& policy, const RewardConfig& cfg)
{
    const auto& dims = policy.dims();
    std::vector<double> out(dims.num_states(), 0.0);
    for (int z = 0; z < dims.num_zones(); ++z) {
        for (auto s : kAllInfectionStates) {
            const auto row = policy.row(s, z);
            double sum = 0.0;
            for (std::size_t j = 0; j < row.size(); ++j) {
                if (row[j] != 0.0) {
                    const auto action = dims.action_at(j);
                    sum += row[j] * immediate_reward(s, z, action.degree, action.target, cfg);
                }
            }
            out[dims.state_index(s, z)] = sum;
        }
    }
    return out;
}

} // namespace dpg

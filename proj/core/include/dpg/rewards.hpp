#pragma once

// Immediate reward tables: activation benefit, lockdown cost, migration cost
// and illness discomfort.

#include "dpg/core.hpp"

#include <vector>

namespace dpg {

using BenefitTable = std::vector<double>;

/// o[a] = a / a_max. Throws ValidationError for a_max = 0.
BenefitTable linear_benefit(int a_max);

/// Maximum allowed activation degree per (behavior class, zone).
class LockdownLevels {
public:
    LockdownLevels(Dimensions dims, std::vector<int> levels);
    /// Same level for every class and zone.
    static LockdownLevels uniform(Dimensions dims, int level);

    const Dimensions& dims() const { return dims_; }
    int operator()(BehaviorClass c, int zone) const
    {
        return levels_[rank(c) * static_cast<std::size_t>(dims_.num_zones()) + static_cast<std::size_t>(zone)];
    }
    int operator()(InfectionState s, int zone) const { return (*this)(behavior_class(s), zone); }

private:
    Dimensions dims_;
    std::vector<int> levels_;
};

/// Lockdown cost c[s,z,a]. S, A and U share one table per zone.
class CostTable {
public:
    /// `costs` is laid out as (class, zone, degree).
    CostTable(Dimensions dims, std::vector<double> costs);
    static CostTable zero(Dimensions dims);

    const Dimensions& dims() const { return dims_; }
    double operator()(BehaviorClass c, int zone, int degree) const
    {
        return costs_[(rank(c) * static_cast<std::size_t>(dims_.num_zones()) + static_cast<std::size_t>(zone)) *
                          static_cast<std::size_t>(dims_.num_degrees()) +
                      static_cast<std::size_t>(degree)];
    }
    double operator()(InfectionState s, int zone, int degree) const
    {
        return (*this)(behavior_class(s), zone, degree);
    }

private:
    Dimensions dims_;
    std::vector<double> costs_;
};

/// c[s,z,a] = 0 if a <= a_lock[s,z], multiplier * o[a] otherwise. Rejects
/// levels outside 0..a_max and tables that break the ordering
/// c[I] >= c[S]=c[A]=c[U] >= c[R].
CostTable lockdown_cost(const LockdownLevels& a_lock, const BenefitTable& benefit, double multiplier = 3.0);

struct RewardConfig {
    BenefitTable benefit;
    CostTable cost;
    double c_mig = 0.0;
    double c_dis = 0.0;

    const Dimensions& dims() const { return cost.dims(); }
    /// o[a] - c[s,z,a]
    double activation_reward(InfectionState s, int zone, int degree) const
    {
        return benefit[static_cast<std::size_t>(degree)] - cost(s, zone, degree);
    }
};

/// Checks o[0] = 0, o nondecreasing, c nonnegative and nondecreasing in a,
/// and the class ordering of c.
RewardConfig validate_rewards(RewardConfig cfg);

double immediate_reward(InfectionState s, int zone, int degree, int target, const RewardConfig& cfg);
inline double immediate_reward(StateIndex state, ActionIndex action, const RewardConfig& cfg)
{
    return immediate_reward(state.state, state.zone, action.degree, action.target, cfg);
}

/// R[s,z](pi), flattened with Dimensions::state_index.
std::vector<double> expected_reward(const Policy& policy, const RewardConfig& cfg);

} // namespace dpg

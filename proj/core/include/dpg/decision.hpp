#pragma once

// Agent-side computations at a frozen social state: value function,
// single-stage-deviation Q, best response, logit choice and inertial update.

#include "dpg/core.hpp"
#include "dpg/epidemic.hpp"
#include "dpg/rewards.hpp"

#include <span>
#include <vector>

namespace dpg {

inline constexpr double kTieTolerance = 1e-9;

/// Which Q drives the shared S/A/U policy row.
enum class HealthyQMode {
    Belief,            ///< posterior-weighted mix of Q[S], Q[A], Q[U] in the zone
    AssumeSusceptible, ///< Q[S] only
};

std::string_view to_string(HealthyQMode mode);
HealthyQMode parse_healthy_q_mode(std::string_view name);

struct ChoiceRules {
    /// Restricts symptomatic agents to degree 0 (they may still move).
    bool infected_forced_home = true;
    HealthyQMode healthy_q = HealthyQMode::Belief;

    static ChoiceRules unrestricted() { return {false, HealthyQMode::Belief}; }

    bool feasible(BehaviorClass c, ActionIndex action) const
    {
        return !(infected_forced_home && c == BehaviorClass::Infected && action.degree != 0);
    }
    bool feasible(InfectionState s, ActionIndex action) const { return feasible(behavior_class(s), action); }

    bool operator==(const ChoiceRules&) const = default;
};

/// Everything an agent needs to evaluate a social state.
struct GameModel {
    ModelParams params;
    RewardConfig rewards;
    ChoiceRules rules;
};

/// Moves the mass of infeasible actions (a, z~) onto (0, z~).
Policy project_to_feasible(const Policy& policy, const ChoiceRules& rules);

class ValueTable {
public:
    ValueTable(Dimensions dims, std::vector<double> values);

    const Dimensions& dims() const { return dims_; }
    double operator()(InfectionState s, int zone) const { return values_[dims_.state_index(s, zone)]; }
    std::span<const double> values() const { return values_; }

private:
    Dimensions dims_;
    std::vector<double> values_;
};

/// max_i |((I - alpha P) V - R)_i|
double bellman_residual(const TransitionKernel& kernel, std::span<const double> reward, const ValueTable& value,
                        double alpha);

/// Solves (I - alpha P) V = R directly. Throws NumericalError if the residual
/// exceeds 1e-10.
ValueTable value_function(const SocialState& social, const TransitionKernel& kernel, std::span<const double> reward,
                          const ModelParams& p);

class QTable {
public:
    QTable(Dimensions dims, std::vector<double> values);

    const Dimensions& dims() const { return dims_; }
    std::span<const double> row(InfectionState s, int zone) const
    {
        return {values_.data() + dims_.state_index(s, zone) * dims_.num_actions(), dims_.num_actions()};
    }
    double operator()(InfectionState s, int zone, ActionIndex action) const
    {
        return row(s, zone)[dims_.action_index(action)];
    }
    std::span<const double> values() const { return values_; }

private:
    Dimensions dims_;
    std::vector<double> values_;
};

/// Q[s,z,a,z~] = r[s,z,a,z~] + alpha * sum p[s+,z+ | s,z,a,z~] V[s+,z+],
/// using the per-action transition at the social state.
QTable q_function(const SocialState& social, const ValueTable& value, const RewardConfig& cfg,
                  const ModelParams& p);

struct BestResponse {
    std::vector<std::size_t> actions; ///< flat action indices within kTieTolerance of the max
    double value = 0.0;               ///< the max
    std::vector<double> mixture;      ///< uniform distribution over `actions`, a best-response certificate
};

BestResponse best_response(const QTable& q, InfectionState s, int zone,
                           const ChoiceRules& rules = ChoiceRules::unrestricted());

/// The Q row driving the shared healthy policy row of `zone`.
std::vector<double> healthy_q_row(const QTable& q, const StateDistribution& d, int zone, HealthyQMode mode);

/// Softmax of lambda * q over entries with feasible[j] set; infeasible entries
/// get probability 0.
std::vector<double> logit_row(std::span<const double> q, double lambda, std::span<const bool> feasible);

Policy logit_choice(const QTable& q, const StateDistribution& d, const ModelParams& p, const ChoiceRules& rules);

/// (1 - eta) * current + eta * target.
Policy policy_update(const Policy& current, const Policy& target, double eta);

} // namespace dpg

#include "dpg/decision.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

namespace dpg {

std::string_view to_string(HealthyQMode mode)
{
    return mode == HealthyQMode::Belief ? "belief" : "assume_susceptible";
}

HealthyQMode parse_healthy_q_mode(std::string_view name)
{
    if (name == "belief") {
        return HealthyQMode::Belief;
    }
    if (name == "assume_susceptible") {
        return HealthyQMode::AssumeSusceptible;
    }
    throw ValidationError("unknown healthy_q mode '" + std::string(name) + "' (belief | assume_susceptible)");
}

Policy project_to_feasible(const Policy& policy, const ChoiceRules& rules)
{
    const auto& dims = policy.dims();
    std::vector<double> rows(policy.values().begin(), policy.values().end());
    for (auto c : kAllBehaviorClasses) {
        for (int z = 0; z < dims.num_zones(); ++z) {
            double* row = rows.data() + Policy::row_offset(dims, c, z);
            for (std::size_t j = 0; j < dims.num_actions(); ++j) {
                const auto action = dims.action_at(j);
                if (!rules.feasible(c, action) && row[j] != 0.0) {
                    row[dims.action_index(0, action.target)] += row[j];
                    row[j] = 0.0;
                }
            }
        }
    }
    return Policy(dims, std::move(rows));
}

ValueTable::ValueTable(Dimensions dims, std::vector<double> values) : dims_(dims), values_(std::move(values))
{
    if (values_.size() != dims_.num_states()) {
        throw ValidationError("value table has the wrong size");
    }
}

double bellman_residual(const TransitionKernel& kernel, std::span<const double> reward, const ValueTable& value,
                        double alpha)
{
    const auto n = static_cast<Eigen::Index>(reward.size());
    const Eigen::Map<const Eigen::VectorXd> r(reward.data(), n);
    const Eigen::Map<const Eigen::VectorXd> v(value.values().data(), n);
    const Eigen::VectorXd residual = v - alpha * (kernel.matrix() * v) - r;
    return residual.cwiseAbs().maxCoeff();
}

ValueTable value_function(const SocialState& social, const TransitionKernel& kernel, std::span<const double> reward,
                          const ModelParams& p)
{
    const auto& dims = social.dims();
    if (!(p.alpha >= 0.0 && p.alpha < 1.0)) {
        throw ValidationError("value function needs 0 <= alpha < 1");
    }
    if (reward.size() != dims.num_states() || !(kernel.dims() == dims)) {
        throw ValidationError("value function inputs have mismatched dimensions");
    }
    const auto n = static_cast<Eigen::Index>(dims.num_states());
    const Eigen::Map<const Eigen::VectorXd> r(reward.data(), n);
    const Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n) - p.alpha * kernel.matrix();
    const Eigen::VectorXd v = system.partialPivLu().solve(r);

    ValueTable value(dims, std::vector<double>(v.data(), v.data() + v.size()));
    const double residual = bellman_residual(kernel, reward, value, p.alpha);
    if (!(residual < 1e-10)) {
        throw NumericalError("Bellman solve residual " + std::to_string(residual) + " exceeds 1e-10");
    }
    return value;
}

QTable::QTable(Dimensions dims, std::vector<double> values) : dims_(dims), values_(std::move(values))
{
    if (values_.size() != dims_.num_states() * dims_.num_actions()) {
        throw ValidationError("Q table has the wrong size");
    }
}

QTable q_function(const SocialState& social, const ValueTable& value, const RewardConfig& cfg,
                  const ModelParams& p)
{
    const auto& dims = social.dims();
    const auto g = encounter_probs(activity_masses(social, p), p);
    std::vector<double> q(dims.num_states() * dims.num_actions());
    for (int z = 0; z < dims.num_zones(); ++z) {
        for (auto s : kAllInfectionStates) {
            double* row = q.data() + dims.state_index(s, z) * dims.num_actions();
            for (int a = 0; a <= dims.a_max(); ++a) {
                const auto infection = infection_transition(s, z, a, g, p);
                for (int target = 0; target < dims.num_zones(); ++target) {
                    double future = 0.0;
                    for (auto next : kAllInfectionStates) {
                        future += infection[rank(next)] * value(next, target);
                    }
                    row[dims.action_index(a, target)] = immediate_reward(s, z, a, target, cfg) + p.alpha * future;
                }
            }
        }
    }
    return QTable(dims, std::move(q));
}

BestResponse best_response(const QTable& q, InfectionState s, int zone, const ChoiceRules& rules)
{
    const auto& dims = q.dims();
    const auto row = q.row(s, zone);
    BestResponse br;
    br.value = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < row.size(); ++j) {
        if (rules.feasible(s, dims.action_at(j))) {
            br.value = std::max(br.value, row[j]);
        }
    }
    for (std::size_t j = 0; j < row.size(); ++j) {
        if (rules.feasible(s, dims.action_at(j)) && row[j] >= br.value - kTieTolerance) {
            br.actions.push_back(j);
        }
    }
    br.mixture.assign(row.size(), 0.0);
    for (auto j : br.actions) {
        br.mixture[j] = 1.0 / static_cast<double>(br.actions.size());
    }
    return br;
}

std::vector<double> healthy_q_row(const QTable& q, const StateDistribution& d, int zone, HealthyQMode mode)
{
    const auto susceptible = q.row(InfectionState::S, zone);
    std::vector<double> out(susceptible.begin(), susceptible.end());
    if (mode == HealthyQMode::AssumeSusceptible) {
        return out;
    }
    const double mass_s = d(InfectionState::S, zone);
    const double mass_a = d(InfectionState::A, zone);
    const double mass_u = d(InfectionState::U, zone);
    const double healthy = mass_s + mass_a + mass_u;
    if (healthy < 1e-12) {
        return out;
    }
    const auto asymptomatic = q.row(InfectionState::A, zone);
    const auto unknowing = q.row(InfectionState::U, zone);
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] = (mass_s * susceptible[j] + mass_a * asymptomatic[j] + mass_u * unknowing[j]) / healthy;
    }
    return out;
}

std::vector<double> logit_row(std::span<const double> q, double lambda, std::span<const bool> feasible)
{
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < q.size(); ++j) {
        if (feasible[j]) {
            top = std::max(top, lambda * q[j]);
        }
    }
    if (!std::isfinite(top)) {
        throw ValidationError("logit row has no feasible finite entry");
    }
    std::vector<double> out(q.size(), 0.0);
    double sum = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) {
        if (feasible[j]) {
            out[j] = std::exp(lambda * q[j] - top);
            sum += out[j];
        }
    }
    for (double& v : out) {
        v /= sum;
    }
    return out;
}

Policy logit_choice(const QTable& q, const StateDistribution& d, const ModelParams& p, const ChoiceRules& rules)
{
    const auto& dims = q.dims();
    std::vector<double> rows(kNumBehaviorClasses * dims.num_zones() * dims.num_actions());
    // std::vector<bool> cannot back a span.
    auto mask = std::make_unique<bool[]>(dims.num_actions());
    for (auto c : kAllBehaviorClasses) {
        for (std::size_t j = 0; j < dims.num_actions(); ++j) {
            mask[j] = rules.feasible(c, dims.action_at(j));
        }
        const std::span<const bool> feasible(mask.get(), dims.num_actions());
        for (int z = 0; z < dims.num_zones(); ++z) {
            std::vector<double> target;
            switch (c) {
            case BehaviorClass::Healthy:
                target = logit_row(healthy_q_row(q, d, z, rules.healthy_q), p.lambda, feasible);
                break;
            case BehaviorClass::Infected:
                target = logit_row(q.row(InfectionState::I, z), p.lambda, feasible);
                break;
            case BehaviorClass::Recovered:
                target = logit_row(q.row(InfectionState::R, z), p.lambda, feasible);
                break;
            }
            std::copy(target.begin(), target.end(), rows.begin() + static_cast<std::ptrdiff_t>(Policy::row_offset(dims, c, z)));
        }
    }
    return Policy(dims, std::move(rows));
}

Policy policy_update(const Policy& current, const Policy& target, double eta)
{
    if (!(current.dims() == target.dims())) {
        throw ValidationError("policy update with mismatched dimensions");
    }
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw ValidationError("policy update needs 0 < eta <= 1");
    }
    const auto a = current.values();
    const auto b = target.values();
    std::vector<double> rows(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        rows[i] = eta == 1.0 ? b[i] : (1.0 - eta) * a[i] + eta * b[i];
    }
    return Policy(current.dims(), std::move(rows));
}

} // namespace dpg

#include "dpg/epidemic.hpp"

#include <algorithm>
#include <cmath>

namespace dpg {

ActivityMasses activity_masses(const SocialState& social, [[maybe_unused]] const ModelParams& p)
{
    const auto& dims = social.dims();
    const auto zones = static_cast<std::size_t>(dims.num_zones());
    ActivityMasses m{std::vector<double>(zones, 0.0), std::vector<double>(zones, 0.0),
                     std::vector<double>(zones, 0.0)};
    for (int z = 0; z < dims.num_zones(); ++z) {
        const auto zi = static_cast<std::size_t>(z);
        for (auto s : kAllInfectionStates) {
            const double e = social.dist(s, z) * social.policy.mean_degree(behavior_class(s), z);
            m.total[zi] += e;
            if (s == InfectionState::A) {
                m.asymptomatic[zi] = e;
            } else if (s == InfectionState::I) {
                m.symptomatic[zi] = e;
            }
        }
    }
    return m;
}

EncounterProbs encounter_probs(const ActivityMasses& m, const ModelParams& p)
{
    const std::size_t zones = m.total.size();
    EncounterProbs g{std::vector<double>(zones), std::vector<double>(zones), std::vector<double>(zones)};
    for (std::size_t z = 0; z < zones; ++z) {
        const double denom = m.total[z] + p.epsilon;
        g.empty[z] = p.epsilon / denom;
        g.asymptomatic[z] = m.asymptomatic[z] / denom;
        g.symptomatic[z] = m.symptomatic[z] / denom;
    }
    return g;
}

InfectionDistribution infection_transition(InfectionState s, int zone, int degree, const EncounterProbs& g,
                                           const ModelParams& p)
{
    if (degree < 0 || degree > p.a_max) {
        throw ValidationError("activation degree " + std::to_string(degree) + " outside 0.." +
                              std::to_string(p.a_max));
    }
    InfectionDistribution next{};
    auto at = [&next](InfectionState t) -> double& { return next[rank(t)]; };
    switch (s) {
    case InfectionState::S: {
        const auto zi = static_cast<std::size_t>(zone);
        // Clamp guards float drift only; beta <= 1 and gamma_A + gamma_I <= 1.
        const double risk =
            std::clamp(p.beta_A * g.asymptomatic[zi] + p.beta_I * g.symptomatic[zi], 0.0, 1.0);
        const double stay = std::pow(1.0 - risk, degree);
        at(InfectionState::S) = stay;
        at(InfectionState::A) = 1.0 - stay;
        break;
    }
    case InfectionState::A:
        at(InfectionState::I) = p.delta_A_I;
        at(InfectionState::U) = p.delta_A_U;
        at(InfectionState::A) = 1.0 - p.delta_A_I - p.delta_A_U;
        break;
    case InfectionState::I:
        at(InfectionState::R) = p.delta_I_R;
        at(InfectionState::I) = 1.0 - p.delta_I_R;
        break;
    case InfectionState::R:
        at(InfectionState::R) = 1.0;
        break;
    case InfectionState::U:
        at(InfectionState::R) = p.delta_U_R;
        at(InfectionState::U) = 1.0 - p.delta_U_R;
        break;
    }
    return next;
}

std::vector<double> state_transition(StateIndex from, ActionIndex action, const EncounterProbs& g,
                                     const ModelParams& p)
{
    const Dimensions dims(p);
    if (action.target < 0 || action.target >= dims.num_zones()) {
        throw ValidationError("target zone " + std::to_string(action.target) + " out of range");
    }
    const auto infection = infection_transition(from.state, from.zone, action.degree, g, p);
    std::vector<double> next(dims.num_states(), 0.0);
    for (auto s : kAllInfectionStates) {
        next[dims.state_index(s, action.target)] = infection[rank(s)];
    }
    return next;
}

std::vector<double> state_transition(StateIndex from, ActionIndex action, const SocialState& social,
                                     const ModelParams& p)
{
    return state_transition(from, action, encounter_probs(activity_masses(social, p), p), p);
}

TransitionKernel::TransitionKernel(Dimensions dims, Eigen::MatrixXd matrix) : dims_(dims), matrix_(std::move(matrix))
{
    const auto n = static_cast<Eigen::Index>(dims_.num_states());
    if (matrix_.rows() != n || matrix_.cols() != n) {
        throw ValidationError("transition kernel has the wrong shape");
    }
}

double TransitionKernel::max_row_sum_deviation() const
{
    return (matrix_.rowwise().sum().array() - 1.0).abs().maxCoeff();
}

std::vector<double> TransitionKernel::propagate(const StateDistribution& d) const
{
    const auto values = d.values();
    const Eigen::Map<const Eigen::RowVectorXd> row(values.data(), static_cast<Eigen::Index>(values.size()));
    const Eigen::RowVectorXd next = row * matrix_;
    return {next.data(), next.data() + next.size()};
}

TransitionKernel transition_matrix(const SocialState& social, const ModelParams& p)
{
    const auto& dims = social.dims();
    const auto g = encounter_probs(activity_masses(social, p), p);
    const auto n = static_cast<Eigen::Index>(dims.num_states());
    Eigen::MatrixXd matrix = Eigen::MatrixXd::Zero(n, n);

    for (int z = 0; z < dims.num_zones(); ++z) {
        for (auto s : kAllInfectionStates) {
            const auto from = static_cast<Eigen::Index>(dims.state_index(s, z));
            const auto policy_row = social.policy.row(s, z);
            for (int a = 0; a <= dims.a_max(); ++a) {
                const auto infection = infection_transition(s, z, a, g, p);
                for (int target = 0; target < dims.num_zones(); ++target) {
                    const double weight = policy_row[dims.action_index(a, target)];
                    if (weight == 0.0) {
                        continue;
                    }
                    for (auto next : kAllInfectionStates) {
                        matrix(from, static_cast<Eigen::Index>(dims.state_index(next, target))) +=
                            weight * infection[rank(next)];
                    }
                }
            }
        }
    }
    return TransitionKernel(dims, std::move(matrix));
}

} // namespace dpg

#pragma once

// Social-state-dependent transition kernel of the SAIRU model over zones.

#include "dpg/core.hpp"

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace dpg {

/// Per-zone activity masses.
struct ActivityMasses {
    std::vector<double> total;
    std::vector<double> asymptomatic;
    std::vector<double> symptomatic;
};

/// Per-zone pairing probabilities: no partner (fictitious activity),
/// asymptomatic partner, symptomatic partner.
struct EncounterProbs {
    std::vector<double> empty;
    std::vector<double> asymptomatic;
    std::vector<double> symptomatic;
};

using InfectionDistribution = std::array<double, kNumInfectionStates>;

ActivityMasses activity_masses(const SocialState& social, const ModelParams& p);
EncounterProbs encounter_probs(const ActivityMasses& m, const ModelParams& p);

/// Distribution of next infection state for an agent in (s, zone) activating
/// with degree `degree`. Throws ValidationError if degree is outside 0..a_max.
InfectionDistribution infection_transition(InfectionState s, int zone, int degree, const EncounterProbs& g,
                                           const ModelParams& p);

/// Distribution over the 5Z next states (s+, z+) for one action; z+ = target.
std::vector<double> state_transition(StateIndex from, ActionIndex action, const EncounterProbs& g,
                                     const ModelParams& p);
std::vector<double> state_transition(StateIndex from, ActionIndex action, const SocialState& social,
                                     const ModelParams& p);

/// Dense row-stochastic 5Z x 5Z matrix P[(s,z) -> (s+,z+)].
class TransitionKernel {
public:
    TransitionKernel(Dimensions dims, Eigen::MatrixXd matrix);

    const Dimensions& dims() const { return dims_; }
    const Eigen::MatrixXd& matrix() const { return matrix_; }
    double operator()(StateIndex from, StateIndex to) const
    {
        return matrix_(static_cast<Eigen::Index>(dims_.state_index(from)),
                       static_cast<Eigen::Index>(dims_.state_index(to)));
    }

    /// Largest |row sum - 1|.
    double max_row_sum_deviation() const;

    /// d P as a raw vector (not renormalized).
    std::vector<double> propagate(const StateDistribution& d) const;

private:
    Dimensions dims_;
    Eigen::MatrixXd matrix_;
};

TransitionKernel transition_matrix(const SocialState& social, const ModelParams& p);

} // namespace dpg

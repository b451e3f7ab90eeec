#pragma once

// Stationary equilibria: verification of best-response optimality and
// distribution stationarity, and the closed-form family of equilibria in
// which the epidemic has died out.

#include "dpg/core.hpp"
#include "dpg/decision.hpp"
#include "dpg/rewards.hpp"

#include <array>
#include <limits>
#include <vector>

namespace dpg {

/// Per infection state: best activation rewards per zone, and the split of
/// zones into best zones (Z_bar), zones worth paying c_mig to leave (Z_zero)
/// and the rest (Z_n).
struct ZoneClassification {
    Dimensions dims;
    double alpha = 0.0;
    double c_mig = 0.0;
    /// (1 - alpha) / alpha * c_mig; infinite for alpha = 0.
    double threshold = std::numeric_limits<double>::infinity();

    std::vector<double> r_act_star{};      ///< flat state index
    std::vector<std::vector<int>> a_star{};///< argmax degrees, flat state index
    std::array<double, kNumInfectionStates> r_bar{};
    std::array<std::vector<int>, kNumInfectionStates> z_bar{};
    std::array<std::vector<int>, kNumInfectionStates> z_zero{};
    std::array<std::vector<int>, kNumInfectionStates> z_n{};

    double best_activation_reward(InfectionState s, int zone) const { return r_act_star[dims.state_index(s, zone)]; }
    const std::vector<int>& best_degrees(InfectionState s, int zone) const { return a_star[dims.state_index(s, zone)]; }
    bool in_z_bar(InfectionState s, int zone) const;
    bool in_z_zero(InfectionState s, int zone) const;
};

/// Degrees maximizing o[a] - c[s,z,a], ties within kTieTolerance.
std::vector<int> activation_argmax(InfectionState s, int zone, const RewardConfig& cfg);
/// Dominant activation degrees of knowingly recovered agents in `zone`.
std::vector<int> dominant_activation(int zone, const RewardConfig& cfg);

/// z is in Z_zero[s] iff r_bar[s] - r_act_star[s,z] > (1 - alpha) / alpha * c_mig
/// (strict). Throws ValidationError for c_mig < 0 or alpha outside [0, 1).
ZoneClassification classify_zones(const RewardConfig& cfg, const ModelParams& p);

/// Builds the equilibrium with state distribution `mass` (flattened 5Z):
/// mass only on S and R outside Z_zero, activation in A*, agents in Z_zero
/// zones move to Z_bar, agents elsewhere stay. Ties are mixed uniformly.
/// Throws ValidationError naming the violated condition.
SocialState construct_equilibrium(const ZoneClassification& zc, const std::vector<double>& mass,
                                  const ChoiceRules& rules = {});

struct EquilibriumReport {
    double se1_gap = 0.0;            ///< worst improvement over occupied states
    double se1_gap_unoccupied = 0.0; ///< same over states with zero mass
    StateIndex worst_state{InfectionState::S, 0};
    std::vector<double> state_gaps;  ///< max feasible Q - sum pi Q, per flat state
    double se2_gap = 0.0;            ///< ||d - d P||_inf
    double tolerance = 0.0;
    bool verdict = false;            ///< se1_gap <= tol and se2_gap <= tol
};

EquilibriumReport check_equilibrium(const SocialState& social, const GameModel& model, double tol);

} // namespace dpg

#pragma once

#include "dpg/equilibrium.hpp"
#include "random_state.hpp"

namespace dpg::testing {

struct EquilibriumCase {
    GameModel model;
    ZoneClassification zones;
    std::vector<double> mass;
};

/// Random lockdown tables, c_mig in (0, 5], alpha in {0.5, 0.9, 0.99}, and a
/// random split of mass over S and R outside Z_zero.
inline EquilibriumCase random_equilibrium_case(Rng& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ModelParams p;
    p.num_zones = std::uniform_int_distribution<int>(1, 4)(rng);
    p.a_max = 6;
    p.alpha = std::array{0.5, 0.9, 0.99}[std::uniform_int_distribution<int>(0, 2)(rng)];
    p.c_mig = 5.0 * (1.0 - u(rng)); // (0, 5]
    p.delta_U_R = 0.05;
    const auto rewards = random_rewards(p, rng);
    const GameModel model{p, rewards, ChoiceRules{}};
    auto zc = classify_zones(rewards, p);

    const Dimensions dims(p);
    std::vector<double> mass(dims.num_states(), 0.0);
    double total = 0.0;
    for (int z = 0; z < p.num_zones; ++z) {
        for (auto s : {InfectionState::S, InfectionState::R}) {
            if (!zc.in_z_zero(s, z) && u(rng) < 0.7) {
                mass[dims.state_index(s, z)] = u(rng);
                total += mass[dims.state_index(s, z)];
            }
        }
    }
    if (total == 0.0) {
        // Z_bar[R] is never empty
        mass[dims.state_index(InfectionState::R, zc.z_bar[rank(InfectionState::R)].front())] = total = 1.0;
    }
    for (auto& m : mass) {
        m /= total;
    }
    return {model, std::move(zc), std::move(mass)};
}

} // namespace dpg::testing
